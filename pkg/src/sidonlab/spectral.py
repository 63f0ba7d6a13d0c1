"""Walsh spectra on (Z/2Z)^nu, flat random selections, and the
exponential-norm witness.

Characters are identified with nu-bit masks; y acts on x as
(-1)^popcount(x & y).  ``fwht`` is the unnormalized fast transform (an
involution up to the factor 2^nu).  ``sample_flat_lambda`` draws Bernoulli
selections until the nontrivial spectrum is flat relative to the mass at
the trivial character; ``analyticity_witness`` then certifies, by duality,
a lower bound on the restriction-algebra norm of exp(i pi/4 f) for a sum f
of independent characters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .rng import stream

__all__ = [
    "fwht",
    "naive_wht",
    "SpectralTable",
    "sigma_hat",
    "FlatSample",
    "FlatnessFailure",
    "sample_flat_lambda",
    "WitnessReport",
    "analyticity_witness",
    "masks_independent",
    "a_norm_upper_bound",
]

NU_CAP = 26


class FlatnessFailure(RuntimeError):
    """No flat sample found within the retry budget."""


def _target_dtype(a: np.ndarray) -> np.dtype:
    if np.issubdtype(a.dtype, np.complexfloating):
        return np.dtype(np.complex128)
    if np.issubdtype(a.dtype, np.floating):
        return np.dtype(np.float64)
    return np.dtype(np.int64)


def fwht(values) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform.

    out[y] = sum_x in[x] * (-1)^popcount(x & y); applying it twice returns
    2^nu times the input.  Integer inputs stay exact (int64).
    """
    a = np.asarray(values)
    if a.ndim != 1:
        raise ValueError("expected a one-dimensional array")
    n = a.shape[0]
    if n == 0 or n & (n - 1):
        raise ValueError(f"length {n} is not a power of two")
    a = a.astype(_target_dtype(a), copy=True)
    h = 1
    while h < n:
        a = a.reshape(-1, 2, h)
        top = a[:, 0, :].copy()
        a[:, 0, :] += a[:, 1, :]
        a[:, 1, :] = top - a[:, 1, :]
        a = a.reshape(n)
        h *= 2
    return a


def naive_wht(values) -> np.ndarray:
    """Quadratic-time transform used as the independent oracle."""
    a = np.asarray(values)
    n = a.shape[0]
    out = np.zeros(n, dtype=_target_dtype(a))
    for y in range(n):
        s = out.dtype.type(0)
        for x in range(n):
            s += a[x] if (x & y).bit_count() % 2 == 0 else -a[x]
        out[y] = s
    return out


@dataclass(frozen=True, eq=False)
class SpectralTable:
    """A full spectrum, indexed by the nu-bit character mask."""

    nu: int
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != (2**self.nu,):
            raise ValueError("spectrum length must be 2^nu")
        self.values.flags.writeable = False

    @property
    def at_one(self) -> float:
        """The value at the trivial character (mask 0)."""
        return float(abs(self.values[0]))

    def sup_offpeak(self) -> float:
        if len(self.values) == 1:
            return 0.0
        return float(np.abs(self.values[1:]).max())


def _as_mask_array(lam: Union[np.ndarray, Iterable[int]], nu: Optional[int]) -> np.ndarray:
    if isinstance(lam, np.ndarray) and lam.dtype == bool:
        return lam
    masks = list(lam)
    if nu is None:
        raise ValueError("nu is required when passing masks")
    out = np.zeros(2**nu, dtype=bool)
    for m in masks:
        out[int(m)] = True
    return out


def sigma_hat(lam: Union[np.ndarray, Iterable[int]], nu: Optional[int] = None) -> SpectralTable:
    """Transform of the counting measure of a subset of (Z/2Z)^nu.

    The value at mask 0 equals |Lambda|.  Verifies the Parseval identity
    sum_y s(y)^2 = 2^nu * |Lambda| to 1e-9 relative before returning.
    """
    mask = _as_mask_array(lam, nu)
    n = mask.shape[0]
    nu = n.bit_length() - 1
    if nu > NU_CAP:
        raise MemoryError(f"nu = {nu} exceeds the cap {NU_CAP}")
    table = fwht(mask.astype(np.float64))
    lhs = float(np.sum(table * table))
    rhs = float(n) * float(mask.sum())
    if rhs > 0 and abs(lhs - rhs) > 1e-9 * rhs:
        raise AssertionError("Parseval identity violated beyond tolerance")
    return SpectralTable(nu, table)


@dataclass(frozen=True, eq=False)
class FlatSample:
    """A Bernoulli selection whose nontrivial spectrum is flat."""

    nu: int
    ell: int
    alpha: float
    mask: np.ndarray
    spectrum: SpectralTable
    retries_used: int
    lambda_param: float  # 10 * sqrt(nu), the tail parameter backing flatness

    @property
    def sigma1(self) -> float:
        return self.spectrum.at_one

    @property
    def sup_offpeak(self) -> float:
        return self.spectrum.sup_offpeak()

    @property
    def flatness_threshold(self) -> float:
        return (20.0 / math.sqrt(self.ell)) * self.sigma1


def sample_flat_lambda(
    nu: int,
    ell: int,
    seed: int = 0,
    max_retries: int = 20,
) -> FlatSample:
    """Resample Bernoulli(alpha) subsets until the spectrum is flat.

    alpha = 2*ell*nu*2^(-nu) must be < 1 and ell > 400.  Success means the
    trivial value is at least ell*nu and every nontrivial value is at most
    (20/sqrt(ell)) times the trivial one.
    """
    if nu > NU_CAP:
        raise MemoryError(f"nu = {nu} exceeds the cap {NU_CAP}")
    if ell <= 400:
        raise ValueError("need ell > 400")
    n = 2**nu
    alpha = 2 * ell * nu / n
    if not 0 < alpha < 1:
        raise ValueError(f"alpha = {alpha} must lie in (0, 1)")
    ratio = 20.0 / math.sqrt(ell)
    for t in range(max_retries):
        rng = stream(seed, nu, ell, t)
        mask = rng.random(n) < alpha
        table = sigma_hat(mask)
        s1 = table.at_one
        if s1 >= ell * nu and table.sup_offpeak() <= ratio * s1:
            return FlatSample(
                nu=nu,
                ell=ell,
                alpha=alpha,
                mask=mask,
                spectrum=table,
                retries_used=t + 1,
                lambda_param=10.0 * math.sqrt(nu),
            )
    raise FlatnessFailure(f"no flat sample in {max_retries} retries")


# ---------------------------------------------------------------------------
# the witness
# ---------------------------------------------------------------------------


def masks_independent(masks: Sequence[int]) -> bool:
    """Linear independence over F_2 of character masks."""
    basis: list[int] = []
    for m in masks:
        m = int(m)
        for b in basis:
            m = min(m, m ^ b)
        if m == 0:
            return False
        basis.append(m)
    return True


def _character_values(nu: int, y: int) -> np.ndarray:
    """(-1)^popcount(x & y) for all x, as an int8 array."""
    x = np.arange(2**nu, dtype=np.int64)
    acc = np.zeros(2**nu, dtype=np.int64)
    bit = 0
    yy = int(y)
    while yy:
        if yy & 1:
            acc ^= (x >> bit) & 1
        yy >>= 1
        bit += 1
    return (1 - 2 * acc).astype(np.int8)


@dataclass(frozen=True)
class WitnessReport:
    """Certified lower bound for the norm of exp(i pi/4 f) restricted to
    the sampled set, against the target (1/2) * 2^(rho/2)."""

    nu: int
    ell: int
    rho: int
    rho_exact: float
    sigma1: float
    sup_offpeak_sigma: float
    sup_mu: float
    lower_bound: float
    target: float
    chain_bound: float
    f_algebra_norm: float
    flatness_holds: bool
    passed: bool

    def to_dict(self) -> dict:
        return {
            "nu": self.nu,
            "ell": self.ell,
            "rho": self.rho,
            "rho_exact": self.rho_exact,
            "sigma1": self.sigma1,
            "sup_offpeak_sigma": self.sup_offpeak_sigma,
            "sup_mu": self.sup_mu,
            "lower_bound": self.lower_bound,
            "target": self.target,
            "chain_bound": self.chain_bound,
            "f_algebra_norm": self.f_algebra_norm,
            "flatness_holds": self.flatness_holds,
            "passed": self.passed,
        }


def default_rho(ell: int) -> tuple[int, float]:
    """round(log2(sqrt(ell)/20)), clipped at 0, plus the unrounded value."""
    exact = math.log2(math.sqrt(ell) / 20.0)
    return max(0, round(exact)), exact


def analyticity_witness(
    lam: Union[np.ndarray, Iterable[int], FlatSample],
    ell: Optional[int] = None,
    rho: Optional[int] = None,
    y_masks: Optional[Sequence[int]] = None,
    nu: Optional[int] = None,
) -> WitnessReport:
    """Duality lower bound for the restriction norm of v = exp(i pi/4 f).

    f = y_1 + ... + y_rho for independent characters; since each y_j takes
    values +-1, v = 2^(-rho/2) * prod_j (1 + i y_j), so |v^| equals
    2^(-rho/2) on the subgroup generated by the masks and vanishes
    elsewhere.  With sigma the counting measure of the sampled set and
    mu = v * sigma, the bound is sigma^(1) / sup_y |mu^(y)|, which applies
    to the norm of v via the norm equality for this unimodular v.

    Reports the exact algebra norm of f itself (= rho: one unit Walsh
    coefficient per mask) alongside the chain value
    (2^(-rho/2) + (20/sqrt(ell)) 2^(rho/2))^(-1).
    """
    if isinstance(lam, FlatSample):
        ell = lam.ell if ell is None else ell
        mask = lam.mask
    else:
        mask = _as_mask_array(lam, nu)
    if ell is None:
        raise ValueError("ell is required")
    n = mask.shape[0]
    nu = n.bit_length() - 1
    rho_default, rho_exact = default_rho(ell)
    if rho is None:
        rho = rho_default
    if rho > nu:
        raise ValueError("rho cannot exceed nu")
    if y_masks is None:
        y_masks = [1 << b for b in range(rho)]
    if len(y_masks) != rho:
        raise ValueError("need exactly rho character masks")
    if not masks_independent(y_masks):
        raise ValueError("character masks are dependent over F_2")

    f = np.zeros(n, dtype=np.int64)
    for y in y_masks:
        f += _character_values(nu, y)
    v = np.exp(1j * (math.pi / 4) * f)

    sigma = mask.astype(np.float64)
    sigma_spec = fwht(sigma)
    s1 = float(sigma_spec[0])
    sup_off = float(np.abs(sigma_spec[1:]).max()) if n > 1 else 0.0

    mu_spec = fwht(v * sigma)
    sup_mu = float(np.abs(mu_spec).max())

    f_norm = float(np.abs(fwht(f)).sum()) / n

    ratio = 20.0 / math.sqrt(ell)
    lower = s1 / sup_mu if sup_mu > 0 else math.inf
    target = 0.5 * 2 ** (rho / 2)
    chain = 1.0 / (2 ** (-rho / 2) + ratio * 2 ** (rho / 2))
    return WitnessReport(
        nu=nu,
        ell=ell,
        rho=rho,
        rho_exact=rho_exact,
        sigma1=s1,
        sup_offpeak_sigma=sup_off,
        sup_mu=sup_mu,
        lower_bound=lower,
        target=target,
        chain_bound=chain,
        f_algebra_norm=f_norm,
        flatness_holds=sup_off <= ratio * s1,
        passed=lower >= target,
    )


def a_norm_upper_bound(
    v: np.ndarray,
    mask: np.ndarray,
    iters: int = 400,
    step: float = 0.5,
) -> float:
    """Upper estimate of the restriction norm by subgradient descent.

    Minimizes the mean absolute spectrum over extensions of v|Lambda; every
    iterate is feasible, so the best objective seen is a valid upper bound
    on the restriction norm.  Small nu only; used as a cross-check against
    the duality lower bound.
    """
    n = v.shape[0]
    if n > 2**8:
        raise MemoryError("cross-check route is limited to nu <= 8")
    g = v.astype(np.complex128, copy=True)
    best = float(np.abs(fwht(g)).sum()) / n
    for t in range(1, iters + 1):
        spec = fwht(g)
        mag = np.abs(spec)
        phase = np.where(mag > 1e-15, spec / np.maximum(mag, 1e-300), 0)
        grad = fwht(phase) / n
        g = g - (step / math.sqrt(t)) * grad
        g[mask] = v[mask]
        best = min(best, float(np.abs(fwht(g)).sum()) / n)
    return best
