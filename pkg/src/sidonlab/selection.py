"""Two-stage Bernoulli selection in (Z/pZ)^nu and the certified search.

Stage one keeps each point of X = (Z/pZ)^nu independently with probability
alpha = 2 * ell * nu / p^nu, giving a set Lambda whose size concentrates in
[ell*nu, 3*ell*nu].  Stage two thins Lambda with probability
beta = 1 / (4 p ell); the thinned set is linearly dependent over F_p with
probability below p^(-nu/2).  ``lemma_search`` resamples Lambda until every
subset of size <= floor(K * nu) is free, K = (1/4) log p / log(4 p ell)
(or K = 1/8 when 4*ell < p), and returns a re-verifiable certificate.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

import numpy as np

from .core import FpVector, fp_rank, is_free, is_prime
from .rng import stream

__all__ = [
    "SelectionConfig",
    "LemmaCertificate",
    "SelectionError",
    "SearchFailure",
    "k_ell",
    "sample_lambda",
    "sample_sub_lambda",
    "estimate_tied_probability",
    "lemma_search",
    "exact_dependence_probability",
    "enumerate_dependence_probability",
]

SAMPLING_CAP_DEFAULT = 2**26
_CHUNK = 1 << 20


class SelectionError(RuntimeError):
    """A probability bound check failed beyond the statistical slack."""


class SearchFailure(RuntimeError):
    """Retry budget exhausted without a certifiable set."""


def k_ell(p: int, ell: int) -> float:
    """(1/4) * log(p) / log(4*p*ell), natural logs."""
    if p < 2 or ell < 1:
        raise ValueError("need p >= 2 and ell >= 1")
    return 0.25 * math.log(p) / math.log(4 * p * ell)


@dataclass(frozen=True)
class SelectionConfig:
    """Parameters of the two-stage selection."""

    p: int
    nu: int
    ell: int
    seed: int = 0
    trials: int = 1000

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if self.nu < 1 or self.ell < 1:
            raise ValueError("need nu >= 1 and ell >= 1")
        if 2 * self.ell * self.nu >= self.p**self.nu:
            raise ValueError("alpha = 2*ell*nu/p^nu must be < 1")

    @property
    def space_size(self) -> int:
        return self.p**self.nu

    @property
    def alpha(self) -> float:
        return 2 * self.ell * self.nu / self.space_size

    @property
    def beta(self) -> float:
        return 1.0 / (4 * self.p * self.ell)

    def lemma_mode_ok(self) -> bool:
        return self.nu >= 16 and 2 * self.ell * self.nu <= self.space_size


def _decode(index: int, p: int, nu: int) -> FpVector:
    digits = []
    for _ in range(nu):
        index, r = divmod(index, p)
        digits.append(r)
    return FpVector(p, tuple(digits))


def sample_lambda(
    cfg: SelectionConfig, trial: int = 0, cap: int = SAMPLING_CAP_DEFAULT
) -> set[FpVector]:
    """Bernoulli(alpha) sample of the full space; deterministic given seed."""
    size = cfg.space_size
    if size > cap:
        raise MemoryError(
            f"p^nu = {size} exceeds the pointwise sampling cap {cap}"
        )
    rng = stream(cfg.seed, cfg.p, cfg.nu, cfg.ell, trial, 0)
    alpha = cfg.alpha
    out: set[FpVector] = set()
    for start in range(0, size, _CHUNK):
        n = min(_CHUNK, size - start)
        hits = np.nonzero(rng.random(n) < alpha)[0]
        for i in hits:
            out.add(_decode(start + int(i), cfg.p, cfg.nu))
    return out


def sample_sub_lambda(
    Lambda: set[FpVector],
    cfg: SelectionConfig,
    trial: int = 0,
    beta: Optional[float] = None,
) -> set[FpVector]:
    """Keep each element of Lambda independently with probability beta."""
    if beta is None:
        beta = cfg.beta
    ordered = sorted(Lambda, key=lambda v: v.coords)
    if not ordered:
        return set()
    rng = stream(cfg.seed, cfg.p, cfg.nu, cfg.ell, trial, 1)
    u = rng.random(len(ordered))
    return {v for v, x in zip(ordered, u) if x < beta}


class TiedEstimate(NamedTuple):
    estimate: float
    bound: float


def estimate_tied_probability(
    cfg: SelectionConfig, cap: int = SAMPLING_CAP_DEFAULT
) -> TiedEstimate:
    """Monte-Carlo frequency of a linearly dependent thinned set.

    Compares against the analytic bound p^(-nu/2); raises SelectionError if
    the frequency exceeds the bound by more than 3 binomial sigma (sigma
    evaluated at the bound).
    """
    if cfg.trials < 100:
        raise ValueError("need trials >= 100")
    tied = 0
    for t in range(cfg.trials):
        lam = sample_sub_lambda(sample_lambda(cfg, t, cap), cfg, t)
        if not is_free(sorted(lam, key=lambda v: v.coords)):
            tied += 1
    estimate = tied / cfg.trials
    bound = cfg.p ** (-cfg.nu / 2)
    sigma = math.sqrt(bound * (1 - bound) / cfg.trials)
    if estimate > bound + 3 * sigma:
        raise SelectionError(
            f"tied frequency {estimate} exceeds {bound} + 3 sigma ({3 * sigma})"
        )
    return TiedEstimate(estimate, bound)


# ---------------------------------------------------------------------------
# the certified search
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LemmaCertificate:
    """A set with the size window and exhaustively checked freeness.

    ``mode`` records how Lambda was drawn: "bernoulli" for the pointwise
    sample, "direct" for the Poissonized point sample used when p^nu
    exceeds the pointwise cap.  ``use_eighth`` marks the K -> 1/8
    replacement available when 4*ell < p.
    """

    p: int
    nu: int
    ell: int
    Lambda: tuple[FpVector, ...]
    K: float
    checked_subset_size: int
    exhaustive: bool
    mode: str
    use_eighth: bool
    seed: int
    trial_found: int

    def verify(self, subset_cap: int = 2 * 10**6) -> bool:
        """Independent revalidation: size window plus plain subset ranks."""
        n = len(self.Lambda)
        if not (self.ell * self.nu <= n <= 3 * self.ell * self.nu):
            return False
        m = min(self.checked_subset_size, n)
        if m <= 0:
            return True
        if math.comb(n, m) > subset_cap:
            raise MemoryError("subset revalidation exceeds the budget")
        for subset in itertools.combinations(self.Lambda, m):
            if fp_rank(subset) != m:
                return False
        return True


def _subsets_free(points: list[FpVector], m: int, budget: int) -> bool:
    """All subsets of size <= m are free (equivalently all m-subsets)."""
    n = len(points)
    m = min(m, n)
    if m <= 0:
        return True
    if any(v.is_zero() for v in points):
        return False
    if m == 1:
        return True
    # Pairs are free iff no two points are proportional; normalizing the
    # first nonzero coordinate to 1 detects that in one pass.
    normalized = set()
    for v in points:
        lead = next(c for c in v.coords if c)
        inv = pow(lead, -1, v.p)
        normalized.add(tuple(inv * c % v.p for c in v.coords))
    if len(normalized) != n:
        return False
    if m == 2:
        return True
    if math.comb(n, m) > budget:
        raise MemoryError(
            f"C({n},{m}) subset checks exceed the budget {budget}"
        )
    for subset in itertools.combinations(points, m):
        if fp_rank(subset) != m:
            return False
    return True


def _sample_direct(cfg: SelectionConfig, trial: int) -> set[FpVector]:
    """Poissonized point sample for spaces beyond the pointwise cap.

    |Lambda| ~ Poisson(2*ell*nu) is the p^nu -> infinity limit of the
    Binomial(p^nu, alpha) law; points are then uniform and independent
    (deduplicated; collisions have negligible probability at this scale).
    """
    rng = stream(cfg.seed, cfg.p, cfg.nu, cfg.ell, trial, 2)
    size = int(rng.poisson(2 * cfg.ell * cfg.nu))
    coords = rng.integers(0, cfg.p, size=(size, cfg.nu))
    return {FpVector(cfg.p, tuple(int(c) for c in row)) for row in coords}


def lemma_search(
    cfg: SelectionConfig,
    use_eighth: bool = False,
    max_retries: int = 10**4,
    subset_budget: int = 2 * 10**6,
    cap: int = SAMPLING_CAP_DEFAULT,
) -> LemmaCertificate:
    """Resample until the size window and subset freeness both hold.

    With use_eighth (requires 4*ell < p) the checked subset size is
    floor(nu/8) instead of floor(K_ell * nu).
    """
    if not cfg.lemma_mode_ok():
        raise ValueError("lemma mode needs nu >= 16 and ell <= p^nu/(2 nu)")
    if use_eighth and not 4 * cfg.ell < cfg.p:
        raise ValueError("the K -> 1/8 replacement requires 4*ell < p")
    K = 0.125 if use_eighth else k_ell(cfg.p, cfg.ell)
    m = math.floor(K * cfg.nu)
    pointwise = cfg.space_size <= cap
    lo, hi = cfg.ell * cfg.nu, 3 * cfg.ell * cfg.nu
    for t in range(max_retries):
        lam = sample_lambda(cfg, t, cap) if pointwise else _sample_direct(cfg, t)
        if not lo <= len(lam) <= hi:
            continue
        points = sorted(lam, key=lambda v: v.coords)
        if not _subsets_free(points, m, subset_budget):
            continue
        return LemmaCertificate(
            p=cfg.p,
            nu=cfg.nu,
            ell=cfg.ell,
            Lambda=tuple(points),
            K=K,
            checked_subset_size=m,
            exhaustive=True,
            mode="bernoulli" if pointwise else "direct",
            use_eighth=use_eighth,
            seed=cfg.seed,
            trial_found=t,
        )
    raise SearchFailure(
        f"no certifiable set within {max_retries} retries for "
        f"(p={cfg.p}, nu={cfg.nu}, ell={cfg.ell})"
    )


# ---------------------------------------------------------------------------
# exact small-case dependence probabilities
# ---------------------------------------------------------------------------


def exact_dependence_probability(p: int, nu: int, k: int) -> Fraction:
    """P(k uniform random distinct points of F_p^nu are dependent), exact.

    Product form: the (j+1)-st point breaks freeness with probability
    (p^j - j) / (p^nu - j) given the first j were free.
    """
    size = p**nu
    if k > size:
        raise ValueError("cannot draw more distinct points than the space has")
    free = Fraction(1)
    for j in range(k):
        free *= Fraction(size - p**j, size - j)
    return 1 - free


def enumerate_dependence_probability(p: int, nu: int, k: int) -> Fraction:
    """Brute-force enumeration over all k-subsets (small spaces only)."""
    size = p**nu
    if math.comb(size, k) > 10**6:
        raise MemoryError("enumeration oracle limited to ~1e6 subsets")
    points = [_decode(i, p, nu) for i in range(size)]
    total = 0
    dependent = 0
    for subset in itertools.combinations(points, k):
        total += 1
        if fp_rank(subset) != k:
            dependent += 1
    return Fraction(dependent, total)
