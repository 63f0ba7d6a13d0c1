"""Copies of (Z/pZ)^nu spread along Z by a rapidly growing integer basis.

The integers beta_i grow fast enough that every combination
sum m_i beta_i with |m_i| <= (q(i)-1)/2 is distinct, where
q(i) = 2 * nu_j * ((p_j - 1)/2)^2 + 1 on the indices of block j.  Block j
maps a certified selection in (Z/p_jZ)^{nu_j} onto the integers spanned by
its betas; the union obeys the mesh bound k * w(kh) while no tail of it is
close to independent.

The prime/size/density schedule (p_j fast, nu_j slow, ell_j very slow) must
satisfy a handful of inequalities on the declared (h, k) test grid; the
build refuses schedules that fail one, naming the condition.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .core import FpVector, LatticePoint, fp_rank, next_prime
from .growth import DoubleLog, GrowthFunction
from .mesh import BoundSpec, MeshReport, check_mesh_condition, random_meshes
from .selection import LemmaCertificate, SelectionConfig, lemma_search

__all__ = [
    "ScheduleError",
    "Schedule",
    "SpreadBlock",
    "SpreadSystem",
    "default_w",
    "build_theorem3_prefix",
    "well_spread_check",
    "v_p_size",
    "five_ten_bound",
    "pick_independent_subset",
]

J_CAP = 6  # p_7 would leave the deterministic primality range
GRID_H_DEFAULT = (1, 2, 3)
GRID_K_DEFAULT = (1, 2, 3, 4, 5)


class ScheduleError(ValueError):
    """A schedule condition fails on the declared test grid."""


def default_w() -> GrowthFunction:
    """The default weight; its scale keeps the schedule feasible on the
    default grid given that block sizes must be >= 16."""
    return DoubleLog(2500.0)


def _default_ell(j: int) -> int:
    return 1 + int(math.log2(1 + j))


def _default_nu(j: int) -> int:
    return 16 + j


@dataclass(frozen=True)
class Schedule:
    """Primes p_j (fast), sizes nu_j (slow), densities ell_j (very slow).

    Overridden prefixes extend by the default formulas beyond J.
    """

    J: int
    ells: tuple[int, ...]
    nus: tuple[int, ...]
    ps: tuple[int, ...]

    @classmethod
    def default(
        cls,
        J: int,
        ells: Optional[Sequence[int]] = None,
        nus: Optional[Sequence[int]] = None,
        ps: Optional[Sequence[int]] = None,
    ) -> "Schedule":
        if not 1 <= J <= J_CAP:
            raise ValueError(f"J must lie in [1, {J_CAP}]")
        ells = tuple(ells) if ells else tuple(_default_ell(j) for j in range(1, J + 1))
        nus = tuple(nus) if nus else tuple(_default_nu(j) for j in range(1, J + 1))
        ps = tuple(ps) if ps else tuple(
            next_prime(4 * e * 2 ** (2**j)) for j, e in zip(range(1, J + 1), ells)
        )
        if not (len(ells) == len(nus) == len(ps) == J):
            raise ValueError("override lengths must equal J")
        return cls(J=J, ells=ells, nus=nus, ps=ps)

    def ell(self, j: int) -> int:
        return self.ells[j - 1] if j <= self.J else _default_ell(j)

    def nu(self, j: int) -> int:
        return self.nus[j - 1] if j <= self.J else _default_nu(j)

    def p(self, j: int) -> int:
        if j <= self.J:
            return self.ps[j - 1]
        if j > J_CAP:
            raise ValueError(f"primes beyond j = {J_CAP} are not materialized")
        return next_prime(4 * _default_ell(j) * 2 ** (2**j))


def five_ten_bound(k: int, h: int, p: int) -> float:
    """k * (1 + (k+1) * log(2h+1) / log p)."""
    return k * (1 + (k + 1) * math.log(2 * h + 1) / math.log(p))


def _x_factor(schedule: Schedule, h: int, k: int) -> int:
    """max(1, max ell_j over blocks with nu_j <= 8 (2h+1)^k).

    The sup runs over the whole (infinite) schedule; beyond the overridden
    prefix the default formulas apply, and there nu_j = 16 + j increases
    while ell_j is nondecreasing, so the tail contributes ell at the last
    admissible index.
    """
    threshold = 8 * (2 * h + 1) ** k
    best = 1
    for j in range(1, schedule.J + 1):
        if schedule.nu(j) <= threshold:
            best = max(best, schedule.ell(j))
    j_star = threshold - 16
    if j_star > schedule.J:
        best = max(best, _default_ell(j_star))
    return best


def check_schedule(
    schedule: Schedule,
    w: GrowthFunction,
    grid_h: Sequence[int] = GRID_H_DEFAULT,
    grid_k: Sequence[int] = GRID_K_DEFAULT,
) -> list[dict]:
    """Evaluate every schedule condition on the grid; raise on violation."""
    rows = []
    for j in range(1, max(schedule.J, max(grid_k)) + 1):
        lhs, rhs = 4 * schedule.ell(j), schedule.p(j)
        rows.append(
            {"condition": "4*ell_j < p_j", "j": j, "lhs": lhs, "rhs": rhs, "ok": lhs < rhs}
        )
    for h in grid_h:
        for k in grid_k:
            sqw = math.sqrt(w(h * k))
            p_k = schedule.p(k)
            cases = [
                ("independent-part (5.10) within k*sqrt(w)/2",
                 five_ten_bound(k, h, p_k), 0.5 * k * sqw),
                ("sum of nu_j within k*sqrt(w)/2",
                 float(sum(schedule.nu(j) for j in range(1, k + 1))), 0.5 * k * sqw),
                ("3*ell_k within sqrt(w)", 3.0 * schedule.ell(k), sqw),
                ("density factor X within sqrt(w)", float(_x_factor(schedule, h, k)), sqw),
            ]
            for name, lhs, rhs in cases:
                rows.append(
                    {"condition": name, "h": h, "k": k, "lhs": lhs, "rhs": rhs,
                     "ok": lhs <= rhs}
                )
    for row in rows:
        if not row["ok"]:
            where = ", ".join(f"{k}={v}" for k, v in row.items() if k != "ok")
            raise ScheduleError(f"schedule condition violated: {where}")
    return rows


@dataclass(frozen=True)
class SpreadBlock:
    """One block: its parameters, beta index range, and mapped selection."""

    j: int
    p: int
    nu: int
    ell: int
    q: int
    index_lo: int  # 1-based, inclusive
    index_hi: int
    certificate: LemmaCertificate
    lambda_ints: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.lambda_ints)


@dataclass(frozen=True)
class SpreadSystem:
    """The full construction: betas, per-index bounds q(i), and blocks."""

    schedule: Schedule
    betas: tuple[int, ...]  # betas[i-1] = beta_i
    qs: tuple[int, ...]
    blocks: tuple[SpreadBlock, ...]
    seed: int
    grid_h: tuple[int, ...]
    grid_k: tuple[int, ...]
    conditions: tuple[dict, ...]

    def beta(self, i: int) -> int:
        return self.betas[i - 1]

    def q(self, i: int) -> int:
        return self.qs[i - 1]

    def block_basis(self, j: int) -> list[int]:
        b = self.blocks[j - 1]
        return [self.beta(i) for i in range(b.index_lo, b.index_hi + 1)]

    def lambda_union(self) -> list[int]:
        out = []
        for b in self.blocks:
            out.extend(b.lambda_ints)
        return out

    def structurally_well_spread(self) -> bool:
        """beta_i exceeds twice the max combination below it, which makes
        every combination with |m_i| <= (q(i)-1)/2 distinct."""
        weight = 0
        for i, beta in enumerate(self.betas, start=1):
            if beta <= 2 * weight:
                return False
            weight += ((self.q(i) - 1) // 2) * beta
        return True

    def to_json(self, path) -> None:
        payload = {
            "seed": self.seed,
            "grid_h": list(self.grid_h),
            "grid_k": list(self.grid_k),
            "betas": [str(b) for b in self.betas],
            "q": [str(q) for q in self.qs],
            "blocks": [
                {
                    "j": b.j,
                    "p": b.p,
                    "nu": b.nu,
                    "ell": b.ell,
                    "q": str(b.q),
                    "beta_index_lo": b.index_lo,
                    "beta_index_hi": b.index_hi,
                    "size": b.size,
                    "lambda": [str(x) for x in b.lambda_ints],
                }
                for b in self.blocks
            ],
        }
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)


def build_theorem3_prefix(
    w: Optional[GrowthFunction] = None,
    J: int = 4,
    seed: int = 0,
    ells: Optional[Sequence[int]] = None,
    nus: Optional[Sequence[int]] = None,
    ps: Optional[Sequence[int]] = None,
    grid_h: Sequence[int] = GRID_H_DEFAULT,
    grid_k: Sequence[int] = GRID_K_DEFAULT,
    max_retries: int = 10**4,
) -> SpreadSystem:
    """Build J blocks with the default (or overridden) schedule.

    Raises ScheduleError when a schedule condition fails on the grid.  Each
    block's selection uses the K -> 1/8 replacement (valid by 4*ell < p).
    """
    if w is None:
        w = default_w()
    schedule = Schedule.default(J, ells, nus, ps)
    conditions = check_schedule(schedule, w, grid_h, grid_k)

    total = sum(schedule.nu(j) for j in range(1, J + 1))
    qs: list[int] = []
    for j in range(1, J + 1):
        q_j = 2 * schedule.nu(j) * ((schedule.p(j) - 1) // 2) ** 2 + 1
        qs.extend([q_j] * schedule.nu(j))

    betas: list[int] = [1]
    weight = ((qs[0] - 1) // 2) * 1
    for i in range(2, total + 1):
        beta = qs[i - 1] * (1 + weight)
        betas.append(beta)
        weight += ((qs[i - 1] - 1) // 2) * beta

    blocks: list[SpreadBlock] = []
    lo = 1
    for j in range(1, J + 1):
        p_j, nu_j, ell_j = schedule.p(j), schedule.nu(j), schedule.ell(j)
        cfg = SelectionConfig(p=p_j, nu=nu_j, ell=ell_j, seed=seed)
        cert = lemma_search(cfg, use_eighth=True, max_retries=max_retries)
        base = betas[lo - 1 : lo - 1 + nu_j]
        lam_ints = tuple(
            sum(c * b for c, b in zip(v.centered(), base)) for v in cert.Lambda
        )
        blocks.append(
            SpreadBlock(
                j=j,
                p=p_j,
                nu=nu_j,
                ell=ell_j,
                q=qs[lo - 1],
                index_lo=lo,
                index_hi=lo + nu_j - 1,
                certificate=cert,
                lambda_ints=lam_ints,
            )
        )
        lo += nu_j
    system = SpreadSystem(
        schedule=schedule,
        betas=tuple(betas),
        qs=tuple(qs),
        blocks=tuple(blocks),
        seed=seed,
        grid_h=tuple(grid_h),
        grid_k=tuple(grid_k),
        conditions=tuple(conditions),
    )
    if not system.structurally_well_spread():
        raise AssertionError("beta growth rule failed its own distinctness check")
    return system


def well_spread_check(basis: Sequence[int], q: int, cap: int = 10**7) -> bool:
    """True iff all q^|B| combinations with |m_i| <= (q-1)/2 are distinct."""
    if q < 1 or q % 2 == 0:
        raise ValueError("q must be a positive odd integer")
    size = q ** len(basis)
    if size > cap:
        raise MemoryError(f"q^|B| = {size} exceeds the enumeration cap {cap}")
    half = (q - 1) // 2
    values = {0}
    for b in basis:
        scaled = [m * b for m in range(-half, half + 1)]
        values = {v + s for v in values for s in scaled}
    return len(values) == size


def v_p_size(points: Sequence[int], p: int, cap: int = 10**7) -> int:
    """|V_p(A')|: distinct combinations sum m_a * a with |m_a| <= (p-1)/2."""
    if p < 3 or p % 2 == 0:
        raise ValueError("p must be an odd integer >= 3")
    size = p ** len(points)
    if size > cap:
        raise MemoryError(f"p^|A'| = {size} exceeds the enumeration cap {cap}")
    half = (p - 1) // 2
    values = {0}
    for a in points:
        scaled = [m * a for m in range(-half, half + 1)]
        values = {v + s for v in values for s in scaled}
    return len(values)


def pick_independent_subset(block: SpreadBlock, size: int) -> list[int]:
    """First elements of the block whose preimages form a free system.

    "Independent" means the image of a free subset of (Z/pZ)^nu; greedy
    over the certificate order.
    """
    chosen: list[FpVector] = []
    chosen_ints: list[int] = []
    for v, x in zip(block.certificate.Lambda, block.lambda_ints):
        if fp_rank(chosen + [v]) == len(chosen) + 1:
            chosen.append(v)
            chosen_ints.append(x)
            if len(chosen) == size:
                return chosen_ints
    raise ValueError(f"block {block.j} has no free subset of size {size}")


def theorem3_mesh_reports(
    system: SpreadSystem,
    w: Optional[GrowthFunction] = None,
    count: int = 500,
    seed: int = 0,
    k_choices: Sequence[int] = (1, 2, 3, 4, 5),
    heights: Sequence[int] = (1, 2, 3),
    cap: int = 10**7,
    parallelism=None,
) -> list[MeshReport]:
    """Sampled height-h meshes against the bound k*w(kh)."""
    if w is None:
        w = default_w()
    lam = [LatticePoint.from_int(x) for x in system.lambda_union()]
    pool = lam + [LatticePoint.from_int(b) for b in system.betas]

    def random_int_point(rng):
        x = 0
        while x == 0:
            x = int(rng.integers(-100, 101))
        return LatticePoint.from_int(x)

    meshes = random_meshes(
        pool,
        random_int_point,
        count=count,
        seed=seed,
        k_choices=k_choices,
        heights=heights,
    )
    bound = BoundSpec("k_w_kh", w=w)
    return check_mesh_condition(lam, meshes, bound, cap=cap, parallelism=parallelism)
