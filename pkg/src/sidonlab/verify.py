"""Deciding quasi-independence of finite sets of group elements.

A set is quasi-independent when no nontrivial coefficient vector over
{-1, 0, +1} annihilates it.  Two routes are provided:

* ``verify_qi_exhaustive`` -- meet-in-the-middle over the 3^N sign vectors,
  exact, with an explicit witness on failure;
* ``verify_qi_structural`` -- the fast inductive check for matrices produced
  by the doubling recursion in :mod:`sidonlab.construction`.

``verify_qi_naive`` is the deliberately simple single-loop enumeration kept
as a second, independent oracle for small N.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .core import SignVector, signed_combination

__all__ = [
    "DependencyWitness",
    "QiResourceError",
    "verify_qi_exhaustive",
    "verify_qi_naive",
    "verify_qi_structural",
]

N_MAX_DEFAULT = 24  # left half-table then holds at most 3^12 entries


class QiResourceError(RuntimeError):
    """Search space exceeds the configured cap (never silently truncated)."""


@dataclass(frozen=True)
class DependencyWitness:
    """A nonzero sign vector whose signed combination vanishes."""

    eps: SignVector

    def __post_init__(self):
        if self.eps.is_zero():
            raise ValueError("a dependency witness must be nonzero")

    def validates(self, elements: Sequence) -> bool:
        if len(elements) != len(self.eps):
            return False
        s = signed_combination(elements, self.eps)
        return s.is_zero()


def _pad(eps: tuple[int, ...], start: int, total: int) -> SignVector:
    return SignVector((0,) * start + eps + (0,) * (total - start - len(eps)))


def _join(left: tuple[int, ...], right: tuple[int, ...]) -> SignVector:
    return SignVector(left + right)


def verify_qi_exhaustive(
    elements: Sequence,
    n_max: int = N_MAX_DEFAULT,
) -> tuple[bool, Optional[DependencyWitness]]:
    """Exhaustive quasi-independence test by meet-in-the-middle.

    Enumerates signed sums of each half of the input and joins on equal
    values (a + b = 0 with a from the left half).  Hashing is on the exact
    element values; dict equality resolves collisions by full comparison.

    Returns (True, None) when quasi-independent, else (False, witness).
    Raises QiResourceError when len(elements) > n_max.
    """
    n = len(elements)
    if n > n_max:
        raise QiResourceError(
            f"{n} elements exceed the cap of {n_max} (3^{n} sign vectors)"
        )
    if n == 0:
        return True, None

    n_left = n // 2
    left, right = list(elements[:n_left]), list(elements[n_left:])
    zero = elements[0] - elements[0]

    # Progressive build of the left table value -> sign prefix.  Sign order
    # (0, 1, -1) guarantees the all-zero prefix claims the zero value first,
    # so any later prefix reaching zero is a genuine dependency.
    table: dict = {zero: ()}
    for el in left:
        new_table: dict = {}
        for value, eps in table.items():
            for s in (0, 1, -1):
                v = value if s == 0 else (value + el if s == 1 else value - el)
                e = eps + (s,)
                if v == zero and any(e):
                    return False, DependencyWitness(_pad(e, 0, n))
                if v not in new_table:
                    new_table[v] = e
        table = new_table

    for eps_r in itertools.product((0, 1, -1), repeat=n - n_left):
        if not any(eps_r):
            continue
        b = zero
        for el, s in zip(right, eps_r):
            if s == 1:
                b = b + el
            elif s == -1:
                b = b - el
        if b == zero:
            return False, DependencyWitness(_pad(eps_r, n_left, n))
        need = zero - b
        hit = table.get(need)
        if hit is not None:
            return False, DependencyWitness(_join(hit, eps_r))
    return True, None


def verify_qi_naive(
    elements: Sequence,
    n_max: int = 12,
) -> tuple[bool, Optional[DependencyWitness]]:
    """Single-loop enumeration of all 3^N sign vectors (independent oracle)."""
    n = len(elements)
    if n > n_max:
        raise QiResourceError(f"{n} elements exceed the naive cap of {n_max}")
    if n == 0:
        return True, None
    zero = elements[0] - elements[0]
    for signs in itertools.product((0, 1, -1), repeat=n):
        if not any(signs):
            continue
        acc = zero
        for el, s in zip(elements, signs):
            if s == 1:
                acc = acc + el
            elif s == -1:
                acc = acc - el
        if acc == zero:
            return False, DependencyWitness(SignVector(signs))
    return True, None


def verify_qi_structural(m) -> bool:
    """Inductive quasi-independence check for doubling-recursion matrices.

    Verifies the block shape level by level: trailing identity atop zeros,
    and the two leading blocks repeating the previous level with a sign
    flip.  When the shape holds, any annihilating sign vector must kill the
    identity block mod 2 (hence exactly) and reduce to two lower-level
    relations, so the check recurses down to the 2x3 base case, which is
    verified exhaustively.

    Dimension or entry-range violations raise ValueError; a broken block
    shape (the induction fails to close) returns False.
    """
    import numpy as np

    from .construction import BASE_MATRIX, n_nu

    entries = np.asarray(m.entries if hasattr(m, "entries") else m)
    nu = getattr(m, "nu", None)
    if nu is None:
        raise ValueError("expected a QiMatrix")
    if entries.shape != (2**nu, n_nu(nu)):
        raise ValueError(
            f"level-{nu} matrix must be {2**nu} x {n_nu(nu)}, got {entries.shape}"
        )
    if not np.isin(entries, (-1, 0, 1)).all():
        raise ValueError("entries must lie in {-1, 0, +1}")

    block = entries
    level = nu
    while level > 1:
        half = 2 ** (level - 1)
        prev_cols = n_nu(level - 1)
        a_top = block[:half, :prev_cols]
        b_top = block[:half, prev_cols : 2 * prev_cols]
        a_bot = block[half:, :prev_cols]
        b_bot = block[half:, prev_cols : 2 * prev_cols]
        tail_top = block[:half, 2 * prev_cols :]
        tail_bot = block[half:, 2 * prev_cols :]
        shape_ok = (
            np.array_equal(a_top, b_top)
            and np.array_equal(a_top, a_bot)
            and np.array_equal(b_bot, -a_top)
            and np.array_equal(tail_top, np.eye(half, dtype=entries.dtype))
            and not tail_bot.any()
        )
        if not shape_ok:
            return False
        block = a_top
        level -= 1
    if not np.array_equal(block, np.asarray(BASE_MATRIX, dtype=entries.dtype)):
        return False
    from .core import LatticePoint

    cols = [LatticePoint(tuple(int(x) for x in block[:, j])) for j in range(3)]
    ok, _ = verify_qi_exhaustive(cols)
    return ok
