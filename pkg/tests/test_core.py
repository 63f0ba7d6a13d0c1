import itertools

import numpy as np
import pytest

from sidonlab.core import (
    FpVector,
    LatticePoint,
    SignVector,
    fp_rank,
    is_free,
    is_prime,
    next_prime,
    signed_combination,
)


def lp(*coords):
    return LatticePoint(tuple(coords))


def span_size(vectors):
    """Brute-force span oracle: enumerate all linear combinations."""
    if not vectors:
        return 1
    p = vectors[0].p
    seen = set()
    for coeffs in itertools.product(range(p), repeat=len(vectors)):
        acc = [0] * vectors[0].nu
        for c, v in zip(coeffs, vectors):
            acc = [(a + c * x) % p for a, x in zip(acc, v.coords)]
        seen.add(tuple(acc))
    return len(seen)


def rank_oracle(vectors):
    size = span_size(vectors)
    p = vectors[0].p if vectors else 2
    r = 0
    while p**r < size:
        r += 1
    assert p**r == size
    return r


# ---------------------------------------------------------------------------
# primality
# ---------------------------------------------------------------------------


def test_is_prime_small():
    primes = {2, 3, 5, 7, 11, 13, 101, 786433, 2147483647}
    for n in primes:
        assert is_prime(n)
    for n in (0, 1, 4, 9, 91, 786432, 2147483646):
        assert not is_prime(n)


def test_next_prime():
    assert next_prime(1) == 2
    assert next_prime(2) == 3
    assert next_prime(32) == 37
    assert next_prime(3072) == 3079
    assert next_prime(786432) == 786433


# ---------------------------------------------------------------------------
# value types
# ---------------------------------------------------------------------------


def test_fp_vector_reduces_and_checks_prime():
    v = FpVector(5, (7, -1))
    assert v.coords == (2, 4)
    with pytest.raises(ValueError):
        FpVector(4, (1, 2))
    with pytest.raises(ValueError):
        FpVector(5, ())


def test_fp_vector_centered():
    v = FpVector(5, (0, 1, 2, 3, 4))
    assert v.centered() == (0, 1, 2, -2, -1)


def test_lattice_point_canonical_form():
    assert lp(2, 0) == lp(2)
    assert lp(0, 0) == LatticePoint.zero()
    assert lp(1, 2).dim == 2
    assert LatticePoint.from_int(-3).as_int() == -3
    assert LatticePoint.zero().as_int() == 0
    with pytest.raises(ValueError):
        lp(1, 2).as_int()


def test_lattice_point_arithmetic():
    assert lp(1, 1) + lp(1, -1) == lp(2)
    assert lp(1, 2) - lp(1, 2) == LatticePoint.zero()
    assert 3 * lp(2, -1) == lp(6, -3)
    assert -lp(1, -2) == lp(-1, 2)


def test_sign_vector_validation():
    s = SignVector((1, 0, -1))
    assert len(s) == 3 and not s.is_zero()
    assert (-s).signs == (-1, 0, 1)
    with pytest.raises(ValueError):
        SignVector((2, 0))


# ---------------------------------------------------------------------------
# signed_combination
# ---------------------------------------------------------------------------


def test_signed_combination_examples():
    assert signed_combination([lp(1, 1), lp(1, -1)], SignVector((1, 1))) == lp(2)
    pts = [lp(1, 1), lp(1, -1), lp(1, 0)]
    assert signed_combination(pts, SignVector((0, 0, 0))).is_zero()
    triple = [lp(1, 0), lp(0, 1), lp(1, 1)]
    assert signed_combination(triple, SignVector((1, 1, -1))).is_zero()


def test_signed_combination_length_mismatch():
    with pytest.raises(ValueError):
        signed_combination([lp(1)], SignVector((1, 1)))


def test_signed_combination_negation():
    rng = np.random.default_rng(11)
    for _ in range(50):
        n = int(rng.integers(0, 6))
        pts = [lp(*rng.integers(-5, 6, size=3)) for _ in range(n)]
        eps = SignVector(tuple(int(s) for s in rng.integers(-1, 2, size=n)))
        assert signed_combination(pts, -eps) == -signed_combination(pts, eps)


# ---------------------------------------------------------------------------
# fp_rank / is_free
# ---------------------------------------------------------------------------


def test_fp_rank_examples():
    basis = [FpVector(7, tuple(int(i == j) for j in range(4))) for i in range(4)]
    assert fp_rank(basis) == 4
    v = FpVector(5, (1, 3))
    assert fp_rank([v, v]) == 1
    triple = [FpVector(5, (1, 1)), FpVector(5, (1, 4)), FpVector(5, (2, 0))]
    assert fp_rank(triple) == 2
    assert fp_rank([]) == 0


def test_is_free_examples():
    assert is_free([])
    e1, e2 = FpVector(3, (1, 0)), FpVector(3, (0, 1))
    assert is_free([e1, e2])
    triple = [FpVector(5, (1, 1)), FpVector(5, (1, 4)), FpVector(5, (2, 0))]
    assert not is_free(triple)


def test_fp_rank_mixed_inputs_rejected():
    with pytest.raises(ValueError):
        fp_rank([FpVector(3, (1, 0)), FpVector(5, (1, 0))])
    with pytest.raises(ValueError):
        fp_rank([FpVector(3, (1, 0)), FpVector(3, (1, 0, 0))])


def test_fp_rank_vs_span_oracle():
    rng = np.random.default_rng(5)
    for _ in range(60):
        p = int(rng.choice([2, 3, 5, 7]))
        nu = int(rng.integers(1, 5))
        n = int(rng.integers(1, 6))
        vecs = [FpVector(p, tuple(int(x) for x in rng.integers(0, p, nu))) for _ in range(n)]
        assert fp_rank(vecs) == rank_oracle(vecs)


def test_fp_rank_invariances():
    rng = np.random.default_rng(17)
    for _ in range(30):
        p = int(rng.choice([3, 5, 7]))
        nu = int(rng.integers(1, 5))
        n = int(rng.integers(1, 6))
        vecs = [FpVector(p, tuple(int(x) for x in rng.integers(0, p, nu))) for _ in range(n)]
        r = fp_rank(vecs)
        assert r <= min(nu, n)
        perm = list(rng.permutation(n))
        assert fp_rank([vecs[i] for i in perm]) == r
        scale = int(rng.integers(1, p))
        scaled = [scale * vecs[0]] + vecs[1:]
        assert fp_rank(scaled) == r
        # monotone under inclusion
        assert fp_rank(vecs[: n - 1]) <= r


def test_fp_rank_large_prime():
    p = 2147483647
    vecs = [FpVector(p, (1, 2, 3)), FpVector(p, (2, 4, 6)), FpVector(p, (0, 1, 0))]
    assert fp_rank(vecs) == 2
