import numpy as np
import pytest

from sidonlab.construction import build_matrix
from sidonlab.core import LatticePoint, SignVector, signed_combination
from sidonlab.verify import (
    DependencyWitness,
    QiResourceError,
    verify_qi_exhaustive,
    verify_qi_naive,
    verify_qi_structural,
)


def lp(*coords):
    return LatticePoint(tuple(coords))


def random_points(rng, n, dim=3, span=3):
    return [lp(*rng.integers(-span, span + 1, size=dim)) for _ in range(n)]


def test_base_matrix_columns_are_qi():
    qi, witness = verify_qi_exhaustive(build_matrix(1).columns_as_points())
    assert qi and witness is None


def test_dependent_triple():
    pts = [lp(1, 0), lp(0, 1), lp(1, 1)]
    qi, witness = verify_qi_exhaustive(pts)
    assert not qi
    assert witness is not None and witness.validates(pts)
    # the naive oracle agrees and also produces a valid witness
    qi2, w2 = verify_qi_naive(pts)
    assert not qi2 and w2.validates(pts)


def test_empty_list_is_vacuously_qi():
    assert verify_qi_exhaustive([]) == (True, None)
    assert verify_qi_naive([]) == (True, None)


def test_duplicate_elements_are_a_dependency():
    g = lp(3, -1)
    qi, witness = verify_qi_exhaustive([g, g])
    assert not qi
    assert sorted(witness.eps.signs) == [-1, 1]


def test_zero_element_is_a_dependency():
    qi, witness = verify_qi_exhaustive([lp(2), LatticePoint.zero(), lp(5)])
    assert not qi and witness.validates([lp(2), LatticePoint.zero(), lp(5)])


def test_witness_must_be_nonzero():
    with pytest.raises(ValueError):
        DependencyWitness(SignVector((0, 0)))


def test_resource_cap():
    pts = [lp(2**i) for i in range(30)]
    with pytest.raises(QiResourceError):
        verify_qi_exhaustive(pts, n_max=24)


def test_mitm_agrees_with_naive_oracle():
    rng = np.random.default_rng(23)
    for _ in range(80):
        n = int(rng.integers(0, 9))
        pts = random_points(rng, n, dim=int(rng.integers(1, 4)), span=2)
        qi_fast, w_fast = verify_qi_exhaustive(pts)
        qi_slow, w_slow = verify_qi_naive(pts)
        assert qi_fast == qi_slow
        if not qi_fast:
            assert w_fast.validates(pts) and w_slow.validates(pts)


def test_qi_invariant_under_permutation_and_negation():
    rng = np.random.default_rng(31)
    for _ in range(40):
        n = int(rng.integers(1, 8))
        pts = random_points(rng, n, dim=2, span=2)
        qi, _ = verify_qi_exhaustive(pts)
        perm = list(rng.permutation(n))
        assert verify_qi_exhaustive([pts[i] for i in perm])[0] == qi
        flipped = [-p if rng.random() < 0.5 else p for p in pts]
        assert verify_qi_exhaustive(flipped)[0] == qi


def test_returned_witness_revalidates():
    rng = np.random.default_rng(47)
    found = 0
    for _ in range(60):
        pts = random_points(rng, int(rng.integers(3, 9)), dim=1, span=2)
        qi, witness = verify_qi_exhaustive(pts)
        if not qi:
            found += 1
            assert not witness.eps.is_zero()
            assert signed_combination(pts, witness.eps).is_zero()
    assert found > 0  # one-dimensional small points collide often


# ---------------------------------------------------------------------------
# structural route
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("nu", range(1, 9))
def test_structural_accepts_built_matrices(nu):
    assert verify_qi_structural(build_matrix(nu))


@pytest.mark.parametrize("nu", [1, 2, 3])
def test_structural_agrees_with_exhaustive(nu):
    m = build_matrix(nu)
    qi, _ = verify_qi_exhaustive(m.columns_as_points())
    assert verify_qi_structural(m) == qi


def test_tampered_identity_block_is_rejected():
    from sidonlab.construction import QiMatrix, n_nu

    m = build_matrix(2)
    entries = m.entries.copy()
    col = 2 * n_nu(1)  # first identity column
    entries[0, col] = 0
    tampered = QiMatrix(2, entries)
    assert not verify_qi_structural(tampered)
    qi, witness = verify_qi_exhaustive(tampered.columns_as_points())
    assert not qi and witness.validates(tampered.columns_as_points())


def test_bad_shape_and_entries_rejected():
    from sidonlab.construction import QiMatrix

    # the invariants are enforced at construction and again by the verifier
    with pytest.raises(ValueError):
        QiMatrix(2, build_matrix(1).entries.copy())
    bad = build_matrix(2).entries.copy()
    bad[0, 0] = 2
    with pytest.raises(ValueError):
        QiMatrix(2, bad)

    class Fake:
        nu = 2
        entries = build_matrix(1).entries

    with pytest.raises(ValueError):
        verify_qi_structural(Fake())
