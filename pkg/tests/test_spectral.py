import math

import numpy as np
import pytest

from sidonlab.spectral import (
    FlatnessFailure,
    a_norm_upper_bound,
    analyticity_witness,
    default_rho,
    fwht,
    masks_independent,
    naive_wht,
    sample_flat_lambda,
    sigma_hat,
)


def test_fwht_delta_and_constant():
    delta = np.zeros(8, dtype=np.int64)
    delta[0] = 1
    assert np.array_equal(fwht(delta), np.ones(8, dtype=np.int64))
    ones = np.ones(8, dtype=np.int64)
    out = fwht(ones)
    assert out[0] == 8 and not out[1:].any()


def test_fwht_requires_power_of_two():
    with pytest.raises(ValueError):
        fwht(np.ones(6))
    with pytest.raises(ValueError):
        fwht(np.ones((4, 4)))


@pytest.mark.parametrize("nu", [1, 2, 3, 4])
def test_fwht_matches_naive_oracle(nu):
    rng = np.random.default_rng(nu)
    a = rng.integers(-9, 10, 2**nu)
    assert np.array_equal(fwht(a), naive_wht(a))
    x = rng.normal(size=2**nu)
    assert np.allclose(fwht(x), naive_wht(x), rtol=1e-12)
    z = rng.normal(size=2**nu) + 1j * rng.normal(size=2**nu)
    assert np.allclose(fwht(z), naive_wht(z), rtol=1e-12)


@pytest.mark.parametrize("nu", [1, 3, 5])
def test_fwht_involution(nu):
    rng = np.random.default_rng(nu + 10)
    a = rng.integers(-50, 50, 2**nu)
    assert np.array_equal(fwht(fwht(a)), (2**nu) * a)
    x = rng.normal(size=2**nu)
    assert np.allclose(fwht(fwht(x)), (2**nu) * x, rtol=1e-9)


def test_convolution_identity():
    # transform of a pointwise product = (1/2^nu) * xor-convolution of transforms
    rng = np.random.default_rng(77)
    for nu in (2, 3, 4):
        n = 2**nu
        f = rng.normal(size=n)
        g = rng.normal(size=n)
        lhs = fwht(f * g)
        fh, gh = fwht(f), fwht(g)
        conv = np.zeros(n)
        for y1 in range(n):
            for y2 in range(n):
                conv[y1 ^ y2] += fh[y1] * gh[y2]
        assert np.allclose(lhs, conv / n, rtol=1e-9, atol=1e-9)


def test_sigma_hat_counts_and_parseval():
    table = sigma_hat({0b01, 0b10, 0b11}, nu=3)
    assert table.at_one == 3
    full = sigma_hat(np.ones(16, dtype=bool))
    assert full.at_one == 16 and full.sup_offpeak() == 0


def test_sigma_hat_coset_support():
    # a coset of a subgroup H has |sigma^| = |Lambda| on the annihilator of H
    nu = 4
    h_masks = [0b0011, 0b0101]  # generate H of size 4
    members = {0}
    for m in h_masks:
        members |= {x ^ m for x in members}
    coset = {x ^ 0b1000 for x in members}
    table = sigma_hat(coset, nu=nu)
    mags = np.abs(table.values)
    annihilator = [
        y for y in range(2**nu) if all((y & x).bit_count() % 2 == 0 for x in members)
    ]
    for y in range(2**nu):
        if y in annihilator:
            assert mags[y] == len(coset)
        else:
            assert mags[y] == 0


def test_mask_independence():
    assert masks_independent([0b001, 0b010, 0b100])
    assert not masks_independent([0b001, 0b010, 0b011])
    assert masks_independent([])


def test_default_rho():
    rho, exact = default_rho(40000)
    assert rho == 3 and exact == pytest.approx(math.log2(10))
    assert default_rho(401)[0] >= 0


@pytest.fixture(scope="module")
def small_flat():
    return sample_flat_lambda(nu=14, ell=401, seed=0)


def test_sample_flat_lambda_contract(small_flat):
    s = small_flat
    assert s.sigma1 >= s.ell * s.nu
    assert s.sup_offpeak <= s.flatness_threshold
    assert s.retries_used >= 1
    again = sample_flat_lambda(nu=14, ell=401, seed=0)
    assert np.array_equal(again.mask, s.mask)
    assert s.lambda_param == pytest.approx(10 * math.sqrt(14))


def test_sample_flat_lambda_validation():
    with pytest.raises(ValueError):
        sample_flat_lambda(nu=14, ell=400, seed=0)  # needs ell > 400
    with pytest.raises(ValueError):
        sample_flat_lambda(nu=10, ell=401, seed=0)  # alpha >= 1
    with pytest.raises(FlatnessFailure):
        sample_flat_lambda(nu=14, ell=401, seed=0, max_retries=0)


def test_witness_rho_zero(small_flat):
    rep = analyticity_witness(small_flat, rho=0)
    assert rep.lower_bound == pytest.approx(1.0)
    assert rep.target == pytest.approx(0.5)
    assert rep.passed


def test_witness_structure(small_flat):
    rep = analyticity_witness(small_flat, rho=2)
    assert rep.f_algebra_norm == pytest.approx(2.0)  # rho unit coefficients
    assert rep.flatness_holds
    # computed duality bound is at least as strong as the analytic chain
    assert rep.lower_bound >= rep.chain_bound - 1e-9
    assert rep.sigma1 == small_flat.sigma1


def test_witness_validation(small_flat):
    with pytest.raises(ValueError):
        analyticity_witness(small_flat, rho=2, y_masks=[0b01, 0b01])
    with pytest.raises(ValueError):
        analyticity_witness(small_flat, rho=20)
    with pytest.raises(ValueError):
        analyticity_witness(small_flat.mask)  # ell missing


def test_v_spectrum_is_flat_on_subgroup():
    # v = exp(i pi/4 (y1 + ... + y_rho)) has |v^| = 2^(-rho/2) on the
    # subgroup generated by the masks, and 0 elsewhere
    nu, rho = 5, 3
    n = 2**nu
    masks = [1, 2, 4]
    from sidonlab.spectral import _character_values

    f = np.zeros(n, dtype=np.int64)
    for y in masks:
        f += _character_values(nu, y)
    v = np.exp(1j * (math.pi / 4) * f)
    vh = fwht(v) / n
    subgroup = {0}
    for m in masks:
        subgroup |= {x ^ m for x in subgroup}
    for y in range(n):
        if y in subgroup:
            assert abs(abs(vh[y]) - 2 ** (-rho / 2)) < 1e-12
        else:
            assert abs(vh[y]) < 1e-12
    assert np.abs(vh).sum() == pytest.approx(2 ** (rho / 2))


def test_duality_bound_below_subgradient_upper():
    nu = 6
    n = 2**nu
    rng = np.random.default_rng(5)
    mask = rng.random(n) < 0.3
    mask[0] = True
    rep = analyticity_witness(mask, ell=401, rho=1)
    from sidonlab.spectral import _character_values

    f = _character_values(nu, 1).astype(np.int64)
    v = np.exp(1j * (math.pi / 4) * f)
    upper = a_norm_upper_bound(v, mask)
    assert rep.lower_bound <= upper + 1e-9
