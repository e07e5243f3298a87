"""Hermitian-ensemble pipeline against direct quadrature."""

import math

import pytest
from scipy import integrate

from pfaffpoint import hermitian


def test_model_validation():
    with pytest.raises(ValueError):
        hermitian.HermitianModel.gaussian(2, 2)
    with pytest.raises(ValueError):
        hermitian.HermitianModel.gaussian(1, 3)
    m = hermitian.HermitianModel.gaussian(4, 2)
    assert m.b == 2 and m.dim == 4


def test_dlog_fallback_matches_exact():
    m = hermitian.HermitianModel(
        beta=1, n=2, weight=lambda y: math.exp(-0.5 * y * y)
    )
    assert m.dlog(0.8) == pytest.approx(-0.8, rel=1e-5)


def test_skew_product_antisymmetry():
    m = hermitian.HermitianModel.gaussian(1, 2)
    a = hermitian.herm_skew_product(m, [1.0], [0.0, 1.0])
    b = hermitian.herm_skew_product(m, [0.0, 1.0], [1.0])
    assert a == pytest.approx(-b, rel=1e-10)


def test_quartic_skew_form_is_weighted_wronskian():
    # beta = 4: <g|h> integrates w (g h' - g' h); check against a hand value
    m = hermitian.HermitianModel.gaussian(4, 2)
    # g = 1, h = y: integrand w(y), so <1|y> = sqrt(2 pi)
    val = hermitian.herm_skew_product(m, [1.0], [0.0, 1.0])
    assert val == pytest.approx(math.sqrt(2.0 * math.pi), rel=1e-10)


@pytest.mark.parametrize("beta", [1, 4])
def test_partition_function_matches_direct(beta):
    m = hermitian.HermitianModel.gaussian(beta, 2)
    z_pf = hermitian.herm_partition(m)
    z_direct = hermitian.herm_partition_direct(m)
    assert z_pf == pytest.approx(z_direct, rel=1e-7)


@pytest.mark.parametrize("beta", [1, 4])
def test_two_point_correlation_matches_direct(beta):
    m = hermitian.HermitianModel.gaussian(beta, 2)
    gram = hermitian.herm_gram(m)
    for ys in ([0.3, -0.4], [1.1, 0.2]):
        a = hermitian.herm_corr(m, ys, gram)
        b = hermitian.herm_corr_direct(m, ys)
        assert a == pytest.approx(b, rel=1e-6)


@pytest.mark.parametrize("beta", [1, 4])
def test_one_point_correlation_matches_direct(beta):
    m = hermitian.HermitianModel.gaussian(beta, 2)
    gram = hermitian.herm_gram(m)
    a = hermitian.herm_corr(m, [0.5], gram)
    b = hermitian.herm_corr_direct(m, [0.5])
    assert a == pytest.approx(b, rel=1e-6)


def test_one_point_density_integrates_to_dimension():
    m = hermitian.HermitianModel.gaussian(1, 2)
    gram = hermitian.herm_gram(m)
    val, err = integrate.quad(
        lambda y: hermitian.herm_corr(m, [y], gram), -m.cutoff, m.cutoff, limit=200
    )
    assert err < 1e-7
    assert val == pytest.approx(2.0, rel=1e-6)


def test_empty_configuration_and_budget():
    m = hermitian.HermitianModel.gaussian(1, 2)
    assert hermitian.herm_corr(m, []) == 1.0
    with pytest.raises(ValueError):
        hermitian.herm_corr(m, [0.0, 1.0, 2.0])


def test_direct_oracle_rejects_large_n():
    m = hermitian.HermitianModel.gaussian(1, 4)
    with pytest.raises(ValueError):
        hermitian.herm_partition_direct(m)
