"""Generic-weight Gram pipeline and the small-N quadrature oracle."""

import math

import numpy as np
import pytest

from pfaffpoint import correlations as corr
from pfaffpoint import ginibre
from pfaffpoint.spectral import SpectralPoint

GAUSS = corr.WeightSpec.ginibre()


def test_weight_reduces_correctly_on_and_off_axis():
    # on the axis: exp(-x^2/2) exactly
    assert GAUSS.weight(0.7) == pytest.approx(math.exp(-0.245), rel=1e-12)
    # off the axis the plane weight is rho(g) rho(conj g) and phi its root
    g = 0.3 + 0.4j
    assert GAUSS.phi(g) == pytest.approx(math.sqrt(GAUSS.weight(g)), rel=1e-12)
    assert GAUSS.weight(g) > 0.0


def test_weight_rejects_negative_values():
    bad = corr.WeightSpec.custom(lambda g: complex(g), cutoff=5.0)
    with pytest.raises(ValueError):
        bad.weight(-2.0)


def test_configuration_validation():
    cfg = corr.Configuration(xs=[0.1, -0.2], zs=[0.3 + 0.4j])
    assert cfg.ell == 2 and cfg.m == 1
    pts = cfg.points()
    assert [p.is_real for p in pts] == [True, True, False]
    with pytest.raises(ValueError):
        corr.Configuration(zs=[0.3 - 0.4j])


def test_first_skew_product_normalization():
    # <pi_0 | pi_1> = 2 sqrt(2 pi) for the Gaussian plane weight
    val = corr.skew_product(GAUSS, [1.0], [0.0, 1.0])
    assert val == pytest.approx(2.0 * math.sqrt(2.0 * math.pi), rel=1e-8)


def test_skew_product_is_antisymmetric_in_arguments():
    a = corr.skew_product(GAUSS, [1.0], [0.0, 0.0, 1.0])
    b = corr.skew_product(GAUSS, [0.0, 0.0, 1.0], [1.0])
    assert a == pytest.approx(-b, abs=1e-9)


def test_ginibre_skew_basis_coefficients():
    basis = corr.ginibre_skew_basis(6)
    assert np.allclose(basis[0], [1.0])
    assert np.allclose(basis[1], [0.0, 1.0])
    # pi_3 = g^3 - 2g, pi_5 = g^5 - 4g^3
    assert np.allclose(basis[3], [0.0, -2.0, 0.0, 1.0])
    assert np.allclose(basis[5], [0.0, 0.0, 0.0, -4.0, 0.0, 1.0])


def test_build_gram_rejects_bad_input():
    with pytest.raises(ValueError):
        corr.build_gram(GAUSS, 3)
    with pytest.raises(ValueError):
        corr.build_gram(GAUSS, 2, basis=[[2.0], [0.0, 1.0]])  # not monic
    with pytest.raises(ValueError):
        corr.build_gram(corr.WeightSpec.mahler(3.0), 4)  # decay too slow


def test_partition_function_is_basis_invariant():
    z1 = corr.partition_fn(GAUSS, 2, corr.monomial_basis(2))
    z2 = corr.partition_fn(GAUSS, 2, corr.ginibre_skew_basis(2))
    assert z1 == pytest.approx(z2, rel=1e-7)


def test_partition_function_matches_direct_quadrature():
    z_pf = corr.partition_fn(GAUSS, 2)
    z_direct = corr.partition_direct(GAUSS, 2)
    assert z_pf == pytest.approx(z_direct, rel=1e-6)


def test_generic_kernel_matches_closed_form_up_to_phase():
    # the Gram pipeline produces the unconjugated kernel; the closed form
    # carries the per-point unit phase, which cancels in every Pfaffian
    gram = corr.build_gram(GAUSS, 2)
    pts = [SpectralPoint.real(0.5), SpectralPoint.real(-0.8),
           SpectralPoint.upper(0.2 + 0.6j)]
    for p in pts:
        for q in pts:
            a = corr.generic_kernel(gram, p, q)
            b = ginibre.kernel_tilde(1, p, q)
            fp = ginibre.phase_factor(p.value)
            fq = ginibre.phase_factor(q.value)
            assert a.ds / (fp * fq) == pytest.approx(b.ds, rel=1e-7, abs=1e-8)
            assert a.s * fq / fp == pytest.approx(b.s, rel=1e-7, abs=1e-8)
            assert a.s_rev * fp / fq == pytest.approx(b.s_rev, rel=1e-7, abs=1e-8)
            assert a.is_plus_e * fp * fq == pytest.approx(b.is_plus_e, rel=1e-7, abs=1e-8)


def test_phase_conjugation_cancels_in_correlations():
    gram = corr.build_gram(GAUSS, 2)
    cfg = corr.Configuration(xs=[0.5], zs=[0.2 + 0.6j])
    from_gram = corr.corr_fn(lambda p, q: corr.generic_kernel(gram, p, q), cfg)
    from_closed = corr.corr_fn(lambda p, q: ginibre.kernel_tilde(1, p, q), cfg)
    assert from_gram == pytest.approx(from_closed, rel=1e-7, abs=1e-9)


def test_one_point_correlation_matches_brute_force():
    cfg = corr.Configuration(xs=[0.3])
    kernel = lambda p, q: ginibre.kernel_tilde(1, p, q)
    pf_val = corr.corr_fn(kernel, cfg)
    brute = corr.brute_corr(GAUSS, 2, cfg)
    assert pf_val == pytest.approx(brute, rel=1e-6)


def test_empty_configuration_is_unity():
    kernel = lambda p, q: ginibre.kernel_tilde(1, p, q)
    assert corr.corr_fn(kernel, corr.Configuration()) == 1.0
    assert corr.brute_corr(GAUSS, 2, corr.Configuration()) == 1.0


def test_corr_fn_enforces_particle_budget():
    kernel = lambda p, q: ginibre.kernel_tilde(1, p, q)
    with pytest.raises(ValueError):
        corr.corr_fn(kernel, corr.Configuration(xs=[0.0, 1.0, 2.0]), n_max=2)


def test_corr_detail_reports_diagnostics():
    kernel = lambda p, q: ginibre.kernel_tilde(1, p, q)
    r, resid, cond = corr.corr_detail(kernel, corr.Configuration(xs=[0.4]))
    assert r > 0.0
    assert resid <= 1e-12
    assert cond >= 1.0


def test_brute_force_rejects_large_systems():
    with pytest.raises(ValueError):
        corr.brute_corr(GAUSS, 6, corr.Configuration(xs=[0.0]))
