"""Finite-size Gaussian-ensemble kernel: closed forms vs the sum construction."""

import math

import numpy as np
import pytest
from scipy import integrate

from pfaffpoint import ginibre
from pfaffpoint.spectral import SpectralPoint

MIXED_POINTS = [
    SpectralPoint.real(0.0),
    SpectralPoint.real(0.8),
    SpectralPoint.real(-1.3),
    SpectralPoint.upper(0.4 + 0.6j),
    SpectralPoint.upper(-0.9 + 1.2j),
]

ENTRIES = ("ds", "s", "s_rev", "is_plus_e")


def max_entry_dev(a, b):
    return max(abs(getattr(a, e) - getattr(b, e)) for e in ENTRIES)


@pytest.mark.parametrize("m_idx", [1, 2, 4, 7])
def test_closed_form_equals_sum_construction(m_idx):
    for p in MIXED_POINTS:
        for q in MIXED_POINTS:
            closed = ginibre.kernel_tilde(m_idx, p, q)
            summed = ginibre.kernel_tilde_by_sums(m_idx, p, q)
            scale = max(1.0, max(abs(getattr(summed, e)) for e in ENTRIES))
            assert max_entry_dev(closed, summed) <= 1e-12 * scale, (m_idx, p, q)


@pytest.mark.parametrize("m_idx", [1, 3, 6])
def test_kernel_block_antisymmetry(m_idx):
    for p in MIXED_POINTS:
        for q in MIXED_POINTS:
            a = ginibre.kernel_tilde(m_idx, p, q)
            b = ginibre.kernel_tilde(m_idx, q, p)
            assert a.ds == pytest.approx(-b.ds, abs=1e-12)
            assert a.s == pytest.approx(b.s_rev, abs=1e-12)
            assert a.is_plus_e == pytest.approx(-b.is_plus_e, abs=1e-12)


def test_diagonal_ds_vanishes():
    for m_idx in (1, 2, 5):
        for p in MIXED_POINTS:
            blk = ginibre.kernel_tilde(m_idx, p, p)
            assert abs(blk.ds) <= 1e-14


def test_real_axis_density_is_real_and_nonnegative():
    for m_idx in (1, 2, 4):
        for x in np.linspace(-4.0, 4.0, 17):
            blk = ginibre.kernel_tilde(m_idx, SpectralPoint.real(x), SpectralPoint.real(x))
            assert abs(blk.s.imag) <= 1e-14
            assert blk.s.real >= -1e-14


def test_offaxis_density_is_real_and_nonnegative():
    for m_idx in (1, 3):
        for z in (0.2 + 0.5j, -1.0 + 0.3j, 0.0 + 1.5j):
            p = SpectralPoint.upper(z)
            blk = ginibre.kernel_tilde(m_idx, p, p)
            assert abs(blk.s.imag) <= 1e-12 * max(1.0, abs(blk.s))
            assert blk.s.real >= -1e-14


def test_expected_real_count_smallest_size_is_sqrt_two():
    # integral of the real one-point density at matrix size 2
    f = lambda x: ginibre.kernel_tilde(1, SpectralPoint.real(x), SpectralPoint.real(x)).s.real
    val, err = integrate.quad(f, -15, 15, limit=200)
    assert err < 1e-9
    assert val == pytest.approx(math.sqrt(2.0), rel=1e-9)


def test_total_mass_counts_all_eigenvalues():
    m_idx = 2
    f = lambda x: ginibre.kernel_tilde(m_idx, SpectralPoint.real(x), SpectralPoint.real(x)).s.real
    n_real, _ = integrate.quad(f, -15, 15, limit=200)
    g = lambda y, x: ginibre.kernel_tilde(
        m_idx, SpectralPoint.upper(complex(x, y)), SpectralPoint.upper(complex(x, y))
    ).s.real
    n_pairs, _ = integrate.dblquad(g, -7, 7, 1e-12, 7, epsabs=1e-9)
    assert n_real + 2.0 * n_pairs == pytest.approx(2 * m_idx, rel=1e-6)


def test_large_truncation_index_stays_finite():
    # log-space assembly: M = 300 far from the origin must not overflow
    blk = ginibre.kernel_tilde(300, SpectralPoint.real(10.0), SpectralPoint.real(-10.0))
    for e in ENTRIES:
        assert math.isfinite(abs(getattr(blk, e)))


def test_skew_poly_family_shape():
    # even members are plain monomials, odd ones carry one correction term
    assert ginibre.skew_poly(0, 2.0) == 1.0
    assert ginibre.skew_poly(2, 2.0) == 4.0
    assert ginibre.skew_poly(1, 2.0) == 2.0
    assert ginibre.skew_poly(3, 0.0) == 0.0
    # pi_3(g) = g^3 - 2g
    assert ginibre.skew_poly(3, 2.0) == pytest.approx(8.0 - 4.0)


def test_rejects_bad_truncation_index():
    with pytest.raises(ValueError):
        ginibre.kernel_tilde(0, MIXED_POINTS[0], MIXED_POINTS[0])
