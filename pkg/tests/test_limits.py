"""Limiting kernel and bulk-scaling regime."""

import math

import pytest

from pfaffpoint import ginibre, limits
from pfaffpoint.spectral import SpectralPoint

ENTRIES = ("ds", "s", "s_rev", "is_plus_e")


def max_entry_dev(a, b):
    return max(abs(getattr(a, e) - getattr(b, e)) for e in ENTRIES)


def test_real_density_limit_at_coincidence():
    blk = limits.kernel_limit(SpectralPoint.real(0.0), SpectralPoint.real(0.0))
    assert blk.s.real == pytest.approx(1.0 / math.sqrt(2.0 * math.pi), abs=1e-15)
    assert blk.ds == 0.0
    assert blk.is_plus_e == 0.0


def test_limit_is_translation_invariant_on_axis():
    a = limits.kernel_limit(SpectralPoint.real(0.2), SpectralPoint.real(-0.3))
    b = limits.kernel_limit(SpectralPoint.real(5.2), SpectralPoint.real(4.7))
    assert max_entry_dev(a, b) < 1e-14


def test_finite_kernel_converges_to_limit():
    pts = [SpectralPoint.real(0.4), SpectralPoint.real(-0.9),
           SpectralPoint.upper(0.1 + 0.6j)]
    prev = None
    for m_idx in (25, 50, 100):
        worst = max(
            max_entry_dev(ginibre.kernel_tilde(m_idx, p, q), limits.kernel_limit(p, q))
            for p in pts for q in pts
        )
        if prev is not None:
            assert worst <= prev * 1.5  # no regression as M grows
        prev = worst
    assert prev < 1e-10


def test_limit_block_antisymmetry():
    pts = [SpectralPoint.real(0.3), SpectralPoint.upper(0.5 + 0.8j),
           SpectralPoint.upper(-0.2 + 0.4j)]
    for p in pts:
        for q in pts:
            a = limits.kernel_limit(p, q)
            b = limits.kernel_limit(q, p)
            assert a.ds == pytest.approx(-b.ds, abs=1e-14)
            assert a.s == pytest.approx(b.s_rev, abs=1e-14)
            assert a.is_plus_e == pytest.approx(-b.is_plus_e, abs=1e-14)


def test_bulk_scaling_validation():
    with pytest.raises(ValueError):
        limits.BulkScaling(1.2, 50)
    with pytest.raises(ValueError):
        limits.BulkScaling(0.3 - 0.4j, 50)
    with pytest.raises(ValueError):
        limits.BulkScaling(0.5, 0)
    sc = limits.BulkScaling(0.3 + 0.4j, 50)
    assert sc.shift == pytest.approx((0.3 + 0.4j) * math.sqrt(100.0))


def test_bulk_point_tagging():
    sc_real = limits.BulkScaling(0.5, 50)
    assert sc_real.point(0.7).is_real
    assert not sc_real.point(0.1 + 0.2j).is_real
    sc_cplx = limits.BulkScaling(0.3 + 0.4j, 50)
    assert not sc_cplx.point(0.0).is_real
    with pytest.raises(ValueError):
        # offset pushing the point below the axis
        sc_cplx.point(-10j * sc_cplx.shift.imag)


def test_eta_is_unit_modulus():
    sc = limits.BulkScaling(0.3 + 0.4j, 80)
    for s in (0.0, 1.3, -0.7 + 0.2j):
        assert abs(sc.eta(s)) == pytest.approx(1.0, abs=1e-15)
    # real center: no conjugation at all
    sc_r = limits.BulkScaling(0.5, 80)
    assert sc_r.eta(2.0) == 1.0


def test_real_center_bulk_matches_limit_kernel():
    sc = limits.BulkScaling(0.5, 200)
    worst = 0.0
    for s in (-0.5, 0.0, 0.5):
        for sp in (-0.5, 0.0, 0.5):
            raw, conj = limits.bulk_scaled_block(sc, s, sp)
            assert raw is conj
            ref = limits.kernel_limit(SpectralPoint.real(s), SpectralPoint.real(sp))
            worst = max(worst, max_entry_dev(raw, ref))
    assert worst < 1e-6


def test_offaxis_bulk_approaches_complex_ensemble_density():
    target = limits.complex_ginibre_kernel(0.0, 0.0)
    assert target == pytest.approx(1.0 / math.pi)
    devs = []
    for m_idx in (50, 100, 200):
        sc = limits.BulkScaling(0.3 + 0.4j, m_idx)
        _, conj = limits.bulk_scaled_block(sc, 0.0, 0.0)
        devs.append(abs(conj.s - target))
    assert devs[2] < devs[1] < devs[0]
    assert devs[2] < 1e-2


def test_conjugation_preserves_pfaffian_data():
    # diag(eta, 1/eta) has determinant 1: ds * ise and s * s_rev are unchanged
    sc = limits.BulkScaling(0.3 + 0.4j, 60)
    raw, conj = limits.bulk_scaled_block(sc, 0.4, -0.2 + 0.3j)
    assert raw.ds * raw.is_plus_e == pytest.approx(conj.ds * conj.is_plus_e, rel=1e-12)
    assert raw.s * raw.s_rev == pytest.approx(conj.s * conj.s_rev, rel=1e-12)


def test_complex_ginibre_kernel_hermitian_structure():
    s, sp = 0.4 + 0.1j, -0.2 + 0.7j
    a = limits.complex_ginibre_kernel(s, sp)
    b = limits.complex_ginibre_kernel(sp, s)
    assert a == pytest.approx(b.conjugate(), rel=1e-14)
    diag = limits.complex_ginibre_kernel(s, s)
    assert diag.imag == pytest.approx(0.0, abs=1e-16)
    assert diag.real == pytest.approx(1.0 / math.pi)
