"""Spectral point types and block-matrix assembly."""

import numpy as np
import pytest

from pfaffpoint.spectral import KernelBlock, SpectralPoint, assemble_block_matrix


def test_parse_real_and_complex_tokens():
    p = SpectralPoint.parse("0.5")
    assert p.is_real and p.value == 0.5
    q = SpectralPoint.parse("0.3+0.4i")
    assert not q.is_real and q.value == 0.3 + 0.4j
    r = SpectralPoint.parse(" -1.25 ")
    assert r.is_real and r.value == -1.25


def test_parse_rejects_lower_half_and_garbage():
    with pytest.raises(ValueError):
        SpectralPoint.parse("0.3-0.4i")
    with pytest.raises(ValueError):
        SpectralPoint.parse("not a number")
    with pytest.raises(ValueError):
        SpectralPoint.upper(1.0 + 0.0j)


def test_tiny_imaginary_part_is_not_reclassified():
    # dispatch is by tag, not magnitude
    q = SpectralPoint.upper(complex(0.0, 1e-300))
    assert not q.is_real


def test_str_round_trips_through_parse():
    for p in [SpectralPoint.real(-0.5), SpectralPoint.upper(1.5 + 2.0j)]:
        again = SpectralPoint.parse(str(p))
        assert again.is_real == p.is_real
        assert again.value == pytest.approx(p.value)


def test_block_as_array_layout():
    blk = KernelBlock(ds=1.0, s=2.0, s_rev=3.0, is_plus_e=4.0)
    arr = blk.as_array()
    assert arr[0, 0] == 1.0 and arr[0, 1] == 2.0
    assert arr[1, 0] == -3.0 and arr[1, 1] == 4.0


def test_assemble_block_matrix_is_antisymmetric():
    pts = [SpectralPoint.real(0.1), SpectralPoint.real(-0.7), SpectralPoint.upper(1j)]

    def kernel(p, q):
        # synthetic antisymmetric kernel: f(p)g(q) - f(q)g(p) pattern per entry
        a, b = p.value, q.value
        return KernelBlock(
            ds=a - b, s=a * a - b, s_rev=b * b - a, is_plus_e=a**3 - b**3
        )

    big = assemble_block_matrix(pts, kernel)
    assert big.shape == (6, 6)
    assert np.max(np.abs(big + big.T)) < 1e-14
