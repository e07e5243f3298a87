"""Spectral points and 2x2 kernel blocks.

A spectral point is either a real eigenvalue or the upper-half-plane
representative of a complex conjugate pair.  Dispatch between the two is by
tag only: a complex point with tiny imaginary part is never silently
reclassified as real, since the kernel formulas differ structurally.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["SpectralPoint", "KernelBlock", "assemble_block_matrix"]


@dataclass(frozen=True)
class SpectralPoint:
    value: complex
    is_real: bool

    @staticmethod
    def real(x: float) -> "SpectralPoint":
        return SpectralPoint(complex(float(x)), True)

    @staticmethod
    def upper(z: complex) -> "SpectralPoint":
        z = complex(z)
        if z.imag <= 0.0:
            raise ValueError(f"upper-half point must have Im > 0, got {z}")
        return SpectralPoint(z, False)

    @staticmethod
    def parse(token: str) -> "SpectralPoint":
        """Parse 'x' as a real point or 'a+bi' / 'a+bj' as an upper-half point."""
        token = token.strip().replace("i", "j")
        val = complex(token)
        if val.imag == 0.0:
            return SpectralPoint.real(val.real)
        return SpectralPoint.upper(val)

    def __str__(self) -> str:
        if self.is_real:
            return f"{self.value.real:g}"
        return f"{self.value.real:g}+{self.value.imag:g}i"


@dataclass(frozen=True)
class KernelBlock:
    """Value of a 2x2 matrix kernel at an ordered pair of points.

    ds and s are the top row; s_rev is S with the arguments reversed and
    is_plus_e the integrated term with the sign-function correction folded in.
    The assembled block is [[ds, s], [-s_rev, is_plus_e]].
    """

    ds: complex
    s: complex
    s_rev: complex
    is_plus_e: complex

    def as_array(self) -> np.ndarray:
        return np.array(
            [[self.ds, self.s], [-self.s_rev, self.is_plus_e]], dtype=complex
        )


def assemble_block_matrix(points, kernel_fn) -> np.ndarray:
    """Antisymmetric 2T x 2T matrix of kernel blocks over an ordered point list.

    kernel_fn(p, p') must return a KernelBlock; the result satisfies
    block(t, t') = -block(t', t)^T up to the kernel's own roundoff.
    """
    t_count = len(points)
    big = np.zeros((2 * t_count, 2 * t_count), dtype=complex)
    for i, p in enumerate(points):
        for j, q in enumerate(points):
            big[2 * i : 2 * i + 2, 2 * j : 2 * j + 2] = kernel_fn(p, q).as_array()
    return big
