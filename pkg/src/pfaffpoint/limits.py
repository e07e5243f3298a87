"""Limiting kernels and bulk scaling for the real Ginibre ensemble.

Three regimes: the fixed-point M -> infinity kernel in closed form, the
bulk-scaled finite-M kernel at u sqrt(2M) + s for a center u in the open unit
disk, and the complex Ginibre comparison kernel that the off-axis bulk limit
reproduces.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from . import ginibre, specfun
from .spectral import KernelBlock, SpectralPoint

__all__ = [
    "BulkScaling",
    "kernel_limit",
    "complex_ginibre_kernel",
    "bulk_scaled_block",
]

_SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class BulkScaling:
    """Bulk center u with |u| < 1 and the truncation index M (matrix size 2M).

    Scaled spectral points are u sqrt(2M) + s for offsets s.  A center with
    Im(u) = 0 exactly follows the real-center asymptotics; any nonzero
    imaginary part selects the off-axis regime.
    """

    u: complex
    M: int

    def __post_init__(self):
        u = complex(self.u)
        if abs(u) >= 1.0:
            raise ValueError(f"bulk center must satisfy |u| < 1, got {u}")
        if u.imag < 0.0:
            raise ValueError(f"bulk center must be real or upper-half, got {u}")
        if self.M < 1:
            raise ValueError(f"truncation index must be >= 1, got {self.M}")
        object.__setattr__(self, "u", u)

    @property
    def shift(self) -> complex:
        return self.u * math.sqrt(2.0 * self.M)

    def point(self, s: complex) -> SpectralPoint:
        """The scaled spectral point u sqrt(2M) + s.

        Tagged real only when both the center and the offset are exactly
        real; otherwise it must land in the open upper half plane.
        """
        s = complex(s)
        g = self.shift + s
        if self.u.imag == 0.0 and s.imag == 0.0:
            return SpectralPoint.real(g.real)
        if g.imag <= 0.0:
            raise ValueError(
                f"scaled point {g} is not in the upper half plane; "
                "offsets must keep u sqrt(2M) + s off the real axis"
            )
        return SpectralPoint.upper(g)

    def eta(self, s: complex) -> complex:
        """Unit-modulus conjugation factor exp(-2i sqrt(2M) Im(u) Re(s))."""
        return cmath.exp(-2j * math.sqrt(2.0 * self.M) * self.u.imag * complex(s).real)


def _erfc_pref(*points: SpectralPoint) -> float:
    out = 1.0 / _SQRT_2PI
    for p in points:
        if not p.is_real:
            out *= math.sqrt(specfun.erfc(math.sqrt(2.0) * p.value.imag))
    return out


def kernel_limit(p: SpectralPoint, q: SpectralPoint) -> KernelBlock:
    """Fixed-point limiting kernel block, all entries in closed form.

    The real/real integrated entry is sgn(x - x') erfc(|x - x'|/sqrt 2)/2;
    everything else is a Gaussian in the point differences times the
    erfc weight factors of any complex points.
    """
    if p.is_real and q.is_real:
        x, xp = p.value.real, q.value.real
        d = x - xp
        gauss = math.exp(-0.5 * d * d) / _SQRT_2PI
        ise = 0.0
        if d != 0.0:
            ise = 0.5 * math.copysign(1.0, d) * specfun.erfc(abs(d) / math.sqrt(2.0))
        return KernelBlock(ds=-d * gauss, s=gauss, s_rev=gauss, is_plus_e=ise)
    pref = _erfc_pref(p, q)
    if p.is_real and not q.is_real:
        x, z = p.value.real, q.value
        zb = z.conjugate()
        return KernelBlock(
            ds=pref * (z - x) * cmath.exp(-0.5 * (x - z) ** 2),
            s=pref * 1j * (zb - x) * cmath.exp(-0.5 * (x - zb) ** 2),
            s_rev=pref * cmath.exp(-0.5 * (x - z) ** 2),
            is_plus_e=pref * -1j * cmath.exp(-0.5 * (x - zb) ** 2),
        )
    if not p.is_real and q.is_real:
        # antisymmetric partner of the real/complex block
        rev = kernel_limit(q, p)
        return KernelBlock(ds=-rev.ds, s=rev.s_rev, s_rev=rev.s, is_plus_e=-rev.is_plus_e)
    z, zp = p.value, q.value
    zb, zpb = z.conjugate(), zp.conjugate()
    return KernelBlock(
        ds=pref * (zp - z) * cmath.exp(-0.5 * (z - zp) ** 2),
        s=pref * 1j * (zpb - z) * cmath.exp(-0.5 * (z - zpb) ** 2),
        s_rev=pref * 1j * (zb - zp) * cmath.exp(-0.5 * (zp - zb) ** 2),
        is_plus_e=pref * -(zpb - zb) * cmath.exp(-0.5 * (zb - zpb) ** 2),
    )


def complex_ginibre_kernel(s: complex, sp: complex) -> complex:
    """Bulk kernel of the complex Gaussian ensemble:
    (1/pi) exp(-|s|^2/2 - |s'|^2/2 + s conj(s'))."""
    s, sp = complex(s), complex(sp)
    return cmath.exp(-0.5 * abs(s) ** 2 - 0.5 * abs(sp) ** 2 + s * sp.conjugate()) / math.pi


def bulk_scaled_block(
    scaling: BulkScaling, s: complex, sp: complex
) -> tuple[KernelBlock, KernelBlock]:
    """Finite-M kernel block at the bulk-scaled points, raw and conjugated.

    Returns (raw, conjugated) where raw = kernel_tilde at (u sqrt(2M) + s,
    u sqrt(2M) + s') and conjugated applies the per-point diagonal
    diag(eta(s), 1/eta(s)) on each side.  Each diagonal has determinant 1, so
    block Pfaffians over conjugated blocks equal those over raw blocks; only
    the conjugated entries converge entrywise off the real axis.  For a real
    center eta is identically 1 and the two blocks coincide.
    """
    p = scaling.point(s)
    q = scaling.point(sp)
    raw = ginibre.kernel_tilde(scaling.M, p, q)
    if scaling.u.imag == 0.0:
        return raw, raw
    ep, eq = scaling.eta(s), scaling.eta(sp)
    conj = KernelBlock(
        ds=raw.ds * ep * eq,
        s=raw.s * ep / eq,
        s_rev=raw.s_rev * eq / ep,
        is_plus_e=raw.is_plus_e / (ep * eq),
    )
    return raw, conj
