"""Finite-size real Ginibre matrix kernel.

The ensemble size is N = 2M.  The kernel entries come in two equivalent
representations: the closed forms in terms of truncated exponential sums and
incomplete gamma functions (the fast path used everywhere), and the defining
skew-orthogonal-polynomial double sums (kept as a cross-check, usable only at
small M where the unscaled weighted polynomials stay representable).

Closed forms are for the "tilde" kernel, i.e. after the unit-determinant
diagonal conjugation that strips the oscillating one-point phase; the sum
construction applies that conjugation explicitly.
"""

from __future__ import annotations

import cmath
import math


from . import specfun
from .spectral import KernelBlock, SpectralPoint

__all__ = [
    "skew_poly",
    "point_weight",
    "phase_factor",
    "eps_weighted_poly",
    "eps_weighted_poly_complex",
    "hat_DS",
    "hat_S",
    "kernel_tilde",
    "kernel_tilde_by_sums",
]

_SQRT_2PI = math.sqrt(2.0 * math.pi)
_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


def skew_poly(n: int, g: complex) -> complex:
    """Skew-orthogonal polynomials for the Gaussian weight.

    Even degree 2m is the plain monomial g^2m; odd degree 2m+1 is
    g^(2m+1) - 2m g^(2m-1).
    """
    if n < 0:
        raise ValueError(f"degree must be >= 0, got {n}")
    m, rem = divmod(n, 2)
    if rem == 0:
        return g**n
    if m == 0:
        return g
    return g ** (2 * m + 1) - 2 * m * g ** (2 * m - 1)


def point_weight(g: complex) -> float:
    """One-point weight factor: exp(-Re(g^2)/2) sqrt(erfc(sqrt2 |Im g|)).

    Reduces to exp(-x^2/2) on the real axis and is invariant under
    conjugation; the product over a conjugate pair gives the plane weight.
    """
    g = complex(g)
    return math.exp(-0.5 * (g * g).real) * math.sqrt(
        specfun.erfc(math.sqrt(2.0) * abs(g.imag))
    )


def phase_factor(g: complex) -> complex:
    """Unit-modulus conjugation factor exp((g^2 - conj(g)^2)/4); 1 on the axis."""
    g = complex(g)
    return cmath.exp(0.25 * (g * g - (g.conjugate()) ** 2))


def eps_weighted_poly(n: int, x: float) -> float:
    """Skew-symmetrizing transform of the weighted skew polynomial at a real point.

    Even degree 2m gives -2^(m-1/2) sgn(x) gamma(m+1/2, x^2/2); odd degree
    2m+1 collapses to x^2m exp(-x^2/2).
    """
    if n < 0:
        raise ValueError(f"degree must be >= 0, got {n}")
    m, rem = divmod(n, 2)
    if rem == 0:
        if x == 0.0:
            return 0.0
        sgn = 1.0 if x > 0.0 else -1.0
        return -(2.0 ** (m - 0.5)) * sgn * specfun.lower_gamma(m + 0.5, 0.5 * x * x)
    return x ** (2 * m) * math.exp(-0.5 * x * x)


def eps_weighted_poly_complex(n: int, z: complex) -> complex:
    """The same transform off the real axis: i sgn(Im z) times the weighted
    polynomial at the conjugate point."""
    z = complex(z)
    if z.imag == 0.0:
        raise ValueError("real argument; use eps_weighted_poly")
    sgn = 1.0 if z.imag > 0.0 else -1.0
    zb = z.conjugate()
    return 1j * sgn * skew_poly(n, zb) * point_weight(zb)


def hat_DS(M: int, z: complex, zp: complex) -> complex:
    """Unweighted derivative-partner kernel: (z' - z) e_M(z z')."""
    return (zp - z) * specfun.exp_partial_sum(M, z * zp)


def hat_S(M: int, z: complex, x: float) -> complex:
    """Unweighted scalar kernel against a real second argument:
    exp(-x^2/2) e_M(z x) plus the truncation remainder."""
    return specfun.exp_partial_sum(M, z * x, log_prefactor=-0.5 * x * x) + specfun.remainder_term(
        M, z, x
    )


def _log_erfc_factor(*points: SpectralPoint) -> float:
    out = -_LOG_SQRT_2PI
    for p in points:
        if not p.is_real:
            out += 0.5 * specfun.log_erfc(math.sqrt(2.0) * p.value.imag)
    return out


def _ds_tilde(M: int, p: SpectralPoint, q: SpectralPoint) -> complex:
    g, gp = p.value, q.value
    # e^(-(g-g')^2/2) e^(-gg') = e^(-(g^2+g'^2)/2), merged into the sum
    logpref = -0.5 * (g * g + gp * gp) + _log_erfc_factor(p, q)
    return (gp - g) * specfun.exp_partial_sum(M, g * gp, logpref)


def _s_tilde(M: int, p: SpectralPoint, q: SpectralPoint) -> complex:
    if p.is_real and q.is_real:
        x, xp = p.value.real, q.value.real
        logpref = -0.5 * (x * x + xp * xp) - _LOG_SQRT_2PI
        main = specfun.exp_partial_sum(M, x * xp, logpref)
        rem = specfun.remainder_term(M, x, xp, log_prefactor=-0.5 * x * x - _LOG_SQRT_2PI)
        return main + rem
    if p.is_real and not q.is_real:
        x, z = p.value.real, q.value
        zb = z.conjugate()
        logpref = -0.5 * (x * x + zb * zb) + _log_erfc_factor(q)
        return 1j * (zb - x) * specfun.exp_partial_sum(M, x * zb, logpref)
    if not p.is_real and q.is_real:
        z, x = p.value, q.value.real
        logpref = -0.5 * (x * x + z * z) + _log_erfc_factor(p)
        main = specfun.exp_partial_sum(M, x * z, logpref)
        # the remainder carries the same fully complex Gaussian e^(-z^2/2)
        rem = specfun.remainder_term(
            M, z, x, log_prefactor=-0.5 * z * z + _log_erfc_factor(p)
        )
        return main + rem
    z, zp = p.value, q.value
    zpb = zp.conjugate()
    logpref = -0.5 * (z * z + zpb * zpb) + _log_erfc_factor(p, q)
    return 1j * (zpb - z) * specfun.exp_partial_sum(M, z * zpb, logpref)


def _is_tilde_real_real(M: int, x: float, xp: float) -> float:
    """Integrated kernel on the real axis as a finite incomplete-gamma sum.

    Equals (1/2 sqrt pi) sum_m 2^m/(2m)! [gamma(m+1/2, x'^2/2) sgn(x') x^2m
    e^(-x^2/2) - (x <-> x')]; terms are built in log space so high orders
    neither overflow nor lose the tiny gamma factors.
    """

    def one_sided(a: float, b: float) -> float:
        # sum over m of 2^m/(2m)! gamma(m+1/2, b^2/2) |a|^2m e^(-a^2/2), signed by b
        if b == 0.0:
            return 0.0
        sgn = 1.0 if b > 0.0 else -1.0
        total = 0.0
        log_abs_a = math.log(abs(a)) if a != 0.0 else None
        for m in range(M):
            if m > 0 and log_abs_a is None:
                break
            exponent = (
                m * math.log(2.0)
                - math.lgamma(2 * m + 1)
                + specfun.log_lower_gamma(m + 0.5, 0.5 * b * b)
                - 0.5 * a * a
            )
            if m > 0:
                exponent += 2 * m * log_abs_a
            if exponent > -745.0:
                total += math.exp(exponent)
        return sgn * total

    return (one_sided(x, xp) - one_sided(xp, x)) / (2.0 * math.sqrt(math.pi))


def _is_tilde(M: int, p: SpectralPoint, q: SpectralPoint) -> complex:
    if p.is_real and q.is_real:
        return _is_tilde_real_real(M, p.value.real, q.value.real)
    if not p.is_real and not q.is_real:
        z, zp = p.value, q.value
        zb, zpb = z.conjugate(), zp.conjugate()
        logpref = -0.5 * (zb * zb + zpb * zpb) + _log_erfc_factor(p, q)
        return -(zpb - zb) * specfun.exp_partial_sum(M, zb * zpb, logpref)
    # mixed: antisymmetric continuation of the real/complex closed form
    sign = 1.0 if p.is_real else -1.0
    x = (p if p.is_real else q).value.real
    zpt = q if p.is_real else p
    z = zpt.value
    zb = z.conjugate()
    logpref = -0.5 * (x * x + zb * zb) + _log_erfc_factor(zpt)
    main = specfun.exp_partial_sum(M, x * zb, logpref)
    rem = specfun.remainder_term(
        M, zb, x, log_prefactor=-0.5 * zb * zb + _log_erfc_factor(zpt)
    )
    return sign * -1j * (main + rem)


def _e_term(p: SpectralPoint, q: SpectralPoint) -> float:
    if p.is_real and q.is_real:
        d = p.value.real - q.value.real
        if d > 0.0:
            return 0.5
        if d < 0.0:
            return -0.5
    return 0.0


def kernel_tilde(M: int, p: SpectralPoint, q: SpectralPoint) -> KernelBlock:
    """Closed-form 2x2 kernel block for the 2M x 2M real Ginibre ensemble."""
    if M < 1:
        raise ValueError(f"truncation index must be >= 1, got {M}")
    return KernelBlock(
        ds=_ds_tilde(M, p, q),
        s=_s_tilde(M, p, q),
        s_rev=_s_tilde(M, q, p),
        is_plus_e=_is_tilde(M, p, q) + _e_term(p, q),
    )


# -- defining-sum construction (small M only; overflow-prone by design) -------


def _weighted_poly(n: int, g: complex) -> complex:
    return skew_poly(n, g) * point_weight(g)


def _eps_poly(n: int, p: SpectralPoint) -> complex:
    if p.is_real:
        return eps_weighted_poly(n, p.value.real)
    return eps_weighted_poly_complex(n, p.value)


def _sum_entry(M: int, left_vals, right_vals) -> complex:
    total = 0.0 + 0.0j
    for m in range(M):
        total += (
            left_vals[2 * m] * right_vals[2 * m + 1]
            - left_vals[2 * m + 1] * right_vals[2 * m]
        ) / math.factorial(2 * m)
    return total / _SQRT_2PI


def kernel_tilde_by_sums(M: int, p: SpectralPoint, q: SpectralPoint) -> KernelBlock:
    """The same kernel block built from the skew-orthogonal polynomial sums.

    Evaluates the defining double sums for the raw kernel and then applies the
    unit-determinant phase conjugation.  Independent of the closed forms; used
    as their oracle.
    """
    n_max = 2 * M
    pw = [_weighted_poly(n, p.value) for n in range(n_max)]
    qw = [_weighted_poly(n, q.value) for n in range(n_max)]
    pe = [_eps_poly(n, p) for n in range(n_max)]
    qe = [_eps_poly(n, q) for n in range(n_max)]

    s_raw = _sum_entry(M, pw, qe)
    s_rev_raw = _sum_entry(M, qw, pe)
    ds_raw = _sum_entry(M, pw, qw)
    is_raw = _sum_entry(M, pe, qe)

    psi_p = phase_factor(p.value)
    psi_q = phase_factor(q.value)
    return KernelBlock(
        ds=ds_raw / (psi_p * psi_q),
        s=s_raw * psi_q / psi_p,
        s_rev=s_rev_raw * psi_p / psi_q,
        is_plus_e=is_raw * psi_p * psi_q + _e_term(p, q),
    )
