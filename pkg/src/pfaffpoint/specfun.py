"""Special functions used by the Ginibre matrix kernel.

Everything here is double precision.  The truncated-exponential sums and the
kernel remainder term are evaluated with their exponential prefactors merged
into a single log-space exponent, so they stay representable for truncation
orders of a few hundred where naive evaluation overflows.
"""

from __future__ import annotations

import cmath
import math

import numpy as np
from scipy.special import erfcx, gammaln

__all__ = [
    "erfc",
    "log_erfc",
    "lower_gamma",
    "upper_gamma",
    "log_lower_gamma",
    "exp_partial_sum",
    "scaled_exp_partial",
    "scaled_cosh_partial",
    "scaled_sinh_partial",
    "remainder_term",
]

_EPS = 2.220446049250313e-16

# Test hook: flipped to -1.0 to inject a sign error into remainder_term, which
# the self-test's closed-form-vs-sum check must catch.
_REMAINDER_SIGN = 1.0


def erfc(x: float) -> float:
    """Complementary error function for real argument."""
    return math.erfc(x)


def log_erfc(x: float) -> float:
    """log(erfc(x)), stable for large positive x via the scaled erfcx."""
    if x < 0.0:
        return math.log(math.erfc(x))
    return math.log(erfcx(x)) - x * x


def _gamma_series(a: float, x: float) -> tuple[float, float]:
    """Ascending series for the lower incomplete gamma.

    Returns (S, log_gamma) with gamma(a, x) = x^a e^-x * S.  All terms are
    positive, so this is stable for any a > 0 and converges quickly when
    x < a + 1.
    """
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(10000):
        ap += 1.0
        term *= x / ap
        total += term
        if term < total * _EPS:
            break
    return total, a * math.log(x) - x + math.log(total)


def _upper_gamma_cf(a: float, x: float) -> float:
    """Regularized upper gamma Q(a, x) by Lentz continued fraction (x >= a+1)."""
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 10000):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return h * math.exp(-x + a * math.log(x) - math.lgamma(a))


def lower_gamma(a: float, x: float) -> float:
    """Lower incomplete gamma function gamma(a, x) = int_0^x t^(a-1) e^-t dt.

    Valid for a > 0, x >= 0.  Uses the ascending series for x < a + 1 and the
    continued fraction for the upper tail otherwise; both are stable at large
    order, unlike the upward order recurrence.
    """
    if a <= 0.0:
        raise ValueError(f"order must be positive, got {a}")
    if x < 0.0:
        raise ValueError(f"negative argument: {x}")
    if x == 0.0:
        return 0.0
    if x < a + 1.0:
        total, _ = _gamma_series(a, x)
        return total * math.exp(a * math.log(x) - x)
    return math.gamma(a) * (1.0 - _upper_gamma_cf(a, x))


def upper_gamma(a: float, x: float) -> float:
    """Upper incomplete gamma function Gamma(a, x) = Gamma(a) - gamma(a, x)."""
    if a <= 0.0:
        raise ValueError(f"order must be positive, got {a}")
    if x < 0.0:
        raise ValueError(f"negative argument: {x}")
    if x == 0.0:
        return math.gamma(a)
    if x < a + 1.0:
        return math.gamma(a) - lower_gamma(a, x)
    return math.gamma(a) * _upper_gamma_cf(a, x)


def log_lower_gamma(a: float, x: float) -> float:
    """log(gamma(a, x)), finite where the unscaled value would underflow.

    Needed for orders ~M at small arguments, where gamma(a, x) is far below
    the double-precision floor.
    """
    if x < 0.0:
        raise ValueError(f"negative argument: {x}")
    if x == 0.0:
        return -math.inf
    if x < a + 1.0:
        _, logval = _gamma_series(a, x)
        return logval
    q = _upper_gamma_cf(a, x)
    return math.lgamma(a) + math.log1p(-q)


def exp_partial_sum(
    M: int, w: complex, log_prefactor: complex = 0.0, parity: str | None = None
) -> complex:
    """e^log_prefactor times the degree-(2M-2) Taylor polynomial of exp at w.

    Each term is assembled as exp(m log w - log m! + log_prefactor), so large
    prefactor/argument combinations never materialize as raw overflowing
    factors.  parity='even' / 'odd' restricts to the cosh / sinh partial sums
    of the same degree.
    """
    if M < 1:
        raise ValueError(f"truncation index must be >= 1, got {M}")
    n_terms = 2 * M - 1
    m = np.arange(n_terms)
    if parity == "even":
        m = m[m % 2 == 0]
    elif parity == "odd":
        m = m[m % 2 == 1]
        if m.size == 0:
            return 0.0 * cmath.exp(log_prefactor)
    elif parity is not None:
        raise ValueError(f"unknown parity {parity!r}")
    if w == 0:
        base = cmath.exp(log_prefactor)
        return base if (parity is None or parity == "even") else 0.0 * base
    logw = cmath.log(complex(w))
    exponents = m * logw - gammaln(m + 1) + complex(log_prefactor)
    # underflow of far-from-peak terms is harmless; overflow means the caller
    # failed to merge a matching prefactor and the honest answer is inf
    with np.errstate(over="ignore", under="ignore", invalid="ignore"):
        terms = np.exp(exponents.real) * np.exp(1j * exponents.imag)
    return complex(np.sum(terms))


def scaled_exp_partial(M: int, w: complex) -> complex:
    """e^-w e_M(w) where e_M is the degree-(2M-2) Taylor polynomial of exp."""
    return exp_partial_sum(M, w, log_prefactor=-complex(w))


def scaled_cosh_partial(M: int, w: complex) -> complex:
    """e^-w c_M(w): even-degree part of the truncated exponential."""
    return exp_partial_sum(M, w, log_prefactor=-complex(w), parity="even")


def scaled_sinh_partial(M: int, w: complex) -> complex:
    """e^-w s_M(w): odd-degree part of the truncated exponential."""
    return exp_partial_sum(M, w, log_prefactor=-complex(w), parity="odd")


def remainder_term(M: int, z: complex, x: float, log_prefactor: complex = 0.0) -> complex:
    """Truncation remainder of the scalar kernel.

    Equals sgn(x) * 2^(M-3/2)/(2M-2)! * z^(2M-1) * gamma(M-1/2, x^2/2),
    multiplied by e^log_prefactor.  Assembled in log magnitude/phase form:
    the z power alone overflows for bulk-scaled arguments.
    """
    if M < 1:
        raise ValueError(f"truncation index must be >= 1, got {M}")
    if x == 0.0:
        return 0.0
    sgn = 1.0 if x > 0.0 else -1.0
    logz = cmath.log(complex(z)) if z != 0 else None
    if logz is None:
        return 0.0
    exponent = (
        (2 * M - 1) * logz
        + (M - 1.5) * math.log(2.0)
        - math.lgamma(2 * M - 1)
        + log_lower_gamma(M - 0.5, 0.5 * x * x)
        + complex(log_prefactor)
    )
    if exponent.real < -745.0:
        return 0.0
    return _REMAINDER_SIGN * sgn * cmath.exp(exponent)
