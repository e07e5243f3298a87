"""Beta = 1 and beta = 4 Hermitian-ensemble correlation functions.

The same Pfaffian pipeline as the asymmetric case, but on the real line
only: a skew bilinear form (a sign-kernel integral for beta = 1, a
derivative for beta = 4), the Gram matrix of a monic basis of size N sqrt(beta),
and correlations as Pfaffians of 2x2-block kernel matrices.  Direct
quadrature of the joint density is included as a small-N oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P
from scipy import integrate

from . import skewalg
from .spectral import KernelBlock

__all__ = [
    "HermitianModel",
    "herm_skew_product",
    "herm_gram",
    "herm_partition",
    "herm_partition_direct",
    "herm_kernel",
    "herm_corr",
    "herm_corr_direct",
]

_QUAD_OPTS = {"epsabs": 1e-11, "epsrel": 1e-11, "limit": 200}


@dataclass(frozen=True)
class HermitianModel:
    """An N-point ensemble on the line with |Delta|^beta interaction.

    weight and dlog_weight are pointwise callables on the reals;
    dlog_weight is w'/w, needed only for beta = 4 where the skew form
    differentiates.  When dlog_weight is None a central difference with
    step 1e-6 (1 + |y|) is used.
    """

    beta: int
    n: int
    weight: object
    dlog_weight: object = None
    cutoff: float = 10.0

    def __post_init__(self):
        if self.beta not in (1, 4):
            raise ValueError(f"beta must be 1 or 4, got {self.beta}")
        if self.n % 2 != 0 or self.n < 2:
            raise ValueError(f"matrix dimension must be even and positive, got {self.n}")

    @property
    def b(self) -> int:
        return int(math.isqrt(self.beta))

    @property
    def dim(self) -> int:
        return self.n * self.b

    @staticmethod
    def gaussian(beta: int, n: int) -> "HermitianModel":
        return HermitianModel(
            beta=beta,
            n=n,
            weight=lambda y: math.exp(-0.5 * y * y),
            dlog_weight=lambda y: -y,
            cutoff=10.0 + math.sqrt(2.0 * n),
        )

    def dlog(self, y: float) -> float:
        if self.dlog_weight is not None:
            return self.dlog_weight(y)
        h = 1e-6 * (1.0 + abs(y))
        return (self.weight(y + h) - self.weight(y - h)) / (2.0 * h * self.weight(y))


def _polyval(coeffs, y):
    return P.polyval(y, np.asarray(coeffs, dtype=float))


def herm_skew_product(model: HermitianModel, g_coeffs, h_coeffs) -> float:
    """The skew form of two polynomials against the model's weight measure.

    beta = 1: the ordered double integral of the antisymmetrized weighted
    product over y > x.  beta = 4: the 1-D integral of w (g h' - g' h),
    with polynomial derivatives taken exactly.
    """
    g = np.asarray(g_coeffs, dtype=float)
    h = np.asarray(h_coeffs, dtype=float)
    w, c = model.weight, model.cutoff
    if model.beta == 1:

        def inner(y, x):
            return w(x) * w(y) * (
                _polyval(g, x) * _polyval(h, y) - _polyval(g, y) * _polyval(h, x)
            )

        val, err = integrate.dblquad(inner, -c, c, lambda x: x, c, epsabs=1e-10, epsrel=1e-10)
    else:
        gp, hp = P.polyder(g), P.polyder(h)

        def wronsk(y):
            return w(y) * (
                _polyval(g, y) * _polyval(hp, y) - _polyval(gp, y) * _polyval(h, y)
            )

        val, err = integrate.quad(wronsk, -c, c, **_QUAD_OPTS)
    if err > 1e-7 * max(1.0, abs(val)):
        raise RuntimeError(f"skew form quadrature did not converge: estimate {err:.2e}")
    return val


def herm_gram(model: HermitianModel, basis=None):
    """Gram matrix of a monic basis of size N b and its inverse transpose."""
    dim = model.dim
    if basis is None:
        basis = [np.eye(dim)[k][: k + 1].copy() for k in range(dim)]
    if len(basis) != dim:
        raise ValueError(f"basis must have {dim} polynomials, got {len(basis)}")
    u = np.zeros((dim, dim))
    for a in range(dim):
        for b_ in range(a + 1, dim):
            u[a, b_] = herm_skew_product(model, basis[a], basis[b_])
            u[b_, a] = -u[a, b_]
    if abs(skewalg.pfaffian(u)) == 0.0:
        raise ValueError("Gram matrix is singular for this weight and dimension")
    mu = np.linalg.inv(u).T
    return tuple(np.asarray(b, dtype=float) for b in basis), u, mu


def herm_partition(model: HermitianModel, basis=None) -> float:
    """Partition function as the Pfaffian of the Gram matrix.

    With the skew form normalized as in herm_skew_product, the Pfaffian
    equals (1/N!) int prod w |Delta|^beta directly for both beta values;
    this is validated against the n = 2 quadrature oracle.
    """
    _, u, _ = herm_gram(model, basis)
    z = skewalg.pfaffian(u)
    if abs(z.imag) > 1e-9 * max(1.0, abs(z.real)):
        raise RuntimeError(f"partition function came out non-real: {z}")
    return z.real


def herm_partition_direct(model: HermitianModel) -> float:
    """Partition function straight from the joint density, for n = 2 only."""
    if model.n != 2:
        raise ValueError("direct integration implemented for n = 2 only")
    w, c, beta = model.weight, model.cutoff, model.beta

    def f(y2, y1):
        return w(y1) * w(y2) * abs(y2 - y1) ** beta

    val, err = integrate.dblquad(f, -c, c, -c, c, epsabs=1e-10, epsrel=1e-10)
    if err > 1e-6 * max(1.0, abs(val)):
        raise RuntimeError(f"partition quadrature did not converge: estimate {err:.2e}")
    return val / math.factorial(model.n)


# -- kernel and correlations --------------------------------------------------


def _q_tilde(model: HermitianModel, coeffs, y: float) -> float:
    """Lifted basis polynomial at a point.

    beta = 1 lifts by the full weight; beta = 4 by its square root, the
    convention under which the flat-measure Wronskian reproduces the
    weighted skew form.
    """
    v = _polyval(coeffs, y)
    w = model.weight(y)
    return v * (w if model.beta == 1 else math.sqrt(w))


def _eps_q_tilde(model: HermitianModel, coeffs, y: float) -> float:
    if model.beta == 4:
        # d/dy [q sqrt(w)] = sqrt(w) (q' + q w'/(2w))
        w = model.weight(y)
        return math.sqrt(w) * (
            _polyval(P.polyder(np.asarray(coeffs, dtype=float)), y)
            + _polyval(coeffs, y) * 0.5 * model.dlog(y)
        )
    c = model.cutoff

    def f(t):
        return _q_tilde(model, coeffs, t)

    hi, e1 = integrate.quad(f, y, c, **_QUAD_OPTS)
    lo, e2 = integrate.quad(f, -c, y, **_QUAD_OPTS)
    if e1 + e2 > 1e-8:
        raise RuntimeError(f"tail quadrature did not converge: {e1 + e2:.2e}")
    return 0.5 * (hi - lo)


def _e_term(model: HermitianModel, y: float, yp: float) -> float:
    if model.beta == 4:
        return 0.0
    d = y - yp
    return 0.5 * math.copysign(1.0, d) if d != 0.0 else 0.0


def herm_kernel(model: HermitianModel, gram, y: float, yp: float) -> KernelBlock:
    """The 2x2 kernel block at a pair of real points, from Gram data."""
    basis, _, mu = gram
    qv = np.array([_q_tilde(model, c, y) for c in basis])
    qvp = np.array([_q_tilde(model, c, yp) for c in basis])
    qe = np.array([_eps_q_tilde(model, c, y) for c in basis])
    qep = np.array([_eps_q_tilde(model, c, yp) for c in basis])
    pref = 2.0 / model.b
    return KernelBlock(
        ds=pref * qv @ mu @ qvp,
        s=pref * qv @ mu @ qep,
        s_rev=pref * qvp @ mu @ qe,
        is_plus_e=pref * qe @ mu @ qep + _e_term(model, y, yp),
    )


def herm_corr(model: HermitianModel, ys, gram=None) -> float:
    """n-point correlation: Pfaffian of the assembled block kernel matrix."""
    ys = [float(y) for y in ys]
    if len(ys) == 0:
        return 1.0
    if len(ys) > model.n:
        raise ValueError(f"at most {model.n} points, got {len(ys)}")
    if gram is None:
        gram = herm_gram(model)
    k = len(ys)
    big = np.zeros((2 * k, 2 * k), dtype=complex)
    for i, y in enumerate(ys):
        for j, yp in enumerate(ys):
            big[2 * i : 2 * i + 2, 2 * j : 2 * j + 2] = herm_kernel(
                model, gram, y, yp
            ).as_array()
    big = 0.5 * (big - big.T)
    val = skewalg.pfaffian(big)
    if abs(val.imag) > 1e-8 * max(1.0, abs(val.real)):
        raise RuntimeError(f"correlation Pfaffian has imaginary residue: {val}")
    r = val.real
    if r < 0.0:
        if r < -1e-10:
            raise RuntimeError(f"correlation came out negative: {r}")
        r = 0.0
    return r


def herm_corr_direct(model: HermitianModel, ys) -> float:
    """Correlations from the defining density, for n = 2 only.

    R_2 is the normalized density itself; R_1 integrates out one variable.
    """
    if model.n != 2:
        raise ValueError("direct integration implemented for n = 2 only")
    ys = [float(y) for y in ys]
    w, c, beta = model.weight, model.cutoff, model.beta
    z = herm_partition_direct(model)

    def omega(y1, y2):
        return w(y1) * w(y2) * abs(y2 - y1) ** beta

    if len(ys) == 2:
        return omega(ys[0], ys[1]) / z
    if len(ys) == 1:
        # |y - t|^beta has a kink at t = y; tell the integrator where
        val, err = integrate.quad(
            lambda t: omega(ys[0], t), -c, c, points=[ys[0]], **_QUAD_OPTS
        )
        if err > 1e-8 * max(1.0, abs(val)):
            raise RuntimeError(f"quadrature did not converge: estimate {err:.2e}")
        return val / z
    raise ValueError("direct oracle handles 1 or 2 points")
