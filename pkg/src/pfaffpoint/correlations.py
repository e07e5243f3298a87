"""Correlation functions as block Pfaffians, for generic weights.

The pipeline: a weight (given through its root function), a monic polynomial
basis, the skew-symmetric Gram matrix of the basis under the weight's
bilinear form (filled by adaptive quadrature), the 2x2 matrix kernel built
from the inverse-transpose Gram entries, and finally correlation values as
Pfaffians of assembled block matrices.  A direct small-N quadrature of the
defining density is included as an oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np
from numpy.polynomial import polynomial as P
from scipy import integrate

from . import skewalg
from .spectral import KernelBlock, SpectralPoint, assemble_block_matrix

__all__ = [
    "WeightSpec",
    "Configuration",
    "SkewGram",
    "monomial_basis",
    "ginibre_skew_basis",
    "skew_product",
    "build_gram",
    "partition_fn",
    "partition_direct",
    "generic_kernel",
    "corr_detail",
    "corr_fn",
    "brute_corr",
]

_QUAD_OPTS = {"epsabs": 1e-11, "epsrel": 1e-11, "limit": 200}


@dataclass(frozen=True)
class WeightSpec:
    """Conjugation-symmetric weight given through its root function rho.

    The plane weight is rho(x) on the real axis and rho(g) rho(conj g) off
    it.  Polynomials are lifted with the per-point factor phi =
    sqrt(rho(g) rho(conj g)), which reduces to the full weight on the axis
    and to the square root of the plane weight off it; this is the unique
    convention making the weighted bilinear form equal the flat one.
    rho may be complex-valued off the axis as long as rho(g) rho(conj g)
    is nonnegative.
    """

    kind: str
    root_fn: object
    cutoff: float  # |Re|, Im quadrature truncation radius

    @staticmethod
    def ginibre() -> "WeightSpec":
        def rho(g: complex) -> complex:
            import cmath

            return cmath.exp(-0.5 * g * g) * math.sqrt(
                math.erfc(math.sqrt(2.0) * abs(g.imag))
            )

        return WeightSpec(kind="ginibre", root_fn=rho, cutoff=10.0)

    @staticmethod
    def mahler(s: float) -> "WeightSpec":
        if s <= 0:
            raise ValueError(f"exponent must be positive, got {s}")

        def rho(g: complex) -> float:
            return max(1.0, abs(g)) ** (-s)

        # polynomial decay: the cutoff must make the tail of the highest
        # moment negligible; callers validate s > N before integrating
        return WeightSpec(kind=f"mahler({s:g})", root_fn=rho, cutoff=2e5 ** (1.0 / s))

    @staticmethod
    def custom(root_fn, cutoff: float, kind: str = "custom") -> "WeightSpec":
        return WeightSpec(kind=kind, root_fn=root_fn, cutoff=float(cutoff))

    def weight(self, g: complex) -> float:
        g = complex(g)
        if g.imag == 0.0:
            val = complex(self.root_fn(g))
        else:
            val = complex(self.root_fn(g)) * complex(self.root_fn(g.conjugate()))
        if abs(val.imag) > 1e-12 * max(1.0, abs(val.real)) or val.real < -1e-300:
            raise ValueError(f"weight is not nonnegative at {g}: {val}")
        return max(val.real, 0.0)

    def phi(self, g: complex) -> float:
        """Per-point lift factor: the weight on the axis, its root off it."""
        g = complex(g)
        if g.imag == 0.0:
            return self.weight(g)
        return math.sqrt(self.weight(g))


@dataclass(frozen=True)
class Configuration:
    """An evaluation configuration: l real points and m strict-upper points."""

    xs: tuple
    zs: tuple

    def __init__(self, xs=(), zs=()):
        object.__setattr__(self, "xs", tuple(float(x) for x in xs))
        zs = tuple(complex(z) for z in zs)
        for z in zs:
            if z.imag <= 0.0:
                raise ValueError(f"complex configuration points must have Im > 0: {z}")
        object.__setattr__(self, "zs", zs)

    @property
    def ell(self) -> int:
        return len(self.xs)

    @property
    def m(self) -> int:
        return len(self.zs)

    def points(self) -> list:
        return [SpectralPoint.real(x) for x in self.xs] + [
            SpectralPoint.upper(z) for z in self.zs
        ]


def monomial_basis(n: int) -> list:
    """Monic monomials 1, g, ..., g^(n-1) as ascending coefficient arrays."""
    return [np.eye(n)[k][: k + 1].copy() for k in range(n)]


def ginibre_skew_basis(n: int) -> list:
    """The monic family that is skew-orthogonal for the Gaussian weight."""
    out = []
    for k in range(n):
        m, rem = divmod(k, 2)
        c = np.zeros(k + 1)
        c[k] = 1.0
        if rem == 1 and m > 0:
            c[2 * m - 1] = -2.0 * m
        out.append(c)
    return out


def _poly_tilde(w: WeightSpec, coeffs):
    def f(g: complex) -> complex:
        return P.polyval(complex(g), coeffs) * w.phi(g)

    return f


def skew_product(w: WeightSpec, g_coeffs, h_coeffs) -> float:
    """The skew-symmetric bilinear form of two real-coefficient polynomials.

    Real-axis part: the ordered double integral of the antisymmetrized
    product of the lifted polynomials over y > x.  Off-axis part: -4 times
    the upper-half-plane integral of Im(g conj h) of the lifted polynomials,
    which is what the i sgn(Im) transform collapses to for conjugation-
    symmetric weights (both half planes contribute equally).
    """
    gt = _poly_tilde(w, np.asarray(g_coeffs, dtype=float))
    ht = _poly_tilde(w, np.asarray(h_coeffs, dtype=float))
    c = w.cutoff

    def inner(y, x):
        return (gt(x) * ht(y) - gt(y) * ht(x)).real

    real_part, real_err = integrate.dblquad(
        inner, -c, c, lambda x: x, c, epsabs=1e-10, epsrel=1e-10
    )

    def upper(yi, xr):
        gz = complex(xr, yi)
        return (gt(gz) * ht(gz).conjugate()).imag

    cplx_part, cplx_err = integrate.dblquad(
        upper, -c, c, 1e-12, c, epsabs=1e-10, epsrel=1e-10
    )
    total = real_part - 4.0 * cplx_part
    total_err = real_err + 4.0 * cplx_err
    if total_err > 1e-6 * max(1.0, abs(total)):
        raise RuntimeError(
            f"skew product quadrature did not converge: error estimate {total_err:.2e}"
        )
    return total


@dataclass(frozen=True)
class SkewGram:
    """Gram data of a monic basis: the skew matrix U, its inverse transpose
    entries mu, the weight and the basis that produced them."""

    w: WeightSpec
    n: int
    basis: tuple
    u: np.ndarray
    mu: np.ndarray

    def __post_init__(self):
        resid = np.max(np.abs(self.u @ self.mu.T - np.eye(self.n)))
        if resid > 1e-8:
            raise ValueError(f"mu is not the inverse transpose of U: residual {resid:.2e}")


def build_gram(w: WeightSpec, n: int, basis=None) -> SkewGram:
    """Fill the n x n skew Gram matrix of a monic basis by quadrature."""
    if n % 2 != 0:
        raise ValueError(f"dimension must be even, got {n}")
    if w.kind.startswith("mahler"):
        s = float(w.kind[len("mahler(") : -1])
        if s <= n:
            raise ValueError(f"mahler exponent must exceed the dimension: {s} <= {n}")
    if basis is None:
        basis = monomial_basis(n)
    if len(basis) != n:
        raise ValueError(f"basis must have {n} polynomials, got {len(basis)}")
    for k, c in enumerate(basis):
        c = np.asarray(c, dtype=float)
        if len(c) != k + 1 or c[k] != 1.0:
            raise ValueError(f"basis polynomial {k} is not monic of degree {k}")
    u = np.zeros((n, n))
    for a in range(n):
        for b in range(a + 1, n):
            u[a, b] = skew_product(w, basis[a], basis[b])
            u[b, a] = -u[a, b]
    if abs(skewalg.pfaffian(u)) == 0.0:
        raise ValueError("Gram matrix is singular; weight degenerate for this dimension")
    mu = np.linalg.inv(u).T
    return SkewGram(w=w, n=n, basis=tuple(np.asarray(c, dtype=float) for c in basis), u=u, mu=mu)


def partition_fn(w: WeightSpec, n: int, basis=None) -> float:
    """Partition function as the Pfaffian of the skew Gram matrix."""
    z = skewalg.pfaffian(build_gram(w, n, basis).u)
    if abs(z.imag) > 1e-9 * max(1.0, abs(z.real)):
        raise RuntimeError(f"partition function came out non-real: {z}")
    return z.real


# -- generic kernel from the Gram data ----------------------------------------


def _eps_tilde_real(w: WeightSpec, coeffs, x: float) -> float:
    """Sign-kernel transform of a lifted polynomial at a real point:
    half the difference of its right and left tail integrals."""
    f = _poly_tilde(w, coeffs)
    c = w.cutoff
    hi, e1 = integrate.quad(lambda y: f(y).real, x, c, **_QUAD_OPTS)
    lo, e2 = integrate.quad(lambda y: f(y).real, -c, x, **_QUAD_OPTS)
    if e1 + e2 > 1e-8:
        raise RuntimeError(f"tail quadrature did not converge: {e1 + e2:.2e}")
    return 0.5 * (hi - lo)


def _eps_tilde(w: WeightSpec, coeffs, p: SpectralPoint) -> complex:
    if p.is_real:
        return _eps_tilde_real(w, coeffs, p.value.real)
    z = p.value
    f = _poly_tilde(w, coeffs)
    return 1j * f(z.conjugate()) * (1.0 if z.imag > 0.0 else -1.0)


def _e_term(p: SpectralPoint, q: SpectralPoint) -> float:
    if p.is_real and q.is_real:
        d = p.value.real - q.value.real
        if d != 0.0:
            return 0.5 * math.copysign(1.0, d)
    return 0.0


def generic_kernel(gram: SkewGram, p: SpectralPoint, q: SpectralPoint) -> KernelBlock:
    """Kernel block from the double sums over the Gram inverse transpose."""
    w, basis, mu = gram.w, gram.basis, gram.mu
    pv = [
        _poly_tilde(w, c)(p.value) for c in basis
    ]
    qv = [_poly_tilde(w, c)(q.value) for c in basis]
    pe = [_eps_tilde(w, c, p) for c in basis]
    qe = [_eps_tilde(w, c, q) for c in basis]
    pv, qv, pe, qe = map(np.asarray, (pv, qv, pe, qe))
    s = 2.0 * pv @ mu @ qe
    s_rev = 2.0 * qv @ mu @ pe
    ds = 2.0 * pv @ mu @ qv
    is_ = 2.0 * pe @ mu @ qe
    return KernelBlock(ds=ds, s=s, s_rev=s_rev, is_plus_e=is_ + _e_term(p, q))


def corr_detail(kernel_fn, cfg: Configuration) -> tuple[float, float, float]:
    """Correlation value with diagnostics: (R, imaginary residue, condition).

    The condition number is that of the assembled block matrix; a huge value
    flags a nearly singular Pfaffian whose sign/zero is unreliable.
    """
    if cfg.ell == 0 and cfg.m == 0:
        return 1.0, 0.0, 1.0
    big = assemble_block_matrix(cfg.points(), kernel_fn)
    big = 0.5 * (big - big.T)  # strip quadrature-level asymmetry noise
    val = skewalg.pfaffian(big)
    cond = float(np.linalg.cond(big)) if np.all(np.isfinite(big)) else math.inf
    if abs(val.imag) > 1e-8 * max(1.0, abs(val.real)):
        raise RuntimeError(f"correlation Pfaffian has imaginary residue: {val}")
    r = val.real
    if r < 0.0:
        if r < -1e-10:
            raise RuntimeError(f"correlation came out negative: {r}")
        r = 0.0
    return r, abs(val.imag), cond


def corr_fn(kernel_fn, cfg: Configuration, n_max: int | None = None) -> float:
    """Correlation value: the Pfaffian of the assembled block matrix.

    kernel_fn(p, q) -> KernelBlock.  The Pfaffian of the block matrix over
    the configuration's points must be real and nonnegative up to roundoff;
    a tiny negative value is clamped to zero, anything worse is an error in
    the kernel.
    """
    if n_max is not None and cfg.ell + 2 * cfg.m > n_max:
        raise ValueError(
            f"configuration needs {cfg.ell} + 2*{cfg.m} <= {n_max} eigenvalues"
        )
    return corr_detail(kernel_fn, cfg)[0]


# -- brute-force small-N oracle -----------------------------------------------


def _abs_vandermonde(values) -> float:
    out = 1.0
    for a, b in combinations(values, 2):
        out *= abs(b - a)
    return out


def _omega(w: WeightSpec, alphas, betas) -> float:
    """The (L, M)-partial joint density at explicit eigenvalue positions."""
    vals = list(alphas)
    wt = 2.0 ** len(betas)
    for x in alphas:
        wt *= w.weight(x)
    for b in betas:
        wt *= w.weight(b)
        vals.extend([b, b.conjugate()])
    return wt * _abs_vandermonde(vals)


def _integrate_omega(w: WeightSpec, xs, zs, n_real: int, n_cplx: int) -> float:
    """Integrate Omega over n_real free real and n_cplx free complex slots,
    with the configuration points held fixed.

    Free complex slots range over the whole plane; by conjugation symmetry
    of the integrand this is twice the upper-half integral per slot, which
    is what is actually computed.
    """
    c = w.cutoff

    def f(*free):
        alphas = list(xs) + list(free[:n_real])
        betas = list(zs) + [
            complex(free[n_real + 2 * k], free[n_real + 2 * k + 1])
            for k in range(n_cplx)
        ]
        return _omega(w, alphas, betas)

    if n_real == 0 and n_cplx == 0:
        return f()
    ranges = [(-c, c)] * n_real + [(-c, c), (0.0, c)] * n_cplx
    val, err = integrate.nquad(f, ranges, opts={"epsabs": 1e-9, "epsrel": 1e-9})
    if err > 1e-5 * max(1.0, abs(val)):
        raise RuntimeError(f"density quadrature did not converge: estimate {err:.2e}")
    return val * 2.0**n_cplx


def _sectors(n: int):
    return [(n - 2 * m, m) for m in range(n // 2 + 1)]


def partition_direct(w: WeightSpec, n: int) -> float:
    """Partition function straight from its definition: the sum over (L, M)
    sectors of the integrated partial densities with symmetry factors."""
    if n > 4:
        raise ValueError(f"direct integration is limited to n <= 4, got {n}")
    total = 0.0
    for L, M in _sectors(n):
        val = _integrate_omega(w, (), (), L, M)
        total += val / (math.factorial(L) * math.factorial(M) * 2**M)
    return total


def brute_corr(w: WeightSpec, n: int, cfg: Configuration, z_w: float | None = None) -> float:
    """Correlation function by direct integration of the defining density.

    Sums over sectors (L, M) with L + 2M = n, L >= l, M >= m the integrals
    of the partial density over the free eigenvalue slots, normalized by the
    partition function.  Quadrature dimension limits this to n <= 4.
    """
    if n > 4:
        raise ValueError(f"direct integration is limited to n <= 4, got {n}")
    if cfg.ell == 0 and cfg.m == 0:
        return 1.0
    if z_w is None:
        z_w = partition_direct(w, n)
    total = 0.0
    for L, M in _sectors(n):
        if L < cfg.ell or M < cfg.m:
            continue
        free_r, free_c = L - cfg.ell, M - cfg.m
        val = _integrate_omega(w, cfg.xs, cfg.zs, free_r, free_c)
        total += val / (math.factorial(free_r) * math.factorial(free_c) * 2**free_c)
    return total / z_w
