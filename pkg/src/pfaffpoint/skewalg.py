"""Antisymmetric linear algebra: Pfaffians and related identities.

All Pfaffians are computed over complex scalars; callers that expect real
results assert realness themselves.  Matrices are plain numpy arrays; the
functions validate the antisymmetry contract on entry.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

__all__ = [
    "check_skew",
    "pfaffian",
    "pf_block_sum",
    "pf_congruence",
    "cauchy_binet_residual",
]

_SKEW_TOL = 1e-12
_PIVOT_TOL = 1e-13


def check_skew(a: np.ndarray) -> np.ndarray:
    """Validate an even-dimensional antisymmetric matrix, returning a complex copy."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if n % 2 != 0:
        raise ValueError(f"dimension must be even, got {n}")
    scale = np.max(np.abs(a)) if n else 0.0
    if scale > 0 and np.max(np.abs(a + a.T)) > _SKEW_TOL * scale:
        raise ValueError("matrix is not antisymmetric within tolerance")
    return a.copy()


def pfaffian(a: np.ndarray) -> complex:
    """Pfaffian of an even-dimensional antisymmetric matrix.

    Skew-symmetric (Parlett-Reid style) elimination with partial pivoting;
    the transposition parity of the pivoting is tracked in the sign.  Returns
    exactly 0 when a pivot falls below 1e-13 of the matrix max-norm.
    """
    a = check_skew(a)
    n = a.shape[0]
    if n == 0:
        return 1.0 + 0.0j
    if n == 2:
        return complex(a[0, 1])
    if n == 4:
        return complex(
            a[0, 1] * a[2, 3] - a[0, 2] * a[1, 3] + a[0, 3] * a[1, 2]
        )
    scale = np.max(np.abs(a))
    if scale == 0.0:
        return 0.0 + 0.0j
    pf = 1.0 + 0.0j
    for k in range(0, n - 1, 2):
        kp = k + 1 + int(np.argmax(np.abs(a[k + 1 :, k])))
        if kp != k + 1:
            a[[k + 1, kp], :] = a[[kp, k + 1], :]
            a[:, [k + 1, kp]] = a[:, [kp, k + 1]]
            pf = -pf
        pivot = a[k + 1, k]
        if abs(pivot) < _PIVOT_TOL * scale:
            return 0.0 + 0.0j
        pf *= a[k, k + 1]
        if k + 2 < n:
            tau = a[k, k + 2 :] / a[k, k + 1]
            col = a[k + 2 :, k + 1]
            a[k + 2 :, k + 2 :] += np.outer(tau, col) - np.outer(col, tau)
    return complex(pf)


def _standard_j(t: int) -> np.ndarray:
    """Direct sum of t copies of [[0, 1], [-1, 0]]."""
    j2 = np.array([[0.0, 1.0], [-1.0, 0.0]], dtype=complex)
    return np.kron(np.eye(t, dtype=complex), j2)


def pf_block_sum(blocks: np.ndarray) -> tuple[complex, complex]:
    """Pf(J + K) two ways: directly and by the principal-subset expansion.

    blocks is a T x T array of 2x2 blocks with blocks[t, t'] = -blocks[t', t]^T.
    Returns (direct, expansion) where expansion = 1 + sum over nonempty
    subsets S of {1..T} of Pf of the corresponding 2S x 2S submatrix of K.
    The two agree as an algebraic identity.
    """
    blocks = np.asarray(blocks, dtype=complex)
    if blocks.ndim != 4 or blocks.shape[0] != blocks.shape[1] or blocks.shape[2:] != (2, 2):
        raise ValueError(f"expected a T x T x 2 x 2 block array, got shape {blocks.shape}")
    t_count = blocks.shape[0]
    k_full = blocks.transpose(0, 2, 1, 3).reshape(2 * t_count, 2 * t_count)
    direct = pfaffian(_standard_j(t_count) + k_full)
    expansion = 1.0 + 0.0j
    for size in range(1, t_count + 1):
        for subset in combinations(range(t_count), size):
            idx = np.array(subset)
            sub = blocks[np.ix_(idx, idx)].transpose(0, 2, 1, 3).reshape(2 * size, 2 * size)
            expansion += pfaffian(sub)
    return direct, expansion


def pf_congruence(a: np.ndarray, d: np.ndarray) -> tuple[complex, complex]:
    """Returns (Pf(D A D^T), Pf(A) det(D)); equal by the congruence identity."""
    a = check_skew(a)
    d = np.asarray(d, dtype=complex)
    if d.shape != a.shape:
        raise ValueError(f"dimension mismatch: {d.shape} vs {a.shape}")
    left = pfaffian(d @ a @ d.T)
    right = pfaffian(a) * np.linalg.det(d)
    return left, complex(right)


def cauchy_binet_residual(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> float:
    """Residual of the Pfaffian Cauchy-Binet identity; ~0 for any valid input.

    a is 2J x 2K, b and c are antisymmetric with nonzero Pfaffians.  Compares
    Pf(C^-T - A^T B A)/Pf(C^-T) against Pf(B^-T - A C A^T)/Pf(B^-T), scaled
    by the magnitude of the compared values so the residual is dimensionless.
    """
    a = np.asarray(a, dtype=complex)
    b = check_skew(b)
    c = check_skew(c)
    if a.shape != (b.shape[0], c.shape[0]):
        raise ValueError(
            f"shape mismatch: A is {a.shape}, expected {(b.shape[0], c.shape[0])}"
        )
    pf_b = pfaffian(b)
    pf_c = pfaffian(c)
    if pf_b == 0 or pf_c == 0:
        raise ValueError("B and C must have nonzero Pfaffians")
    b_inv_t = np.linalg.inv(b).T
    c_inv_t = np.linalg.inv(c).T
    lhs = pfaffian(c_inv_t - a.T @ b @ a) / pfaffian(c_inv_t)
    rhs = pfaffian(b_inv_t - a @ c @ a.T) / pfaffian(b_inv_t)
    return abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs))
