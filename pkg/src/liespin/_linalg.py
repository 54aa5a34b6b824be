"""Small dense linear-algebra helpers shared by the modules."""

from __future__ import annotations

import numpy as np
from scipy.linalg import null_space

RANK_RTOL = 1e-9
# floor for matrices that are numerically zero
RANK_ATOL = 1e-12


def numerical_rank(M, rtol: float = RANK_RTOL) -> int:
    M = np.atleast_2d(np.asarray(M))
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    if s.size == 0 or s[0] <= RANK_ATOL:
        return 0
    return int(np.sum(s > rtol * s[0]))


def nullspace(M, rtol: float = RANK_RTOL) -> np.ndarray:
    """Orthonormal basis (as columns) of the right nullspace of ``M``."""
    M = np.atleast_2d(np.asarray(M, dtype=float))
    if M.size == 0 or np.max(np.abs(M)) <= RANK_ATOL:
        return np.eye(M.shape[1])
    return null_space(M, rcond=rtol)


def eig_counts(S, tol: float = 1e-9) -> tuple[int, int, int]:
    """(positive, negative, null) eigenvalue counts of a symmetric matrix.

    The threshold is ``tol`` times the spectral norm of ``S``.
    """
    S = np.asarray(S, dtype=float)
    n = S.shape[0]
    if n == 0:
        return (0, 0, 0)
    w = np.linalg.eigvalsh(0.5 * (S + S.T))
    scale = np.max(np.abs(w))
    if scale <= RANK_ATOL:
        return (0, 0, n)
    cut = tol * scale
    p = int(np.sum(w > cut))
    q = int(np.sum(w < -cut))
    return (p, q, n - p - q)


def rref(M, tol: float = 1e-9) -> np.ndarray:
    """Reduced row echelon form, dropping zero rows."""
    A = np.array(M, dtype=float, copy=True)
    rows, cols = A.shape
    scale = max(np.max(np.abs(A)) if A.size else 0.0, RANK_ATOL)
    r = 0
    for col in range(cols):
        if r == rows:
            break
        piv = r + int(np.argmax(np.abs(A[r:, col])))
        if abs(A[piv, col]) <= tol * scale:
            continue
        A[[r, piv]] = A[[piv, r]]
        A[r] /= A[r, col]
        for i in range(rows):
            if i != r:
                A[i] -= A[i, col] * A[r]
        r += 1
    return A[:r]


def fix_column_signs(B: np.ndarray) -> np.ndarray:
    """Flip columns so the largest-magnitude entry of each is positive."""
    B = np.array(B, dtype=float, copy=True)
    for k in range(B.shape[1]):
        i = int(np.argmax(np.abs(B[:, k])))
        if B[i, k] < 0:
            B[:, k] = -B[:, k]
    return B


def maxabs(x) -> float:
    x = np.asarray(x)
    return float(np.max(np.abs(x))) if x.size else 0.0
