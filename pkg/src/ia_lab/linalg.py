"""Rank decisions and subspace residuals for complex matrices.

All rank decisions in the package go through :func:`numerical_rank` so a
single tolerance convention applies: a singular value counts toward the rank
iff it is at least ``tol`` times the largest one. Columns are rescaled to
unit norm first by default; rescaling by a nonzero scalar per column leaves
the rank unchanged but greatly improves the spread of singular values when
column norms differ by orders of magnitude (power-basis precoders do).
"""

from __future__ import annotations

import numpy as np

RANK_TOL = 1e-8


def equilibrate_columns(matrix: np.ndarray) -> np.ndarray:
    """Rescale each nonzero column to unit Euclidean norm."""
    a = np.asarray(matrix)
    norms = np.linalg.norm(a, axis=0)
    safe = np.where(norms > 0.0, norms, 1.0)
    return a / safe


def singular_values(matrix: np.ndarray, equilibrate: bool = True) -> np.ndarray:
    a = equilibrate_columns(matrix) if equilibrate else np.asarray(matrix)
    return np.linalg.svd(a, compute_uv=False)


def numerical_rank(matrix: np.ndarray, tol: float = RANK_TOL,
                   equilibrate: bool = True) -> int:
    """Number of singular values >= tol times the largest one."""
    s = singular_values(matrix, equilibrate=equilibrate)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s >= tol * s[0]))


def orthonormal_basis(matrix: np.ndarray, tol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal basis of the column space, rank decided at ``tol``."""
    u, s, _ = np.linalg.svd(equilibrate_columns(matrix), full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return u[:, :0]
    rank = int(np.sum(s >= tol * s[0]))
    return u[:, :rank]

def orthonormal_complement(matrix: np.ndarray, tol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of the column space."""
    u, s, _ = np.linalg.svd(equilibrate_columns(matrix), full_matrices=True)
    rank = 0 if (s.size == 0 or s[0] == 0.0) else int(np.sum(s >= tol * s[0]))
    return u[:, rank:]


def equality_residual(left: np.ndarray, right: np.ndarray) -> float:
    """Relative Frobenius distance between two equally shaped matrices."""
    scale = max(np.linalg.norm(left), np.linalg.norm(right))
    if scale == 0.0:
        return 0.0
    return float(np.linalg.norm(left - right) / scale)


def subset_residual(columns: np.ndarray, pool: np.ndarray) -> float:
    """Worst relative distance from a column of ``columns`` to its nearest
    column of ``pool``.

    Zero (up to rounding) iff the column set of ``columns`` is contained in
    the column set of ``pool``.
    """
    worst = 0.0
    for i in range(columns.shape[1]):
        col = columns[:, i]
        norm = np.linalg.norm(col)
        if norm == 0.0:
            continue
        dist = np.min(np.linalg.norm(pool - col[:, None], axis=0))
        worst = max(worst, float(dist / norm))
    return worst


def span_residual(left: np.ndarray, right: np.ndarray, tol: float = RANK_TOL) -> float:
    """Sine of the largest principal angle between the two column spans.

    Returns 1.0 outright when the spans have different dimensions. The
    small-angle regime is computed as ``||Ql - Qr (Qr^H Ql)||_2``, which does
    not suffer the cancellation of the arccos-of-cosine route.
    """
    ql = orthonormal_basis(left, tol)
    qr = orthonormal_basis(right, tol)
    if ql.shape[1] != qr.shape[1]:
        return 1.0
    if ql.shape[1] == 0:
        return 0.0
    resid = ql - qr @ (qr.conj().T @ ql)
    return float(np.linalg.norm(resid, 2))
