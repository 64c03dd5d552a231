"""Dense symmetric-matrix helpers built on a pivot-checked Cholesky factor.

Matrices are plain ``numpy.ndarray`` objects.  Index sets are 0-based.
"""
from __future__ import annotations

from typing import Iterable

import numpy as np
import scipy.linalg

from . import _kernels
from .errors import DimensionMismatch, InvalidIndexSet, NotPositiveDefinite


def as_symmetric(M, *, atol: float = 1e-10) -> np.ndarray:
    """Return ``M`` as a float array, checked square and symmetric.

    The result is symmetrised exactly (``(M + M.T) / 2``) so downstream code
    can rely on bitwise symmetry.
    """
    A = np.array(M, dtype=float, copy=True)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
        raise DimensionMismatch(f"expected a square matrix, got shape {A.shape}")
    scale = max(1.0, float(np.max(np.abs(A))))
    if not np.allclose(A, A.T, rtol=0.0, atol=atol * scale):
        raise DimensionMismatch("matrix is not symmetric")
    return (A + A.T) / 2.0


def default_tol(M: np.ndarray) -> float:
    return 1e-12 * M.shape[0] * max(float(np.max(np.abs(M))), 1e-300)


def _factor(M: np.ndarray, tol: float):
    M = np.ascontiguousarray(M, dtype=float)
    return _kernels.cholesky(M, float(tol))


def cholesky(M, tol: float | None = None) -> np.ndarray:
    """Lower Cholesky factor; raises :class:`NotPositiveDefinite` on a small pivot."""
    M = np.asarray(M, dtype=float)
    if tol is None:
        tol = 0.0
    L, bad = _factor(M, tol)
    if bad >= 0:
        raise NotPositiveDefinite(f"pivot {bad} is not above {tol:g}")
    return L


def is_positive_definite(M, tol: float | None = None) -> bool:
    """True iff every Cholesky pivot of ``M`` exceeds ``tol``.

    With ``tol=None`` the threshold is ``1e-12 * p * max|M_ij|`` so that
    numerically singular matrices (for example rank-deficient sample
    covariances) are reported as not positive definite.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        return False
    if not np.all(np.isfinite(M)):
        return False
    if tol is None:
        tol = default_tol(M)
    _, bad = _factor(M, tol)
    return bad < 0


def log_det_pd(M) -> float:
    """``log det M`` as the sum of log squared Cholesky pivots."""
    L = cholesky(M)
    return 2.0 * float(np.sum(np.log(np.diag(L))))


def invert_pd(M) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    L = cholesky(M)
    inv = scipy.linalg.cho_solve((L, True), np.eye(M.shape[0]))
    return (inv + inv.T) / 2.0


def solve_pd(M, B) -> np.ndarray:
    L = cholesky(M)
    return scipy.linalg.cho_solve((L, True), np.asarray(B, dtype=float))


def check_index_set(A: Iterable[int], p: int, *, allow_full: bool = False,
                    allow_empty: bool = False) -> list[int]:
    """Validate and sort an index set against dimension ``p``."""
    raw = [int(a) for a in A]
    idx = sorted(set(raw))
    if len(idx) != len(raw):
        raise InvalidIndexSet(f"duplicate indices in {raw!r}")
    if not idx and not allow_empty:
        raise InvalidIndexSet("index set is empty")
    if idx and (idx[0] < 0 or idx[-1] >= p):
        raise InvalidIndexSet(f"indices {idx} out of range for p={p}")
    if len(idx) == p and not allow_full:
        raise InvalidIndexSet("index set must be a proper subset")
    return idx


def complement(A: Iterable[int], p: int) -> list[int]:
    a = set(A)
    return [i for i in range(p) if i not in a]


def schur_complement(M, A: Iterable[int]) -> np.ndarray:
    """``M_AA - M_AB inv(M_BB) M_BA`` with ``B`` the complement of ``A``."""
    M = np.asarray(M, dtype=float)
    p = M.shape[0]
    A = check_index_set(list(A), p)
    B = complement(A, p)
    M_bb = M[np.ix_(B, B)]
    M_ba = M[np.ix_(B, A)]
    out = M[np.ix_(A, A)] - M_ba.T @ solve_pd(M_bb, M_ba)
    return (out + out.T) / 2.0
