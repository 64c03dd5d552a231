"""Multivariate Gaussian primitives: statistics, likelihood, conditioning, sampling."""
from __future__ import annotations

import io
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import DimensionMismatch, EmptyData, InvalidIndexSet
from .linalg import (as_symmetric, check_index_set, cholesky, complement, invert_pd,
                     log_det_pd, schur_complement, solve_pd)


@dataclass(frozen=True)
class GaussianParams:
    mean: np.ndarray
    covariance: np.ndarray

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=float).reshape(-1)
        cov = as_symmetric(self.covariance)
        if cov.shape[0] != mean.shape[0]:
            raise DimensionMismatch("mean and covariance sizes differ")
        cholesky(cov)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "covariance", cov)

    @property
    def p(self) -> int:
        return self.mean.shape[0]

    @property
    def precision(self) -> np.ndarray:
        return invert_pd(self.covariance)


@dataclass(frozen=True)
class SampleStats:
    """Sample size, mean and the 1/n-normalised covariance ``S``."""

    n: int
    mean: np.ndarray
    cov: np.ndarray

    @property
    def p(self) -> int:
        return self.cov.shape[0]


def sufficient_stats(data, *, raw_moment: bool = False) -> SampleStats:
    """Sample mean and covariance with 1/n normalisation.

    With ``raw_moment=True`` the mean is taken to be known and zero, and the
    returned ``cov`` is the raw second moment ``X^T X / n``.
    """
    X = np.asarray(data, dtype=float)
    if X.ndim == 1:
        X = X[None, :]
    if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
        raise EmptyData("need at least one sample of at least one variable")
    n = X.shape[0]
    if raw_moment:
        mean = np.zeros(X.shape[1])
        centred = X
    else:
        mean = X.mean(axis=0)
        centred = X - mean
    S = centred.T @ centred / n
    return SampleStats(n=n, mean=mean, cov=(S + S.T) / 2.0)


def log_likelihood(K, S) -> float:
    """Per-sample profile log-likelihood ``log det K - tr(S K)`` (constants dropped)."""
    if isinstance(S, SampleStats):
        S = S.cov
    K = np.asarray(K, dtype=float)
    S = np.asarray(S, dtype=float)
    return log_det_pd(K) - float(np.sum(S * K))


def marginal(params: GaussianParams, A: Iterable[int]) -> GaussianParams:
    A = check_index_set(list(A), params.p, allow_full=True)
    return GaussianParams(params.mean[A], params.covariance[np.ix_(A, A)])


def condition(params: GaussianParams, A: Iterable[int], x_b) -> GaussianParams:
    """Distribution of ``X_A`` given ``X_B = x_b`` (``B`` = complement of ``A``).

    ``x_b`` is ordered like the sorted complement of ``A``.
    """
    p = params.p
    A = check_index_set(list(A), p)
    B = complement(A, p)
    x_b = np.asarray(x_b, dtype=float).reshape(-1)
    if x_b.shape[0] != len(B):
        raise InvalidIndexSet(f"x_b has length {x_b.shape[0]}, expected {len(B)}")
    Sig = params.covariance
    gain = solve_pd(Sig[np.ix_(B, B)], Sig[np.ix_(B, A)]).T
    mean = params.mean[A] + gain @ (x_b - params.mean[B])
    return GaussianParams(mean, schur_complement(Sig, A))


def _minor_scale(sub: np.ndarray) -> float:
    # Hadamard: |det| <= product of row norms
    return float(np.prod(np.linalg.norm(sub, axis=1)))


def ci_minor_test(M, i: int, j: int, S: Iterable[int] = (), which: str = "sigma",
                  tol: float = 1e-8) -> bool:
    """Numerical test of ``X_i _||_ X_j | X_S`` through an almost-principal minor.

    ``which="sigma"`` treats ``M`` as the covariance and checks
    ``det(Sigma[iS, jS])``; ``which="k"`` treats ``M`` as the concentration
    matrix and checks ``det(K[iR, jR])`` with ``R`` the vertices outside
    ``S + {i, j}``.  The minor counts as zero when its absolute value is at
    most ``tol`` times the Hadamard bound of the submatrix.
    """
    M = np.asarray(M, dtype=float)
    p = M.shape[0]
    S = list(S)
    if i == j or not (0 <= i < p and 0 <= j < p):
        raise InvalidIndexSet(f"need distinct vertices, got {i}, {j}")
    S = check_index_set(S, p, allow_empty=True)
    if i in S or j in S:
        raise InvalidIndexSet("conditioning set must exclude i and j")
    if which == "sigma":
        rest = S
    elif which == "k":
        rest = [v for v in range(p) if v not in S and v not in (i, j)]
    else:
        raise ValueError(f"which must be 'sigma' or 'k', got {which!r}")
    sub = M[np.ix_([i] + rest, [j] + rest)]
    scale = _minor_scale(sub)
    if scale == 0.0:
        return True
    return abs(np.linalg.det(sub)) <= tol * scale


def partial_correlation(S, i: int, j: int, B: Iterable[int] = ()) -> float:
    """Correlation of ``i`` and ``j`` after regressing out ``B``.

    The partial covariance ``S_ij - S_iB inv(S_BB) S_Bj`` is divided by the
    square root of the two partial variances.
    """
    S = np.asarray(S, dtype=float)
    p = S.shape[0]
    B = check_index_set(list(B), p, allow_empty=True)
    if i == j or i in B or j in B or not (0 <= i < p and 0 <= j < p):
        raise InvalidIndexSet(f"bad pair ({i}, {j}) for conditioning set {B}")
    A = [i, j]
    if B:
        sub = S[np.ix_(A, A)] - S[np.ix_(A, B)] @ solve_pd(S[np.ix_(B, B)], S[np.ix_(B, A)])
    else:
        sub = S[np.ix_(A, A)]
    denom = np.sqrt(sub[0, 0] * sub[1, 1])
    if denom <= 0.0:
        return 0.0
    return float(np.clip(sub[0, 1] / denom, -1.0, 1.0))


def sample(params: GaussianParams, n: int, seed=None) -> np.ndarray:
    """``n`` rows drawn i.i.d. from ``N(mean, covariance)`` as ``mean + L z``."""
    if n < 1:
        raise EmptyData("n must be at least 1")
    rng = np.random.default_rng(seed)
    L = cholesky(params.covariance)
    Z = rng.standard_normal((n, params.p))
    return params.mean + Z @ L.T


# ---------------------------------------------------------------------------
# CSV I/O (data files: one sample per row; optional header line)


def _is_number(token: str) -> bool:
    try:
        float(token)
    except ValueError:
        return False
    return True


def parse_matrix_csv(text: str) -> np.ndarray:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise EmptyData("CSV has no rows")
    first = [t.strip() for t in lines[0].split(",")]
    if not all(_is_number(t) for t in first):
        lines = lines[1:]
    if not lines:
        raise EmptyData("CSV has a header but no rows")
    arr = np.loadtxt(io.StringIO("\n".join(lines)), delimiter=",", ndmin=2)
    return arr


def read_matrix_csv(path) -> np.ndarray:
    return parse_matrix_csv(Path(path).read_text())


def format_matrix_csv(M) -> str:
    M = np.atleast_2d(np.asarray(M, dtype=float))
    return "".join(",".join(format(x, ".17g") for x in row) + "\n" for row in M)
