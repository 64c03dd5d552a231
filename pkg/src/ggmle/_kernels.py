"""Hot inner loops, each in a numba flavour and a pure-numpy flavour.

The ``*_loop`` functions are written element by element for ``numba.njit``;
the ``*_numpy`` functions do the same arithmetic with vectorised numpy calls
and are used when numba is disabled (see :mod:`ggmle._accel`).  Both
flavours stay importable so tests and benchmarks can compare them.

Block encodings used by the sweeps: two int64 arrays ``us`` and ``vs``;
``vs[b] == -1`` marks a diagonal singleton block ``{us[b]}``.
"""
from __future__ import annotations

import numpy as np

from ._accel import USE_NUMBA, njit

# ---------------------------------------------------------------------------
# Cholesky with a pivot threshold


def cholesky_loop(M, tol):
    p = M.shape[0]
    L = np.zeros((p, p))
    for j in range(p):
        d = M[j, j]
        for k in range(j):
            d -= L[j, k] * L[j, k]
        if not d > tol:
            return L, j
        ljj = np.sqrt(d)
        L[j, j] = ljj
        for i in range(j + 1, p):
            s = M[i, j]
            for k in range(j):
                s -= L[i, k] * L[j, k]
            L[i, j] = s / ljj
    return L, -1


def cholesky_numpy(M, tol):
    p = M.shape[0]
    L = np.zeros((p, p))
    for j in range(p):
        row = L[j, :j]
        d = M[j, j] - row @ row
        if not d > tol:
            return L, j
        ljj = np.sqrt(d)
        L[j, j] = ljj
        L[j + 1:, j] = (M[j + 1:, j] - L[j + 1:, :j] @ row) / ljj
    return L, -1


# ---------------------------------------------------------------------------
# Coordinate ascent on K (block updates forcing Sigma_AA = S_AA)


def k_sweep_loop(K, Sig, S, us, vs):
    p = K.shape[0]
    w0 = np.empty(p)
    w1 = np.empty(p)
    for b in range(us.shape[0]):
        u = us[b]
        v = vs[b]
        if v < 0:
            s = Sig[u, u]
            t = S[u, u]
            if not (s > 0.0 and t > 0.0):
                return False
            K[u, u] += 1.0 / t - 1.0 / s
            c = (t - s) / (s * s)
            for i in range(p):
                w0[i] = Sig[i, u]
            for i in range(p):
                ci = c * w0[i]
                for j in range(p):
                    Sig[i, j] += ci * w0[j]
            continue
        a = Sig[u, u]
        bb = Sig[u, v]
        d = Sig[v, v]
        det = a * d - bb * bb
        sa = S[u, u]
        sb = S[u, v]
        sd = S[v, v]
        sdet = sa * sd - sb * sb
        if not (det > 0.0 and sdet > 0.0):
            return False
        ia = d / det
        ib = -bb / det
        idd = a / det
        K[u, u] += sd / sdet - ia
        K[v, v] += sa / sdet - idd
        dk = -sb / sdet - ib
        K[u, v] += dk
        K[v, u] += dk
        for i in range(p):
            x = Sig[i, u]
            y = Sig[i, v]
            w0[i] = x * ia + y * ib
            w1[i] = x * ib + y * idd
        m00 = sa - a
        m01 = sb - bb
        m11 = sd - d
        for i in range(p):
            t0 = m00 * w0[i] + m01 * w1[i]
            t1 = m01 * w0[i] + m11 * w1[i]
            for j in range(p):
                Sig[i, j] += t0 * w0[j] + t1 * w1[j]
    return True


def k_sweep_numpy(K, Sig, S, us, vs):
    for u, v in zip(us.tolist(), vs.tolist()):
        if v < 0:
            s, t = Sig[u, u], S[u, u]
            if not (s > 0.0 and t > 0.0):
                return False
            K[u, u] += 1.0 / t - 1.0 / s
            col = Sig[:, u].copy()
            Sig += ((t - s) / (s * s)) * np.outer(col, col)
            continue
        A = [u, v]
        sig_aa = Sig[np.ix_(A, A)]
        s_aa = S[np.ix_(A, A)]
        if not (np.linalg.det(sig_aa) > 0.0 and np.linalg.det(s_aa) > 0.0):
            return False
        inv_sig = np.linalg.inv(sig_aa)
        K[np.ix_(A, A)] += np.linalg.inv(s_aa) - inv_sig
        W = Sig[:, A] @ inv_sig
        Sig += W @ (s_aa - sig_aa) @ W.T
    return True


# ---------------------------------------------------------------------------
# Coordinate ascent on Sigma (entries off E*, forcing (Sigma^-1)_uv = 0)


def sigma_sweep_loop(Sig, K, us, vs):
    p = K.shape[0]
    ku = np.empty(p)
    kv = np.empty(p)
    for b in range(us.shape[0]):
        u = us[b]
        v = vs[b]
        kuu = K[u, u]
        kvv = K[v, v]
        kuv = K[u, v]
        det = kuu * kvv - kuv * kuv
        if not det > 0.0:
            return False
        delta = kuv / det
        if delta == 0.0:
            continue
        Sig[u, v] += delta
        Sig[v, u] += delta
        g = 1.0 + kuv * delta
        detn = g * g - kuu * kvv * delta * delta
        if not detn > 0.0:
            return False
        f = delta / detn
        t00 = -kvv * delta * f
        t01 = g * f
        t11 = -kuu * delta * f
        for i in range(p):
            ku[i] = K[i, u]
            kv[i] = K[i, v]
        for i in range(p):
            a0 = t00 * ku[i] + t01 * kv[i]
            a1 = t01 * ku[i] + t11 * kv[i]
            for j in range(p):
                K[i, j] -= a0 * ku[j] + a1 * kv[j]
    return True


def sigma_sweep_numpy(Sig, K, us, vs):
    for u, v in zip(us.tolist(), vs.tolist()):
        kuu, kvv, kuv = K[u, u], K[v, v], K[u, v]
        det = kuu * kvv - kuv * kuv
        if not det > 0.0:
            return False
        delta = kuv / det
        if delta == 0.0:
            continue
        Sig[u, v] += delta
        Sig[v, u] += delta
        C = np.array([[0.0, delta], [delta, 0.0]])
        N = np.eye(2) + K[np.ix_([u, v], [u, v])] @ C
        if not np.linalg.det(N) > 0.0:
            return False
        T = C @ np.linalg.inv(N)
        KA = K[:, [u, v]].copy()
        K -= KA @ T @ KA.T
    return True


# ---------------------------------------------------------------------------
# Odd-subset enumeration for the cycle completability inequalities


def odd_subset_slack_loop(theta):
    """Smallest ``(|S|-1)pi + sum_{j not in S} theta_j - sum_{i in S} theta_i``."""
    p = theta.shape[0]
    total = 0.0
    for i in range(p):
        total += theta[i]
    best = np.inf
    s_sum = 0.0
    count = 0
    prev = 0
    # Gray code walk: one membership flip per step
    for i in range(1, 1 << p):
        g = i ^ (i >> 1)
        diff = g ^ prev
        k = 0
        while (diff >> k) & 1 == 0:
            k += 1
        if (g >> k) & 1:
            s_sum += theta[k]
            count += 1
        else:
            s_sum -= theta[k]
            count -= 1
        prev = g
        if count % 2 == 1:
            slack = (count - 1) * np.pi + total - 2.0 * s_sum
            if slack < best:
                best = slack
    return best


def odd_subset_slack_numpy(theta, chunk=1 << 16):
    p = theta.shape[0]
    total = theta.sum()
    shifts = np.arange(p, dtype=np.int64)
    best = np.inf
    for start in range(0, 1 << p, chunk):
        masks = np.arange(start, min(start + chunk, 1 << p), dtype=np.int64)
        bits = ((masks[:, None] >> shifts) & 1).astype(np.float64)
        count = bits.sum(axis=1)
        odd = (count % 2) == 1
        if not odd.any():
            continue
        slack = (count[odd] - 1) * np.pi + total - 2.0 * (bits[odd] @ theta)
        best = min(best, float(slack.min()))
    return best


cholesky_nb = njit(cholesky_loop)
k_sweep_nb = njit(k_sweep_loop)
sigma_sweep_nb = njit(sigma_sweep_loop)
odd_subset_slack_nb = njit(odd_subset_slack_loop)

if USE_NUMBA:
    cholesky = cholesky_nb
    k_sweep = k_sweep_nb
    sigma_sweep = sigma_sweep_nb
    odd_subset_slack = odd_subset_slack_nb
else:
    cholesky = cholesky_numpy
    k_sweep = k_sweep_numpy
    sigma_sweep = sigma_sweep_numpy
    odd_subset_slack = odd_subset_slack_numpy
