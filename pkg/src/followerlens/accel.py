"""Hot numeric kernels with a numba fast path.

Set ``FOLLOWERLENS_NUMBA=0`` to force the pure-numpy fallback; the
default compiles the kernels with ``numba.njit``. Both paths implement
the same algorithms; ``benchmarks/bench_accel.py`` compares them.
"""
from __future__ import annotations

import os

import numpy as np

NUMBA_ENV = "FOLLOWERLENS_NUMBA"

USE_NUMBA = os.environ.get(NUMBA_ENV, "1").lower() not in ("0", "false", "no")
if USE_NUMBA:
    try:
        from numba import njit as _njit
    except ImportError:  # pragma: no cover
        USE_NUMBA = False

_INF = np.inf


def _rbf_matrix_loops(X, Y, gamma):
    n, m = X.shape[0], Y.shape[0]
    d = X.shape[1]
    K = np.empty((n, m))
    for i in range(n):
        for j in range(m):
            s = 0.0
            for k in range(d):
                diff = X[i, k] - Y[j, k]
                s += diff * diff
            K[i, j] = np.exp(-gamma * s)
    return K


def _rbf_matrix_numpy(X, Y, gamma):
    d2 = (X * X).sum(axis=1)[:, None] + (Y * Y).sum(axis=1)[None, :] - 2.0 * (X @ Y.T)
    np.maximum(d2, 0.0, out=d2)
    return np.exp(-gamma * d2)


def _smo_solve_impl(K, y, C, eps, max_iter):
    """Max-violating-pair SMO on a precomputed kernel matrix.

    Maintains the error cache F_i = sum_j alpha_j y_j K_ij - y_i; the
    working pair is (argmax F over I_low, argmin F over I_up), which is
    the maximal KKT violator. Stops when b_low - b_up <= 2*eps.
    Returns (alpha, bias, iterations).
    """
    n = y.shape[0]
    alpha = np.zeros(n)
    F = -y.copy()
    # alphas within a few ulps of a box bound count as bound, otherwise
    # the same immovable pair gets reselected forever
    tol_b = 1e-10 * C
    it = 0
    while it < max_iter:
        it += 1
        pos = y > 0.0
        bound_hi = alpha >= C - tol_b
        bound_lo = alpha <= tol_b
        up_mask = (pos & ~bound_hi) | (~pos & ~bound_lo)
        low_mask = (pos & ~bound_lo) | (~pos & ~bound_hi)
        F_up = np.where(up_mask, F, _INF)
        F_low = np.where(low_mask, F, -_INF)
        j = int(np.argmin(F_up))
        i = int(np.argmax(F_low))
        b_up = F_up[j]
        b_low = F_low[i]
        if b_low - b_up <= 2.0 * eps:
            break

        a1 = alpha[i]
        a2 = alpha[j]
        y1 = y[i]
        y2 = y[j]
        s = y1 * y2
        if s < 0.0:
            L = max(0.0, a2 - a1)
            H = min(C, C + a2 - a1)
        else:
            L = max(0.0, a1 + a2 - C)
            H = min(C, a1 + a2)
        if H - L < 1e-15:
            break

        k11 = K[i, i]
        k22 = K[j, j]
        k12 = K[i, j]
        eta = k11 + k22 - 2.0 * k12
        dF = F[i] - F[j]
        if eta > 1e-12:
            a2_new = a2 + y2 * dF / eta
            if a2_new < L:
                a2_new = L
            elif a2_new > H:
                a2_new = H
        else:
            # flat direction: pick the better endpoint of the segment
            f1 = y1 * F[i] - a1 * k11 - s * a2 * k12
            f2 = y2 * F[j] - s * a1 * k12 - a2 * k22
            L1 = a1 + s * (a2 - L)
            H1 = a1 + s * (a2 - H)
            psi_l = L1 * f1 + L * f2 + 0.5 * L1 * L1 * k11 + 0.5 * L * L * k22 + s * L * L1 * k12
            psi_h = H1 * f1 + H * f2 + 0.5 * H1 * H1 * k11 + 0.5 * H * H * k22 + s * H * H1 * k12
            if psi_l < psi_h - 1e-12:
                a2_new = L
            elif psi_h < psi_l - 1e-12:
                a2_new = H
            else:
                break
        if abs(a2_new - a2) < 1e-14:
            break
        a1_new = a1 + s * (a2 - a2_new)
        alpha[i] = a1_new
        alpha[j] = a2_new
        F += y1 * (a1_new - a1) * K[i] + y2 * (a2_new - a2) * K[j]

    pos = y > 0.0
    up_mask = (pos & (alpha < C - tol_b)) | (~pos & (alpha > tol_b))
    low_mask = (pos & (alpha > tol_b)) | (~pos & (alpha < C - tol_b))
    F_up = np.where(up_mask, F, _INF)
    F_low = np.where(low_mask, F, -_INF)
    b_up = F_up.min()
    b_low = F_low.max()
    if b_up == _INF or b_low == -_INF:
        bias = 0.0
    else:
        bias = -(b_up + b_low) / 2.0
    return alpha, bias, it


if USE_NUMBA:
    rbf_matrix = _njit(cache=True)(_rbf_matrix_loops)
    smo_solve = _njit(cache=True)(_smo_solve_impl)
else:
    rbf_matrix = _rbf_matrix_numpy
    smo_solve = _smo_solve_impl
