"""Pure numpy implementations of the max-times kernels."""

import numpy as np


def mt_matvec(A, x):
    if A.shape[1] == 0:
        return np.zeros(A.shape[0])
    return (A * x[None, :]).max(axis=1)


def mt_matmul(A, B):
    if A.shape[1] == 0:
        return np.zeros((A.shape[0], B.shape[1]))
    return (A[:, :, None] * B[None, :, :]).max(axis=1)


def mt_residual(v, w):
    mask = w > 0
    if not mask.any():
        return float("nan")
    with np.errstate(over="ignore"):  # tiny w_i give inf, as in the compiled kernel
        return float(np.min(v[mask] / w[mask]))


def mt_project(G, y):
    out = np.zeros(G.shape[0])
    for j in range(G.shape[1]):
        r = mt_residual(y, G[:, j])
        if r > 0:
            np.maximum(out, r * G[:, j], out=out)
    return out


def karp_tables(logw):
    n = logw.shape[0]
    D = np.full((n + 1, n), -np.inf)
    P = np.full((n + 1, n), -1, dtype=np.int64)
    D[0] = 0.0
    with np.errstate(invalid="ignore"):
        for k in range(1, n + 1):
            cand = D[k - 1][:, None] + logw
            arg = cand.argmax(axis=0)
            best = cand[arg, np.arange(n)]
            D[k] = best
            P[k] = np.where(best > -np.inf, arg, -1)
    return D, P
