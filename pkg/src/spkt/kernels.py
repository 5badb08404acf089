"""Compiled inner loops for convolution.

All kernels operate on channels-last arrays and are written so every output
element is accumulated by exactly one thread in a fixed order, which keeps
results bitwise reproducible run to run. Dense matrix products are left to
BLAS; these kernels only gather, scatter, and do the small per-tap work that
numpy handles poorly.
"""

import numpy as np
from numba import njit, prange


@njit(parallel=True, cache=True)
def im2col(xp, kh, kw, sh, sw, ho, wo, col):
    """Gather conv patches: xp (B,Hp,Wp,C) padded -> col (B*ho*wo, kh*kw*C)."""
    B = xp.shape[0]
    C = xp.shape[3]
    for bz in prange(B * ho):
        b = bz // ho
        y = bz % ho
        base = bz * wo
        for x in range(wo):
            r = base + x
            k = 0
            for i in range(kh):
                ys = y * sh + i
                for j in range(kw):
                    xs = x * sw + j
                    for c in range(C):
                        col[r, k] = xp[b, ys, xs, c]
                        k += 1


@njit(parallel=True, cache=True)
def conv_input_grad(dy, wt, sh, sw, dxp):
    """Scatter dL/dx for a conv: dy (B,Ho,Wo,Co), wt (kh,kw,Co,Ci) -> dxp (B,Hp,Wp,Ci).

    Parallel over the batch only; taps of one sample overlap in dxp and must
    stay sequential.
    """
    B, ho, wo, co_n = dy.shape
    kh, kw = wt.shape[0], wt.shape[1]
    ci_n = wt.shape[3]
    for b in prange(B):
        for y in range(ho):
            for x in range(wo):
                for i in range(kh):
                    ys = y * sh + i
                    for j in range(kw):
                        xs = x * sw + j
                        for co in range(co_n):
                            v = dy[b, y, x, co]
                            for ci in range(ci_n):
                                dxp[b, ys, xs, ci] += v * wt[i, j, co, ci]


@njit(parallel=True, cache=True)
def dw_forward(xp, w, out):
    """Depthwise conv forward: xp (B,Hp,Wp,C), w (kh,kw,C) -> out (B,Ho,Wo,C)."""
    B, ho, wo, C = out.shape
    kh, kw = w.shape[0], w.shape[1]
    for bz in prange(B * ho):
        b = bz // ho
        y = bz % ho
        for x in range(wo):
            for c in range(C):
                out[b, y, x, c] = 0.0
            for i in range(kh):
                for j in range(kw):
                    for c in range(C):
                        out[b, y, x, c] += xp[b, y + i, x + j, c] * w[i, j, c]


@njit(parallel=True, cache=True)
def dw_input_grad(dy, w, dxp):
    """Depthwise conv input gradient, scattered into padded dxp."""
    B, ho, wo, C = dy.shape
    kh, kw = w.shape[0], w.shape[1]
    for b in prange(B):
        for y in range(ho):
            for x in range(wo):
                for i in range(kh):
                    for j in range(kw):
                        for c in range(C):
                            dxp[b, y + i, x + j, c] += dy[b, y, x, c] * w[i, j, c]


@njit(parallel=True, cache=True)
def dw_weight_grad(xp, dy, dw):
    """Depthwise conv weight gradient: dw (kh,kw,C), one thread per tap."""
    B, ho, wo, C = dy.shape
    kh, kw = dw.shape[0], dw.shape[1]
    for tap in prange(kh * kw):
        i = tap // kw
        j = tap % kw
        for c in range(C):
            dw[i, j, c] = 0.0
        for b in range(B):
            for y in range(ho):
                for x in range(wo):
                    for c in range(C):
                        dw[i, j, c] += xp[b, y + i, x + j, c] * dy[b, y, x, c]


def warmup(dtype=np.float32):
    """Force-compile all kernels for the given dtype (first call is slow)."""
    xp = np.zeros((1, 4, 4, 2), dtype)
    col = np.zeros((4, 2 * 9), dtype)
    im2col(xp, 3, 3, 1, 1, 2, 2, col)
    dy = np.zeros((1, 2, 2, 3), dtype)
    conv_input_grad(dy, np.zeros((3, 3, 3, 2), dtype), 1, 1, np.zeros((1, 4, 4, 2), dtype))
    dw_forward(xp, np.zeros((3, 3, 2), dtype), np.zeros((1, 2, 2, 2), dtype))
    dw_input_grad(np.zeros((1, 2, 2, 2), dtype), np.zeros((3, 3, 2), dtype), np.zeros((1, 4, 4, 2), dtype))
    dw_weight_grad(xp, np.zeros((1, 2, 2, 2), dtype), np.zeros((3, 3, 2), dtype))
