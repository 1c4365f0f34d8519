"""Batch kernels for the Otto-cycle heats.

``closed_heats_*`` evaluate the closed-form heats, ``sum_cycle_*`` the exact
discrete sums over the common level set.  The ``*_loop`` variants are the
numba-compiled path; the ``*_np`` variants are the pure-numpy fallback.  Every
output element depends only on its own inputs, so results do not depend on how
a batch is chunked.
"""

import math

import numpy as np

from ._accel import jit
from .deformed_math import SQRT_PI, _dawson_np, _erfi_scaled_scalar

# ---------------------------------------------------------------------------
# closed forms
#
# The literal closed-form heats contain sqrt(beta (-p)) with beta p > 0, so
# they are complex.  With a = sqrt(beta p), erf(i a s) = i erfi(a s) and
# erfc(i a s) = 1 - i erfi(a s); the real part of each term reduces to
#
#   cross(own, other) = -p_own / (2 sqrt(pi) a_o^2)
#                       * [sqrt(pi) (1 - 2 a_o^2 (s_o - s_own)^2)
#                          + 2 a_o (s_o - 2 s_own) / erfi_scaled(a_o s_o)]
#   diag(own)         =  p_own / (2 sqrt(pi) a^2)
#                       * [sqrt(pi) - 2 a s_own / erfi_scaled(a s_own)]
#
# where erfi_scaled(x) = exp(-x^2) erfi(x) absorbs the exp(beta p s^2) factors.
# Q_h = cross(h, c) + diag(h);  Q_c = cross(c, h) + diag(c).
# ---------------------------------------------------------------------------


@jit
def _sigma(q, delta, alpha):
    return 0.5 - math.sqrt((delta * delta - 0.25) / (alpha * alpha * q * q) + 0.25)


@jit
def _closed_pair(q, delta, alpha_h, alpha_c, t_h, t_c):
    p_h = 0.5 * alpha_h * alpha_h
    p_c = 0.5 * alpha_c * alpha_c
    s_h = _sigma(q, delta, alpha_h)
    s_c = _sigma(q, delta, alpha_c)
    a_h = math.sqrt(p_h / t_h)
    a_c = math.sqrt(p_c / t_c)
    g_h = _erfi_scaled_scalar(a_h * s_h)
    g_c = _erfi_scaled_scalar(a_c * s_c)
    d2 = (s_c - s_h) * (s_c - s_h)

    cross_h = -p_h / (2.0 * SQRT_PI * a_c * a_c) * (
        SQRT_PI * (1.0 - 2.0 * a_c * a_c * d2) + 2.0 * a_c * (s_c - 2.0 * s_h) / g_c
    )
    diag_h = p_h / (2.0 * SQRT_PI * a_h * a_h) * (SQRT_PI - 2.0 * a_h * s_h / g_h)

    cross_c = -p_c / (2.0 * SQRT_PI * a_h * a_h) * (
        SQRT_PI * (1.0 - 2.0 * a_h * a_h * d2) + 2.0 * a_h * (s_h - 2.0 * s_c) / g_h
    )
    diag_c = p_c / (2.0 * SQRT_PI * a_c * a_c) * (SQRT_PI - 2.0 * a_c * s_c / g_c)
    return cross_h + diag_h, cross_c + diag_c


@jit
def closed_heats_loop(q, delta, alpha_h, alpha_c, t_h, t_c):
    n = q.size
    q_hot = np.empty(n)
    q_cold = np.empty(n)
    for i in range(n):
        q_hot[i], q_cold[i] = _closed_pair(q[i], delta[i], alpha_h[i], alpha_c[i], t_h[i], t_c[i])
    return q_hot, q_cold


def closed_heats_np(q, delta, alpha_h, alpha_c, t_h, t_c):
    p_h = 0.5 * alpha_h * alpha_h
    p_c = 0.5 * alpha_c * alpha_c
    depth = delta * delta - 0.25
    s_h = 0.5 - np.sqrt(depth / (alpha_h * alpha_h * q * q) + 0.25)
    s_c = 0.5 - np.sqrt(depth / (alpha_c * alpha_c * q * q) + 0.25)
    a_h = np.sqrt(p_h / t_h)
    a_c = np.sqrt(p_c / t_c)
    two_over = 2.0 / SQRT_PI
    g_h = two_over * _dawson_np(a_h * s_h)
    g_c = two_over * _dawson_np(a_c * s_c)
    d2 = (s_c - s_h) * (s_c - s_h)

    cross_h = -p_h / (2.0 * SQRT_PI * a_c * a_c) * (
        SQRT_PI * (1.0 - 2.0 * a_c * a_c * d2) + 2.0 * a_c * (s_c - 2.0 * s_h) / g_c
    )
    diag_h = p_h / (2.0 * SQRT_PI * a_h * a_h) * (SQRT_PI - 2.0 * a_h * s_h / g_h)
    cross_c = -p_c / (2.0 * SQRT_PI * a_h * a_h) * (
        SQRT_PI * (1.0 - 2.0 * a_h * a_h * d2) + 2.0 * a_h * (s_h - 2.0 * s_c) / g_h
    )
    diag_c = p_c / (2.0 * SQRT_PI * a_c * a_c) * (SQRT_PI - 2.0 * a_c * s_c / g_c)
    return cross_h + diag_h, cross_c + diag_c


# ---------------------------------------------------------------------------
# exact discrete sums
# ---------------------------------------------------------------------------


@jit
def _ladder(q, delta, alpha):
    # w_tilde and the bound-level count ceil(w_tilde - 1/2)
    w = math.sqrt(0.25 + (delta * delta - 0.25) / (alpha * alpha * q))
    nmax = w - 0.5
    count = int(math.ceil(nmax))
    if count < 1:
        count = 1
    return w, count


@jit
def _sum_cycle_one(q, delta, alpha_h, alpha_c, t_h, t_c):
    w_h, n_h = _ladder(q, delta, alpha_h)
    w_c, n_c = _ladder(q, delta, alpha_c)
    m = min(n_h, n_c)
    k_h = -0.5 * alpha_h * alpha_h
    k_c = -0.5 * alpha_c * alpha_c
    e0_h = k_h * (0.5 - w_h) ** 2
    e0_c = k_c * (0.5 - w_c) ** 2

    # Boltzmann weights relative to the ground level: kept mass / dropped mass
    keep_b = 0.0
    drop_b = 0.0
    for n in range(n_h):
        b = math.exp(-(k_h * (n + 0.5 - w_h) ** 2 - e0_h) / t_h)
        if n < m:
            keep_b += b
        else:
            drop_b += b
    keep_d = 0.0
    drop_d = 0.0
    for n in range(n_c):
        b = math.exp(-(k_c * (n + 0.5 - w_c) ** 2 - e0_c) / t_c)
        if n < m:
            keep_d += b
        else:
            drop_d += b

    q_hot = 0.0
    q_cold = 0.0
    work = 0.0
    for n in range(m):
        e_h = k_h * (n + 0.5 - w_h) ** 2
        e_c = k_c * (n + 0.5 - w_c) ** 2
        pb = math.exp(-(e_h - e0_h) / t_h) / keep_b
        pd = math.exp(-(e_c - e0_c) / t_c) / keep_d
        q_hot += e_h * (pb - pd)
        q_cold += e_c * (pd - pb)
        work += (e_h - e_c) * (pb - pd)
    loss = max(drop_b / (keep_b + drop_b), drop_d / (keep_d + drop_d))
    return q_hot, q_cold, work, loss, n_h, n_c


@jit
def sum_cycle_loop(q, delta, alpha_h, alpha_c, t_h, t_c):
    n = q.size
    q_hot = np.empty(n)
    q_cold = np.empty(n)
    work = np.empty(n)
    loss = np.empty(n)
    n_hot = np.empty(n, dtype=np.int64)
    n_cold = np.empty(n, dtype=np.int64)
    for i in range(n):
        r = _sum_cycle_one(q[i], delta[i], alpha_h[i], alpha_c[i], t_h[i], t_c[i])
        q_hot[i], q_cold[i], work[i], loss[i], n_hot[i], n_cold[i] = r
    return q_hot, q_cold, work, loss, n_hot, n_cold


# padding levels past a cell's own ladder may overflow; they are masked out
@np.errstate(over="ignore", invalid="ignore")
def sum_cycle_np(q, delta, alpha_h, alpha_c, t_h, t_c):
    depth = delta * delta - 0.25
    w_h = np.sqrt(0.25 + depth / (alpha_h * alpha_h * q))
    w_c = np.sqrt(0.25 + depth / (alpha_c * alpha_c * q))
    n_h = np.maximum(np.ceil(w_h - 0.5), 1).astype(np.int64)
    n_c = np.maximum(np.ceil(w_c - 0.5), 1).astype(np.int64)
    m = np.minimum(n_h, n_c)
    k_h = -0.5 * alpha_h * alpha_h
    k_c = -0.5 * alpha_c * alpha_c
    e0_h = k_h * (0.5 - w_h) ** 2
    e0_c = k_c * (0.5 - w_c) ** 2

    size = q.size
    top = int(max(n_h.max(initial=1), n_c.max(initial=1)))
    keep_b = np.zeros(size)
    drop_b = np.zeros(size)
    keep_d = np.zeros(size)
    drop_d = np.zeros(size)
    # accumulate level by level so each element sees the same summation order
    # as the compiled kernel regardless of batch padding
    for n in range(top):
        b = np.exp(-(k_h * (n + 0.5 - w_h) ** 2 - e0_h) / t_h)
        d = np.exp(-(k_c * (n + 0.5 - w_c) ** 2 - e0_c) / t_c)
        live_b = n < n_h
        live_d = n < n_c
        kept = n < m
        keep_b = np.where(live_b & kept, keep_b + b, keep_b)
        drop_b = np.where(live_b & ~kept, drop_b + b, drop_b)
        keep_d = np.where(live_d & kept, keep_d + d, keep_d)
        drop_d = np.where(live_d & ~kept, drop_d + d, drop_d)

    q_hot = np.zeros(size)
    q_cold = np.zeros(size)
    work = np.zeros(size)
    for n in range(int(m.max(initial=1))):
        e_h = k_h * (n + 0.5 - w_h) ** 2
        e_c = k_c * (n + 0.5 - w_c) ** 2
        pb = np.exp(-(e_h - e0_h) / t_h) / keep_b
        pd = np.exp(-(e_c - e0_c) / t_c) / keep_d
        kept = n < m
        q_hot = np.where(kept, q_hot + e_h * (pb - pd), q_hot)
        q_cold = np.where(kept, q_cold + e_c * (pd - pb), q_cold)
        work = np.where(kept, work + (e_h - e_c) * (pb - pd), work)
    loss = np.maximum(drop_b / (keep_b + drop_b), drop_d / (keep_d + drop_d))
    return q_hot, q_cold, work, loss, n_h, n_c
