"""q-deformed hyperbolic functions, the error-function family and terminating 2F1.

Every special function comes in two flavours that share the same branch layout:

* a scalar kernel (``_*_scalar``) compiled with numba when enabled, used for
  scalar arguments and inside the other compiled kernels;
* a vectorised numpy kernel (``_*_np``) used for array arguments when numba is
  disabled.  The compiled backend loops the scalar kernel instead.
"""

import math

import numpy as np

from ._accel import NUMBA_ENABLED, jit
from .errors import DegenerateHypergeometric

SQRT_PI = math.sqrt(math.pi)
TWO_OVER_SQRT_PI = 2.0 / SQRT_PI
# exp() overflows just above this
EXP_LIMIT = 709.78

# Branch seams.  Each pair of neighbouring branches agrees to ~1e-15 at its seam.
_ERF_SERIES_MAX = 2.5
_ERFC_CF_MIN = 0.9
# the fraction converges slowly near the seam; deeper evaluation below 2
_ERFC_CF_DEEP_BELOW = 2.0
_ERFC_CF_DEPTH_DEEP = 300
_ERFC_CF_DEPTH = 100
_ERF_SERIES_TERMS = 90
_DAWSON_SERIES_MAX = 0.5
_DAWSON_SERIES_TERMS = 24
_DAWSON_ASYMPTOTIC_MIN = 7.0
_DAWSON_ASYMPTOTIC_TERMS = 30
# Rybicki sampling: step H, NT odd-offset terms.  Aliasing error ~ exp(-(pi/2H)^2).
_RYB_H = 0.2
_RYB_NT = 24
_RYB_COEF = np.array([math.exp(-(((2 * i + 1) * _RYB_H) ** 2)) for i in range(_RYB_NT)])


# --------------------------------------------------------------------------
# q-deformed hyperbolic functions
# --------------------------------------------------------------------------

def _check_q(q):
    if not q > 0.0:
        raise ValueError(f"deformation parameter q must be > 0, got {q!r}")


def cosh_q(y, q):
    """(e^y + q e^-y) / 2.  Raises OverflowError once e^|y| leaves double range."""
    _check_q(q)
    y = np.asarray(y, dtype=float)
    if np.any(np.abs(y) > EXP_LIMIT):
        raise OverflowError("cosh_q argument outside the floating-point exponent range")
    out = 0.5 * (np.exp(y) + q * np.exp(-y))
    return float(out) if out.ndim == 0 else out


def sinh_q(y, q):
    """(e^y - q e^-y) / 2, evaluated as sqrt(q) sinh(y - ln(q)/2).

    The shifted form keeps full relative accuracy next to the zero at
    y = ln(q)/2 and is the ordinary sinh when q = 1.
    """
    _check_q(q)
    y = np.asarray(y, dtype=float)
    if np.any(np.abs(y) > EXP_LIMIT):
        raise OverflowError("sinh_q argument outside the floating-point exponent range")
    out = math.sqrt(q) * np.sinh(y - 0.5 * math.log(q))
    return float(out) if out.ndim == 0 else out


def tanh_q(y, q):
    """sinh_q / cosh_q = tanh(y - ln(q)/2); never overflows and saturates at +-1.

    Equivalent to (1 - q e^-2y) / (1 + q e^-2y) for y > 0 (mirrored for
    y < 0) without the cancellation that form suffers for small y.
    """
    _check_q(q)
    y = np.asarray(y, dtype=float)
    out = np.tanh(y - 0.5 * math.log(q))
    return float(out) if out.ndim == 0 else out


def log_cosh_q(y, q):
    """log(cosh_q(y)) without overflow."""
    _check_q(q)
    y = np.asarray(y, dtype=float)
    lq = math.log(q)
    out = np.where(
        y >= 0,
        y + np.log1p(q * np.exp(-2.0 * np.abs(y))) - math.log(2.0),
        lq - y + np.log1p(np.exp(-2.0 * np.abs(y)) / q) - math.log(2.0),
    )
    return float(out) if out.ndim == 0 else out


# --------------------------------------------------------------------------
# scalar kernels
# --------------------------------------------------------------------------

@jit
def _erf_series_scalar(x):
    # 2x/sqrt(pi) e^{-x^2} sum_n (2x^2)^n / (2n+1)!!  -- all terms positive
    y = 2.0 * x * x
    term = 1.0
    s = 1.0
    for n in range(1, _ERF_SERIES_TERMS):
        term *= y / (2 * n + 1)
        s += term
        if term < 1e-17 * s:
            break
    return TWO_OVER_SQRT_PI * x * math.exp(-x * x) * s


@jit
def _erfc_cf_scalar(x):
    # Laplace continued fraction, x >= _ERFC_CF_MIN, evaluated bottom-up
    depth = _ERFC_CF_DEPTH_DEEP if x < _ERFC_CF_DEEP_BELOW else _ERFC_CF_DEPTH
    t = x
    for k in range(depth, 0, -1):
        t = x + 0.5 * k / t
    return math.exp(-x * x) / (SQRT_PI * t)


@jit
def _erf_scalar(x):
    ax = abs(x)
    if ax <= _ERF_SERIES_MAX:
        return _erf_series_scalar(x)
    return math.copysign(1.0 - _erfc_cf_scalar(ax), x)


@jit
def _erfc_scalar(x):
    if x < _ERFC_CF_MIN:
        if x < -_ERF_SERIES_MAX:
            return 2.0 - _erfc_cf_scalar(-x)
        return 1.0 - _erf_series_scalar(x)
    return _erfc_cf_scalar(x)


@jit
def _dawson_scalar(x):
    ax = abs(x)
    if ax < _DAWSON_SERIES_MAX:
        # sum_k (-1)^k 2^k x^{2k+1} / (2k+1)!!
        y = 2.0 * x * x
        term = x
        s = x
        for k in range(1, _DAWSON_SERIES_TERMS):
            term *= -y / (2 * k + 1)
            s += term
        return s
    if ax >= _DAWSON_ASYMPTOTIC_MIN:
        y = 0.5 / (x * x)
        term = 1.0
        s = 1.0
        for k in range(1, _DAWSON_ASYMPTOTIC_TERMS):
            term *= (2 * k - 1) * y
            s += term
            if term < 1e-18:
                break
        return s / (2.0 * x)
    # Rybicki's exponentially convergent sampling sum
    n0 = 2.0 * round(0.5 * ax / _RYB_H)
    xp = ax - n0 * _RYB_H
    e1 = math.exp(2.0 * xp * _RYB_H)
    e2 = e1 * e1
    d1 = n0 + 1.0
    d2 = d1 - 2.0
    s = 0.0
    for i in range(_RYB_NT):
        s += _RYB_COEF[i] * (e1 / d1 + 1.0 / (d2 * e1))
        d1 += 2.0
        d2 -= 2.0
        e1 *= e2
    return math.copysign(math.exp(-xp * xp) * s / SQRT_PI, x)


@jit
def _erfi_scaled_scalar(x):
    return TWO_OVER_SQRT_PI * _dawson_scalar(x)


# --------------------------------------------------------------------------
# compiled array loops
# --------------------------------------------------------------------------

@jit
def _erf_loop(x):
    out = np.empty_like(x)
    for i in range(x.size):
        out.flat[i] = _erf_scalar(x.flat[i])
    return out


@jit
def _erfc_loop(x):
    out = np.empty_like(x)
    for i in range(x.size):
        out.flat[i] = _erfc_scalar(x.flat[i])
    return out


@jit
def _dawson_loop(x):
    out = np.empty_like(x)
    for i in range(x.size):
        out.flat[i] = _dawson_scalar(x.flat[i])
    return out


# --------------------------------------------------------------------------
# numpy fallback kernels (same branches, fixed iteration counts)
# --------------------------------------------------------------------------

def _erf_series_np(x):
    y = 2.0 * x * x
    term = np.ones_like(x)
    s = np.ones_like(x)
    for n in range(1, _ERF_SERIES_TERMS):
        term = term * (y / (2 * n + 1))
        s = s + term
    return TWO_OVER_SQRT_PI * x * np.exp(-x * x) * s


def _erfc_cf_np(x):
    t = x.copy()
    deep = x < _ERFC_CF_DEEP_BELOW
    for k in range(_ERFC_CF_DEPTH_DEEP, 0, -1):
        step = x + 0.5 * k / t
        t = step if k <= _ERFC_CF_DEPTH else np.where(deep, step, t)
    return np.exp(-x * x) / (SQRT_PI * t)


def _erf_np(x):
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    small = ax <= _ERF_SERIES_MAX
    out = np.empty_like(x)
    out[small] = _erf_series_np(x[small])
    big = ~small
    out[big] = np.copysign(1.0 - _erfc_cf_np(ax[big]), x[big])
    return out


def _erfc_np(x):
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    cf = x >= _ERFC_CF_MIN
    neg = x < -_ERF_SERIES_MAX
    mid = ~(cf | neg)
    out[cf] = _erfc_cf_np(x[cf])
    out[neg] = 2.0 - _erfc_cf_np(-x[neg])
    out[mid] = 1.0 - _erf_series_np(x[mid])
    return out


def _dawson_np(x):
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    out = np.empty_like(x)

    ser = ax < _DAWSON_SERIES_MAX
    xs = x[ser]
    y = 2.0 * xs * xs
    term = xs.copy()
    s = xs.copy()
    for k in range(1, _DAWSON_SERIES_TERMS):
        term = term * (-y / (2 * k + 1))
        s = s + term
    out[ser] = s

    asy = ax >= _DAWSON_ASYMPTOTIC_MIN
    xa = x[asy]
    y = 0.5 / (xa * xa)
    term = np.ones_like(xa)
    s = np.ones_like(xa)
    for k in range(1, _DAWSON_ASYMPTOTIC_TERMS):
        term = term * ((2 * k - 1) * y)
        s = s + np.where(term < 1e-18, 0.0, term)
    out[asy] = s / (2.0 * xa)

    mid = ~(ser | asy)
    xm = ax[mid]
    n0 = 2.0 * np.round(0.5 * xm / _RYB_H)
    xp = xm - n0 * _RYB_H
    e1 = np.exp(2.0 * xp * _RYB_H)
    e2 = e1 * e1
    d1 = n0 + 1.0
    d2 = d1 - 2.0
    s = np.zeros_like(xm)
    for i in range(_RYB_NT):
        s = s + _RYB_COEF[i] * (e1 / d1 + 1.0 / (d2 * e1))
        d1 = d1 + 2.0
        d2 = d2 - 2.0
        e1 = e1 * e2
    out[mid] = np.copysign(np.exp(-xp * xp) * s / SQRT_PI, x[mid])
    return out


# --------------------------------------------------------------------------
# public error-function family
# --------------------------------------------------------------------------

def _dispatch(x, scalar, loop, vec):
    if np.ndim(x) == 0:
        return float(scalar(float(x)))
    arr = np.ascontiguousarray(x, dtype=float)
    if NUMBA_ENABLED:
        return loop(arr)
    return vec(arr)


def erf(x):
    """Error function; ~1 ulp relative accuracy for |x| <= 6."""
    return _dispatch(x, _erf_scalar, _erf_loop, _erf_np)


def erfc(x):
    """Complementary error function, relative accuracy kept in the tail."""
    return _dispatch(x, _erfc_scalar, _erfc_loop, _erfc_np)


def dawson(x):
    """Dawson's integral F(x) = exp(-x^2) * int_0^x exp(t^2) dt."""
    return _dispatch(x, _dawson_scalar, _dawson_loop, _dawson_np)


def erfi_scaled(x):
    """erfi(x) * exp(-x^2) = 2 F(x) / sqrt(pi); bounded for all real x."""
    d = dawson(x)
    return TWO_OVER_SQRT_PI * d


def _square_split(x):
    # x*x = hi + lo exactly (Dekker); exp(hi) * (1 + lo) avoids the ~x^2 ulp
    # amplification that rounding x*x would feed into the exponential
    hi = x * x
    c = 134217729.0 * x
    xh = c - (c - x)
    xl = x - xh
    lo = ((xh * xh - hi) + 2.0 * xh * xl) + xl * xl
    return hi, lo


def erfi(x):
    """Imaginary error function -i erf(ix), built from Dawson's function.

    Raises OverflowError when x^2 exceeds the exponent range; use
    :func:`erfi_scaled` to work with the scaled value instead.
    """
    x = np.asarray(x, dtype=float)
    hi, lo = _square_split(x)
    if np.any(hi > EXP_LIMIT):
        raise OverflowError("erfi(x) overflows for x^2 > 709.78; use erfi_scaled")
    out = np.exp(hi) * (1.0 + lo) * erfi_scaled(x)
    return float(out) if np.ndim(out) == 0 else out


def log_abs_erfi(x):
    """log|erfi(x)| for x != 0, valid far beyond the overflow point of erfi."""
    x = np.asarray(x, dtype=float)
    out = np.square(x) + np.log(np.abs(erfi_scaled(x)))
    return float(out) if out.ndim == 0 else out


# --------------------------------------------------------------------------
# terminating hypergeometric series
# --------------------------------------------------------------------------

def hyp2f1_poly(n, b, c, x):
    """2F1(-n, b; c; x) as the finite sum over k = 0..n.

    ``x`` may be an array.  Raises DegenerateHypergeometric when (c)_k
    vanishes for some k < n.
    """
    n = int(n)
    if n < 0:
        raise ValueError(f"degree must be a non-negative integer, got {n}")
    for k in range(n):
        if c + k == 0.0:
            raise DegenerateHypergeometric(
                f"(c)_k vanishes at k={k} for c={c!r}; 2F1(-{n}, b; c; x) is undefined"
            )
    x = np.asarray(x, dtype=float)
    term = np.ones_like(x)
    total = np.ones_like(x)
    for k in range(n):
        term = term * ((k - n) * (b + k) / ((c + k) * (k + 1.0))) * x
        total = total + term
    return float(total) if total.ndim == 0 else total
