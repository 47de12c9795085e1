"""Scalar special functions: normal cdf and the erfi-type integral ``Im``.

``Im(x) = int_0^x sqrt(2/pi) exp(u^2/2) du`` equals ``erfi(x/sqrt(2))``.  It is
evaluated through the Dawson function ``D(z) = exp(-z^2) int_0^z exp(s^2) ds``::

    Im(x) = (2/sqrt(pi)) * exp(x^2/2) * D(x/sqrt(2))

which keeps every intermediate finite; the exponential is applied in log space
once ``|x|`` passes ``_DIRECT_LIMIT``.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special

from ..errors import DomainError

SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)
_TWO_OVER_SQRT_PI = 2.0 / math.sqrt(math.pi)
_LOG_TWO_OVER_SQRT_PI = math.log(_TWO_OVER_SQRT_PI)
_DIRECT_LIMIT = 30.0


def _finite_array(x, name="x"):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must be finite")
    return arr


def _unwrap(arr, original):
    return float(arr) if np.ndim(original) == 0 else arr


def std_normal_cdf(x):
    """Standard normal cdf, vectorised.  Non-finite input raises DomainError."""
    arr = _finite_array(x)
    return _unwrap(special.ndtr(arr), x)


def log_std_normal_cdf(x):
    """``log Phi(x)`` accurate far into the lower tail."""
    arr = _finite_array(x)
    return _unwrap(special.log_ndtr(arr), x)


def log_abs_im_func(x):
    """``log|Im(x)|``; ``-inf`` at zero.  Never overflows for finite x."""
    arr = _finite_array(x)
    a = np.abs(arr)
    with np.errstate(divide="ignore"):
        out = _LOG_TWO_OVER_SQRT_PI + 0.5 * a * a + np.log(special.dawsn(a / math.sqrt(2.0)))
    return _unwrap(out, x)


def im_func(x):
    """``Im(x) = int_0^x sqrt(2/pi) exp(u^2/2) du``.

    Odd and strictly increasing.  Overflows to ``+-inf`` beyond ``|x| ~ 37.7``;
    use :func:`log_abs_im_func` there.
    """
    arr = _finite_array(x)
    a = np.abs(arr)
    direct = a <= _DIRECT_LIMIT
    out = np.empty_like(a)
    out[direct] = _TWO_OVER_SQRT_PI * np.exp(0.5 * a[direct] ** 2) * special.dawsn(a[direct] / math.sqrt(2.0))
    far = ~direct
    if np.any(far):
        with np.errstate(over="ignore"):
            out[far] = np.exp(log_abs_im_func(a[far]))
    return _unwrap(np.sign(arr) * out, x)


def log_one_plus_i_im(x):
    """Complex ``log(1 + i Im(x))`` with principal phase in (-pi/2, pi/2).

    Built from ``log|Im(x)|`` so it stays exact when ``Im(x)`` itself overflows.
    """
    arr = _finite_array(x)
    la = np.asarray(log_abs_im_func(arr))
    with np.errstate(over="ignore"):
        # log|1 + iy| = log|y| + 0.5*log1p(1/y^2) for |y| >= 1, else 0.5*log1p(y^2)
        small = la < 0.0
        y_small = np.exp(np.where(small, la, 0.0))
        inv_y2 = np.exp(-2.0 * np.where(small, 0.0, la))
        mag = np.where(small, 0.5 * np.log1p(y_small ** 2), la + 0.5 * np.log1p(inv_y2))
        inv_y = np.exp(-np.where(small, 0.0, la))
        phase_abs = np.where(small, np.arctan(y_small), 0.5 * math.pi - np.arctan(inv_y))
    phase = np.sign(arr) * phase_abs
    out = mag + 1j * phase
    return complex(out) if np.ndim(x) == 0 else out


def scaled_im(c, x):
    """``c * Im(c x) / exp(c^2 x^2 / 2)``, computed without overflow.

    Equals ``c * (2/sqrt(pi)) * D(c x / sqrt(2))`` exactly.
    """
    c_arr = _finite_array(c, "c")
    x_arr = _finite_array(x)
    out = c_arr * _TWO_OVER_SQRT_PI * special.dawsn(c_arr * x_arr / math.sqrt(2.0))
    return float(out) if out.ndim == 0 else out


def double_factorial(n: int) -> int:
    """``n!!`` with ``0!! = (-1)!! = 1``."""
    if n < -1:
        raise DomainError("double factorial defined for n >= -1")
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def r_n_expansion(c: float, x: float, n_terms: int) -> float:
    """Truncated large-``c`` series for :func:`scaled_im`.

    ``sqrt(2/pi)/x * [1 + sum_{n=1}^{N} (2n-1)!! / (c x)^{2n}]``; the omitted
    remainder is ``O(c^{-2(N+1)})``.
    """
    if not (math.isfinite(c) and c > 0):
        raise DomainError("c must be a positive finite number")
    if not math.isfinite(x) or x == 0.0:
        raise DomainError("x must be finite and nonzero")
    if n_terms < 0:
        raise DomainError("n_terms must be non-negative")
    cx2 = (c * x) ** 2
    total = 1.0
    power = 1.0
    for n in range(1, n_terms + 1):
        power *= cx2
        total += double_factorial(2 * n - 1) / power
    return SQRT_2_OVER_PI / x * total
