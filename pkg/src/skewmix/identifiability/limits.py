"""Numerical traces of ``T0(ct) / T1(ct)`` as ``c`` grows, for T the cf or mgf."""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from .. import distributions as dist
from ..errors import PreconditionError
from .linear import nz_index, v_rate, xi_value
from .types import LimitVerdict, RatioLimitResult, RatioTrace, Transform

LOG_SMALL = math.log(1e-12)
LOG_LARGE = math.log(1e12)
MIN_C_MAX = 100.0
_STABLE_SPREAD = 0.5
_Q_TOL = 1e-10


def default_c_grid(n: int = 60, c_min: float = 1.0, c_max: float = 1e3) -> np.ndarray:
    return np.geomspace(c_min, c_max, n)


def _direction(params, t) -> np.ndarray:
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if t.shape != (params.dim,):
        raise PreconditionError(f"t must have length {params.dim}")
    if not np.all(np.isfinite(t)) or not np.any(t):
        raise PreconditionError("t must be finite and nonzero")
    return t


def _along(params, c, t):
    pts = c[:, None] * t[None, :]
    return pts[:, 0] if params.family == "sn" else pts


def log_ratio(f0, f1, t, transform: Transform, c_grid) -> np.ndarray:
    """Complex log of the ratio along ``c * t``; imaginary part is the unwrapped phase."""
    c = np.asarray(c_grid, dtype=float)
    if transform is Transform.CF:
        return np.asarray(dist.log_cf(f0, _along(f0, c, t))) - np.asarray(dist.log_cf(f1, _along(f1, c, t)))
    lr = np.asarray(dist.log_mgf(f0, _along(f0, c, t))) - np.asarray(dist.log_mgf(f1, _along(f1, c, t)))
    return lr.astype(complex)


def predicted_limit(f0, f1, t, transform: Transform, q_tol: float = _Q_TOL) -> LimitVerdict:
    """Asymptotic verdict from the parameters alone.

    CF: the sign of ``t'(Gamma0 - Gamma1)t`` decides; at zero the difference in
    the count of columns with ``S_j't != 0`` gives a power of ``c``.
    MGF: the log ratio grows like ``c^2 / 2`` times
    ``t'Omega0 t - sum_{S0_j't<0} (S0_j't)^2`` minus the same for f1, which
    is ``t'(Gamma0 - Gamma1)t`` when both skew projections are non-positive.
    """
    t = _direction(f0, t)
    scale = float(t @ t)
    mu0, om0, s0 = dist.location_scale_skew(f0)
    mu1, om1, s1 = dist.location_scale_skew(f1)
    p0, p1 = s0.T @ t, s1.T @ t
    if transform is Transform.CF:
        q = float(t @ (dist.gamma_matrix(f0) - dist.gamma_matrix(f1)) @ t)
        if q > q_tol * scale:
            return LimitVerdict.TO_ZERO
        if q < -q_tol * scale:
            return LimitVerdict.TO_INF
        dn = len(nz_index(p0)) - len(nz_index(p1))
        if dn == 0:
            return LimitVerdict.BOUNDED_AWAY
        return LimitVerdict.TO_ZERO if dn > 0 else LimitVerdict.TO_INF
    e0 = t @ om0 @ t - float(np.sum(np.minimum(p0, 0.0) ** 2))
    e1 = t @ om1 @ t - float(np.sum(np.minimum(p1, 0.0) ** 2))
    q = e0 - e1
    if q < -q_tol * scale:
        return LimitVerdict.TO_ZERO
    if q > q_tol * scale:
        return LimitVerdict.TO_INF
    lin = float((mu0 - mu1) @ t)
    if abs(lin) > q_tol:
        return LimitVerdict.TO_ZERO if lin < 0 else LimitVerdict.TO_INF
    neg0 = int(np.sum(p0 < -q_tol))
    neg1 = int(np.sum(p1 < -q_tol))
    if neg0 == neg1:
        return LimitVerdict.BOUNDED_AWAY
    return LimitVerdict.TO_ZERO if neg0 > neg1 else LimitVerdict.TO_INF


def observed_limit(c_grid, log_abs) -> tuple[LimitVerdict, float]:
    """Verdict and log-log slope fitted over the last quarter of the trace."""
    c = np.asarray(c_grid, dtype=float)
    y = np.asarray(log_abs, dtype=float)
    tail = max(2, len(c) // 4)
    lc, ly = np.log(c[-tail:]), y[-tail:]
    with np.errstate(invalid="ignore"):
        slope = float(np.polyfit(lc, ly, 1)[0]) if np.all(np.isfinite(ly)) else math.nan
    last = y[-1]
    if last < LOG_SMALL:
        return LimitVerdict.TO_ZERO, slope
    if last > LOG_LARGE:
        return LimitVerdict.TO_INF, slope
    if np.all(np.isfinite(ly)) and float(ly.max() - ly.min()) < _STABLE_SPREAD:
        return LimitVerdict.BOUNDED_AWAY, slope
    return LimitVerdict.INCONCLUSIVE, slope


def verify_ratio_limit(f0, f1, t, transform: Transform | str = Transform.CF, c_grid=None) -> RatioLimitResult:
    """Trace ``log |T0(ct)/T1(ct)|`` over ``c_grid`` and compare to the predicted limit."""
    dist.same_family(f0, f1)
    transform = Transform(transform)
    t = _direction(f0, t)
    c = default_c_grid() if c_grid is None else np.asarray(c_grid, dtype=float)
    if c.ndim != 1 or len(c) < 2 or np.any(c <= 0) or np.any(np.diff(c) <= 0):
        raise PreconditionError("c_grid must be a strictly increasing grid of positive values")
    if c[-1] < MIN_C_MAX:
        raise PreconditionError(f"c_grid must reach at least {MIN_C_MAX:g}")
    lr = log_ratio(f0, f1, t, transform, c)
    trace = RatioTrace(c, lr.real.copy(), lr.imag.copy(), transform, t)
    verdict, slope = observed_limit(c, trace.log_abs_ratio)
    normalized: Optional[np.ndarray] = None
    xi: Optional[complex] = None
    if transform is Transform.CF and f0.family == "cfusn":
        v = [v_rate(ci, f0, f1, t) for ci in c]
        log_v = np.array([vi.log_abs + 1j * vi.phase for vi in v])
        normalized = np.exp(lr - log_v)
        xi = xi_value(f0.lambda_mat, f1.lambda_mat, t)
    return RatioLimitResult(trace, verdict, predicted_limit(f0, f1, t, transform), slope, normalized, xi)
