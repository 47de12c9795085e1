"""Estimating the mixing proportion of a known component.

Two estimators:

* :func:`estimate_alpha_known_both` maximises the (concave) log-likelihood in
  ``alpha`` alone by golden-section search.
* :func:`estimate_alpha_unknown_f0` runs EM over ``alpha`` and the parameters
  of a univariate SN unknown component.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np
from scipy import optimize
from scipy.special import log_ndtr

from . import distributions as dist
from .distributions import FamilyParams, SnParams
from .errors import DegenerateDataError, NumericalError, PreconditionError
from .identifiability import IdentifiabilityReport, check_identifiable

ALPHA_EPS = 1e-6
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
MONOTONE_TOL = 1e-10
DEFAULT_INIT_SHAPES = (-2.0, 2.0)


@dataclass(frozen=True, eq=False)
class EstimationResult:
    alpha_hat: float
    log_likelihood: float
    trace: tuple[float, ...]
    converged: bool
    identifiability_check: IdentifiabilityReport
    f0_hat: Optional[FamilyParams] = None
    n_iter: int = 0

    def to_dict(self) -> dict:
        return {
            "alpha_hat": self.alpha_hat,
            "f0_hat": None if self.f0_hat is None else dist.params_to_dict(self.f0_hat),
            "log_likelihood": self.log_likelihood,
            "trace": list(self.trace),
            "converged": self.converged,
            "n_iter": self.n_iter,
            "identifiability_check": self.identifiability_check.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EstimationResult":
        return cls(
            alpha_hat=float(d["alpha_hat"]),
            log_likelihood=float(d["log_likelihood"]),
            trace=tuple(float(v) for v in d["trace"]),
            converged=bool(d["converged"]),
            identifiability_check=IdentifiabilityReport.from_dict(d["identifiability_check"]),
            f0_hat=None if d.get("f0_hat") is None else dist.params_from_dict(d["f0_hat"]),
            n_iter=int(d.get("n_iter", 0)),
        )


@dataclass(frozen=True)
class EmOptions:
    max_iter: int = 500
    tol: float = 1e-8
    alpha_init: float = 0.5
    shape_bound: float = 50.0


def _check_sample(sample, params: FamilyParams) -> np.ndarray:
    x = np.asarray(sample, dtype=float)
    if params.family == "sn":
        x = x.reshape(-1) if x.ndim == 2 and x.shape[1] == 1 else x
        if x.ndim != 1:
            raise PreconditionError("SN sample must be one-dimensional")
    elif x.ndim != 2 or x.shape[1] != params.dim:
        raise PreconditionError(f"sample must have shape (n, {params.dim})")
    if x.shape[0] == 0:
        raise PreconditionError("sample is empty")
    if not np.all(np.isfinite(x)):
        raise PreconditionError("sample has non-finite values")
    if np.all(x == x[0]):
        raise DegenerateDataError("all sample points are identical")
    return x


def _mixture_loglik(alpha: float, l1: np.ndarray, l0: np.ndarray) -> float:
    return float(np.sum(np.logaddexp(math.log(alpha) + l1, math.log1p(-alpha) + l0)))


def golden_section_max(fun, lo: float, hi: float, xtol: float = 1e-10, max_iter: int = 200):
    """Maximise a unimodal ``fun`` on ``[lo, hi]``; returns ``(x, f(x), trace)``."""
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = fun(c), fun(d)
    trace = []
    for _ in range(max_iter):
        if b - a <= xtol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = fun(d)
        trace.append(max(fc, fd))
    candidates = [(fc, c), (fd, d), (fun(lo), lo), (fun(hi), hi)]
    best_f, best_x = max(candidates)
    return best_x, best_f, trace


def estimate_alpha_known_both(sample, f1: FamilyParams, f0: FamilyParams) -> EstimationResult:
    dist.same_family(f0, f1)
    x = _check_sample(sample, f1)
    l1 = np.asarray(dist.log_pdf(f1, x))
    l0 = np.asarray(dist.log_pdf(f0, x))
    alpha, ll, trace = golden_section_max(lambda a: _mixture_loglik(a, l1, l0), ALPHA_EPS, 1.0 - ALPHA_EPS)
    return EstimationResult(
        alpha_hat=float(alpha),
        log_likelihood=ll,
        trace=tuple(trace),
        converged=True,
        identifiability_check=check_identifiable(f0, f1),
        f0_hat=f0,
        n_iter=len(trace),
    )


def _sn_weighted_objective(theta, x, w):
    """Negative ``sum w log f(x; mu, exp(log_omega), lam)`` and its gradient."""
    mu, log_om, lam = theta
    om = math.exp(log_om)
    z = (x - mu) / om
    lz = lam * z
    log_cdf = log_ndtr(lz)
    mills = np.exp(-0.5 * lz * lz - _LOG_SQRT_2PI - log_cdf)
    ll = math.log(2.0) - log_om - 0.5 * z * z - _LOG_SQRT_2PI + log_cdf
    g_mu = (z - lam * mills) / om
    g_lom = -1.0 + z * z - lz * mills
    g_lam = z * mills
    value = -float(w @ ll)
    grad = -np.array([w @ g_mu, w @ g_lom, w @ g_lam])
    return value, grad


SADDLE_SHAPE = 0.5


def _moment_matched(x, w, lam: float) -> np.ndarray:
    """``(mu, log omega, lam)`` whose SN mean and variance match the weighted sample."""
    m = float(w @ x / w.sum())
    v = float(w @ (x - m) ** 2 / w.sum())
    d = lam / math.sqrt(1.0 + lam * lam)
    om = math.sqrt(v / (1.0 - 2.0 * d * d / math.pi))
    return np.array([m - om * d * math.sqrt(2.0 / math.pi), math.log(om), lam])


def _m_step(x, w, current: SnParams, shape_bound: float) -> SnParams:
    theta0 = np.array([current.mu, math.log(current.omega), current.lam])
    start, _ = _sn_weighted_objective(theta0, x, w)
    starts = [theta0]
    # the SN score in lam vanishes near lam = 0, so also try skewed restarts there
    if abs(current.lam) < SADDLE_SHAPE:
        starts += [_moment_matched(x, w, s) for s in DEFAULT_INIT_SHAPES]
    bounds = [(None, None), (-20.0, 20.0), (-shape_bound, shape_bound)]
    best = None
    for th in starts:
        res = optimize.minimize(_sn_weighted_objective, th, args=(x, w), jac=True, method="L-BFGS-B", bounds=bounds)
        if np.all(np.isfinite(res.x)) and (best is None or res.fun < best.fun):
            best = res
    if best is None or best.fun > start:
        return current
    return SnParams(best.x[0], math.exp(best.x[1]), best.x[2])


def estimate_alpha_unknown_f0(
    sample,
    f1: SnParams,
    family: str = "sn",
    init: Optional[SnParams] = None,
    options: EmOptions = EmOptions(),
) -> EstimationResult:
    """EM for ``(alpha, f0)`` with f0 a univariate SN.

    E-step ``r_i = alpha f1(x_i) / f(x_i)``; M-step ``alpha = mean(r)`` and a
    bounded quasi-Newton maximisation of ``sum (1 - r_i) log f0(x_i)`` in
    ``(mu, log omega, lam)``.  The M-step only accepts parameters that do not
    lower that weighted objective, which keeps the likelihood monotone.  While
    the shape sits near zero the inner solve is also restarted from skewed,
    moment-matched points.

    Without ``init`` the run starts from ``SN(mean, sd, lam)`` for each
    ``lam`` in ``DEFAULT_INIT_SHAPES`` and the higher likelihood wins.  A zero
    shape start is avoided on purpose: the SN score in ``lam`` vanishes there
    once ``mu`` sits at the weighted mean, so EM tends to stall at ``lam = 0``.
    """
    if family != "sn" or not isinstance(f1, SnParams):
        raise PreconditionError("unknown-f0 estimation supports the univariate SN family only")
    if init is not None and not isinstance(init, SnParams):
        raise PreconditionError("init must be SnParams")
    if not 0.0 < options.alpha_init < 1.0:
        raise PreconditionError("alpha_init must lie in (0, 1)")
    x = _check_sample(sample, f1)
    if init is not None:
        return _em(x, f1, init, options)
    runs = [_em(x, f1, SnParams(float(x.mean()), float(x.std()), lam), options) for lam in DEFAULT_INIT_SHAPES]
    return max(runs, key=lambda r: r.log_likelihood)


def _em(x, f1: SnParams, f0: SnParams, options: EmOptions) -> EstimationResult:
    alpha = options.alpha_init
    l1 = np.asarray(dist.log_pdf(f1, x))
    l0 = np.asarray(dist.log_pdf(f0, x))
    ll = _mixture_loglik(alpha, l1, l0)
    trace = [ll]
    converged = False
    n_iter = 0
    for n_iter in range(1, options.max_iter + 1):
        a = math.log(alpha) + l1
        b = math.log1p(-alpha) + l0
        r = np.exp(a - np.logaddexp(a, b))
        if np.any(r < 0) or np.any(r > 1):
            raise NumericalError("responsibilities left [0, 1]")
        alpha = float(np.clip(r.mean(), ALPHA_EPS, 1.0 - ALPHA_EPS))
        f0 = _m_step(x, 1.0 - r, f0, options.shape_bound)
        l0 = np.asarray(dist.log_pdf(f0, x))
        new_ll = _mixture_loglik(alpha, l1, l0)
        if new_ll < ll - MONOTONE_TOL * max(1.0, abs(ll)):
            raise NumericalError(f"EM log-likelihood decreased from {ll!r} to {new_ll!r}")
        trace.append(new_ll)
        gain = new_ll - ll
        ll = new_ll
        if gain < options.tol:
            converged = True
            break
    return EstimationResult(
        alpha_hat=alpha,
        log_likelihood=ll,
        trace=tuple(trace),
        converged=converged,
        identifiability_check=check_identifiable(f0, f1),
        f0_hat=f0,
        n_iter=n_iter,
    )


def restart_inits(sample, n: int = 5) -> list[SnParams]:
    """Dispersed SN starting points built from sample quantiles."""
    x = np.asarray(sample, dtype=float).reshape(-1)
    sd = float(x.std())
    qs = np.quantile(x, np.linspace(0.1, 0.9, n))
    shapes = np.linspace(-3.0, 3.0, n)
    return [SnParams(float(q), sd, float(s)) for q, s in zip(qs, shapes)]


def load_sample(path) -> np.ndarray:
    """CSV with one point per row; a non-numeric first row is taken as a header."""
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if not rows:
        raise PreconditionError(f"{path}: no data rows")
    try:
        [float(v) for v in rows[0]]
    except ValueError:
        rows = rows[1:]
    try:
        arr = np.array([[float(v) for v in r] for r in rows])
    except ValueError as exc:
        raise PreconditionError(f"{path}: non-numeric entry ({exc})") from exc
    if arr.size == 0:
        raise PreconditionError(f"{path}: no data rows")
    return arr[:, 0] if arr.shape[1] == 1 else arr


def sample_to_csv(x) -> str:
    arr = np.asarray(x, dtype=float)
    arr = arr.reshape(-1, 1) if arr.ndim == 1 else arr
    header = ["x"] if arr.shape[1] == 1 else [f"x{i + 1}" for i in range(arr.shape[1])]
    lines = [",".join(header)]
    lines.extend(",".join(repr(float(v)) for v in row) for row in arr)
    return "\n".join(lines) + "\n"


def dump_result(result: EstimationResult, path=None) -> str:
    text = json.dumps(result.to_dict(), indent=2, sort_keys=True) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


def load_result(path) -> EstimationResult:
    return EstimationResult.from_dict(json.loads(Path(path).read_text()))
