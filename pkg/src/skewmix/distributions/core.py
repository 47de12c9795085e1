"""Density, cdf, transforms and sampling for the three families.

All three share the stochastic form ``X = mu + S H + G`` with ``H`` a vector
of independent half-normals and ``G ~ N(0, Omega - S S')`` (see
:func:`~skewmix.distributions.params.location_scale_skew`).  That gives one
implementation of the characteristic function, the mgf and the sampler::

    log CF(t)  = i t'mu - t'Omega t / 2 + sum_j log(1 + i Im(S_j't))
    log MGF(t) =   t'mu + t'Omega t / 2 + m log 2 + sum_j log Phi(S_j't)
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import ndtr, owens_t

from ..errors import DomainError, PreconditionError
from ..numerics import (
    log_one_plus_i_im,
    log_std_normal_cdf,
    mvn_cdf,
    sym_matrix_inv_sqrt,
    sym_matrix_sqrt,
)
from ..numerics.mvn import DEFAULT_TOL as MVN_TOL
from .params import CfusnParams, FamilyParams, MsnParams, SnParams, location_scale_skew, to_alternate

_LOG2 = math.log(2.0)
_LOG_2PI = math.log(2.0 * math.pi)


def _points(params: FamilyParams, x, name="x"):
    """Coerce to an (n, K) array; also return whether the input was a single point."""
    arr = np.asarray(x, dtype=float)
    k = params.dim
    if isinstance(params, SnParams):
        return arr.reshape(-1, 1), arr.ndim == 0, arr.shape
    if k == 1 and arr.ndim == 0:
        return arr.reshape(1, 1), True, ()
    if k == 1 and arr.ndim == 1 and arr.shape[0] != 1:
        return arr.reshape(-1, 1), False, (arr.shape[0],)
    if arr.ndim == 1:
        if arr.shape[0] != k:
            raise PreconditionError(f"{name} has dimension {arr.shape[0]}, expected {k}")
        return arr.reshape(1, k), True, ()
    if arr.ndim != 2 or arr.shape[1] != k:
        raise PreconditionError(f"{name} must have shape (n, {k}), got {arr.shape}")
    return arr, False, (arr.shape[0],)


def _reshape_out(values, single, shape, params):
    if single:
        return values[0].item()
    if isinstance(params, SnParams):
        return values.reshape(shape)
    return values


def _log_norm_density(diff, omega):
    k = omega.shape[0]
    chol = np.linalg.cholesky(omega)
    z = np.linalg.solve(chol, diff.T).T
    return -0.5 * np.sum(z * z, axis=1) - np.sum(np.log(np.diag(chol))) - 0.5 * k * _LOG_2PI


def _cfusn_skew_term(params: CfusnParams, diff, mvn_tol):
    alt = to_alternate(params)
    arg = diff @ np.linalg.solve(params.omega_mat, params.lambda_mat)
    cov = np.atleast_2d(alt.delta)
    k = params.dim
    if k == 1:
        v = cov[0, 0]
        if v > 1e-14:
            return log_std_normal_cdf(arg[:, 0] / math.sqrt(v))
        # Gamma = 0: the skew factor degenerates to an indicator
        with np.errstate(divide="ignore"):
            return np.where(arg[:, 0] >= 0, 0.0, -np.inf)
    try:
        np.linalg.cholesky(cov)
    except np.linalg.LinAlgError as exc:
        raise PreconditionError("CFUSN density needs Gamma positive definite when K > 1") from exc
    probs = np.atleast_1d(mvn_cdf(arg, cov, tol=mvn_tol))
    with np.errstate(divide="ignore"):
        return np.log(probs)


def log_pdf(params: FamilyParams, x, *, mvn_tol: float = MVN_TOL):
    pts, single, shape = _points(params, x)
    if isinstance(params, SnParams):
        z = (pts[:, 0] - params.mu) / params.omega
        out = _LOG2 - math.log(params.omega) - 0.5 * z * z - 0.5 * _LOG_2PI + log_std_normal_cdf(params.lam * z)
    elif isinstance(params, MsnParams):
        diff = pts - params.mu
        arg = diff @ (sym_matrix_inv_sqrt(params.omega_mat) @ params.lambda_vec)
        out = _LOG2 + _log_norm_density(diff, params.omega_mat) + log_std_normal_cdf(arg)
    elif isinstance(params, CfusnParams):
        diff = pts - params.mu
        out = params.dim * _LOG2 + _log_norm_density(diff, params.omega_mat) + _cfusn_skew_term(params, diff, mvn_tol)
    else:
        raise PreconditionError(f"unknown parameter type {type(params).__name__}")
    return _reshape_out(np.asarray(out, dtype=float), single, shape, params)


def pdf(params: FamilyParams, x, *, mvn_tol: float = MVN_TOL):
    return np.exp(log_pdf(params, x, mvn_tol=mvn_tol))


def cdf(params: SnParams, x):
    """Univariate SN cdf ``Phi(z) - 2 T(z, lam)`` (Owen's T)."""
    if not isinstance(params, SnParams):
        raise PreconditionError("cdf is implemented for the univariate SN family only")
    z = (np.asarray(x, dtype=float) - params.mu) / params.omega
    out = np.clip(ndtr(z) - 2.0 * owens_t(z, params.lam), 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


def _quad_terms(params: FamilyParams, t):
    pts, single, shape = _points(params, t, "t")
    if not np.all(np.isfinite(pts)):
        raise DomainError("t must be finite")
    mu, omega, skew = location_scale_skew(params)
    lin = pts @ mu
    quad = np.einsum("ni,ij,nj->n", pts, omega, pts)
    proj = pts @ skew
    return lin, quad, proj, single, shape


def log_cf(params: FamilyParams, t):
    """Complex log of the characteristic function with an unwrapped phase.

    The real part stays finite where the cf itself underflows; the imaginary
    part adds the phases of the factors without reducing mod 2 pi.
    """
    lin, quad, proj, single, shape = _quad_terms(params, t)
    out = 1j * lin - 0.5 * quad + log_one_plus_i_im(proj).sum(axis=1)
    return _reshape_out(out, single, shape, params)


def log_cf_magnitude(params: FamilyParams, t):
    return np.real(log_cf(params, t))


def cf(params: FamilyParams, t):
    return np.exp(log_cf(params, t))


def log_mgf(params: FamilyParams, t):
    lin, quad, proj, single, shape = _quad_terms(params, t)
    out = lin + 0.5 * quad + proj.shape[1] * _LOG2 + log_std_normal_cdf(proj).sum(axis=1)
    return _reshape_out(out, single, shape, params)


def mgf(params: FamilyParams, t):
    """Moment generating function; raises OverflowError where only log_mgf is representable."""
    val = log_mgf(params, t)
    if np.any(np.asarray(val) > 709.0):
        raise OverflowError("mgf overflows double precision; use log_mgf")
    return np.exp(val)


def half_normal(rng: np.random.Generator, shape) -> np.ndarray:
    """Standard normal truncated to [0, inf), drawn by rejection."""
    out = rng.standard_normal(shape)
    bad = out < 0
    while bad.any():
        out[bad] = rng.standard_normal(int(bad.sum()))
        bad = out < 0
    return out


def sample(params: FamilyParams, rng: np.random.Generator, n: int) -> np.ndarray:
    """``n`` draws: shape (n,) for SN, (n, K) otherwise."""
    if int(n) != n or n < 1:
        raise PreconditionError("n must be a positive integer")
    n = int(n)
    mu, omega, skew = location_scale_skew(params)
    gamma = omega - skew @ skew.T
    h = half_normal(rng, (n, skew.shape[1]))
    g = rng.standard_normal((n, mu.shape[0])) @ sym_matrix_sqrt(0.5 * (gamma + gamma.T))
    out = mu + h @ skew.T + g
    return out[:, 0] if isinstance(params, SnParams) else out


def mean(params: FamilyParams) -> np.ndarray | float:
    """E[X] = mu + sqrt(2/pi) S 1."""
    mu, _, skew = location_scale_skew(params)
    m = mu + math.sqrt(2.0 / math.pi) * skew.sum(axis=1)
    return float(m[0]) if isinstance(params, SnParams) else m
