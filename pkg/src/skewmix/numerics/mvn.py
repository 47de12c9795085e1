"""Multivariate normal cdf ``P(X <= upper)`` for ``X ~ N(0, cov)``, K <= 10."""

from __future__ import annotations

import warnings

import numpy as np
from scipy.special import ndtr

from .. import _accel
from ..errors import NumericalWarning, PreconditionError
from . import _mvn_numpy
from .linalg import as_sym_matrix

if _accel.HAVE_NUMBA:
    from . import _mvn_numba
else:  # pragma: no cover
    _mvn_numba = None

MAX_DIM = 10
DEFAULT_TOL = 1e-8
QMC_SEED = 20170530
_N_SHIFTS = 12
_PRIMES = np.array([2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31], dtype=float)
RICHTMYER = np.mod(np.sqrt(_PRIMES), 1.0)


def _backend(use_numba):
    if use_numba is None:
        use_numba = _accel.USE_NUMBA
    if use_numba and _mvn_numba is None:  # pragma: no cover
        raise PreconditionError("numba backend requested but numba is not installed")
    return _mvn_numba if use_numba else _mvn_numpy


def _prepare(upper, cov):
    cov = as_sym_matrix(cov, "cov")
    dim = cov.shape[0]
    if dim > MAX_DIM:
        raise PreconditionError(f"mvn_cdf supports K <= {MAX_DIM}, got {dim}")
    try:
        chol = np.linalg.cholesky(cov)
    except np.linalg.LinAlgError as exc:
        raise PreconditionError("cov must be positive definite") from exc
    up = np.asarray(upper, dtype=float)
    single = up.ndim <= 1
    up = np.atleast_2d(up.reshape(1, -1) if single else up)
    if up.shape[1] != dim:
        raise PreconditionError(f"upper has dimension {up.shape[1]}, cov has {dim}")
    if np.any(np.isnan(up)):
        raise PreconditionError("upper contains NaN")
    return np.ascontiguousarray(up), np.ascontiguousarray(chol), single


def _qmc(b, chol, tol, backend, seed, max_points):
    dim = b.shape[0]
    rng = np.random.default_rng(seed)
    shifts = rng.random((_N_SHIFTS, dim - 1))
    generator = RICHTMYER[: dim - 1].copy()
    n = 1009
    while True:
        est = backend.mvn_cdf_lattice(b, chol, generator, shifts, n)
        err = 3.0 * est.std(ddof=1) / np.sqrt(_N_SHIFTS)
        if err <= tol or n * _N_SHIFTS >= max_points:
            break
        n *= 2
    if err > tol:
        warnings.warn(
            f"mvn_cdf QMC error estimate {err:.2e} exceeds tol {tol:.1e} at {n * _N_SHIFTS} points",
            NumericalWarning,
            stacklevel=3,
        )
    return float(np.clip(est.mean(), 0.0, 1.0))


def mvn_cdf(upper, cov, tol: float = DEFAULT_TOL, *, seed: int = QMC_SEED,
            max_points: int = 4_000_000, use_numba: bool | None = None):
    """Orthant-bounded normal probability.

    ``upper`` is a (K,) limit vector or an (n, K) batch.  K <= 3 is integrated
    adaptively to absolute ``tol``; 4 <= K <= 10 uses a seeded randomly shifted
    lattice and stops when three standard errors fall below ``tol`` (or
    ``max_points`` is reached, with a NumericalWarning).
    """
    if not tol > 0:
        raise PreconditionError("tol must be positive")
    up, chol, single = _prepare(upper, cov)
    dim = chol.shape[0]
    if dim == 1:
        out = ndtr(up[:, 0] / chol[0, 0])
    elif dim <= 3:
        out = _backend(use_numba).mvn_cdf_small_batch(up, chol, tol)
    else:
        backend = _backend(use_numba)
        out = np.array([_qmc(row, chol, tol, backend, seed, max_points) for row in up])
    out = np.clip(out, 0.0, 1.0)
    return float(out[0]) if single else out
