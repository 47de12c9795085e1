"""Canonical and alternate parameters of the SN, MSN and CFUSN families.

Alternate parameters (per family)::

    SN     delta = lam / sqrt(1 + lam^2),   Delta = omega * delta,
           Gamma = omega^2 (1 - delta^2)
    MSN    delta = Lam / sqrt(1 + Lam'Lam), Delta = Omega^{1/2} delta,
           Gamma = Omega - Delta Delta'
    CFUSN  Gamma = Omega - Lam Lam',        Delta = I - Lam' Omega^{-1} Lam

``Gamma`` mixes scale and skewness and is the quantity the identifiability
conditions are stated in.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from ..errors import PreconditionError
from ..numerics import (
    DEFAULT_PSD_TOL,
    as_sym_matrix,
    psd_classify,
    require_positive_definite,
    sym_matrix_inv_sqrt,
    sym_matrix_sqrt,
)

FAMILIES = ("sn", "msn", "cfusn")


def _finite(value, name):
    arr = np.asarray(value, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise PreconditionError(f"{name} must be finite")
    return arr


@dataclass(frozen=True, eq=False)
class SnParams:
    """Univariate skew normal: location ``mu``, scale ``omega`` > 0, shape ``lam``."""

    mu: float
    omega: float
    lam: float

    family = "sn"

    def __post_init__(self):
        for name in ("mu", "omega", "lam"):
            object.__setattr__(self, name, float(_finite(getattr(self, name), name)))
        if self.omega <= 0:
            raise PreconditionError("omega must be positive")

    @property
    def dim(self) -> int:
        return 1

    def __repr__(self):
        return f"SnParams(mu={self.mu!r}, omega={self.omega!r}, lam={self.lam!r})"


@dataclass(frozen=True, eq=False)
class MsnParams:
    """Azzalini-type multivariate skew normal with shape vector ``lambda_vec``."""

    mu: np.ndarray
    omega_mat: np.ndarray
    lambda_vec: np.ndarray

    family = "msn"

    def __post_init__(self):
        mu = np.atleast_1d(_finite(self.mu, "mu")).astype(float)
        lam = np.atleast_1d(_finite(self.lambda_vec, "lambda")).astype(float)
        omega = require_positive_definite(self.omega_mat, "omega")
        k = omega.shape[0]
        if mu.shape != (k,) or lam.shape != (k,):
            raise PreconditionError(f"mu and lambda must have length {k}")
        for name, val in (("mu", mu), ("omega_mat", omega), ("lambda_vec", lam)):
            val.setflags(write=False)
            object.__setattr__(self, name, val)

    @property
    def dim(self) -> int:
        return self.mu.shape[0]


@dataclass(frozen=True, eq=False)
class CfusnParams:
    """Canonical fundamental skew normal with square skewness matrix ``lambda_mat``."""

    mu: np.ndarray
    omega_mat: np.ndarray
    lambda_mat: np.ndarray
    psd_tol: float = DEFAULT_PSD_TOL

    family = "cfusn"

    def __post_init__(self):
        mu = np.atleast_1d(_finite(self.mu, "mu")).astype(float)
        omega = require_positive_definite(self.omega_mat, "omega")
        lam = np.atleast_2d(_finite(self.lambda_mat, "lambda")).astype(float)
        k = omega.shape[0]
        if mu.shape != (k,) or lam.shape != (k, k):
            raise PreconditionError(f"mu must have length {k} and lambda shape ({k}, {k})")
        gamma = omega - lam @ lam.T
        if not psd_classify(gamma, self.psd_tol).is_psd:
            raise PreconditionError("Gamma = Omega - Lambda Lambda' must be positive semidefinite")
        for name, val in (("mu", mu), ("omega_mat", omega), ("lambda_mat", lam)):
            val.setflags(write=False)
            object.__setattr__(self, name, val)

    @property
    def dim(self) -> int:
        return self.mu.shape[0]


FamilyParams = Union[SnParams, MsnParams, CfusnParams]


@dataclass(frozen=True, eq=False)
class AlternateParams:
    """Alternate parametrisation.

    ``delta`` is Delta (scalar, vector or matrix), ``gamma`` is Gamma,
    ``delta_small`` is delta (absent for CFUSN).  CFUSN keeps its skewness
    matrix in ``shape`` because Gamma and Delta determine it only up to an
    orthogonal rotation.
    """

    family: str
    delta: float | np.ndarray
    gamma: float | np.ndarray
    delta_small: float | np.ndarray | None = None
    shape: np.ndarray | None = None


def to_alternate(params: FamilyParams) -> AlternateParams:
    if isinstance(params, SnParams):
        d = params.lam / math.sqrt(1.0 + params.lam ** 2)
        return AlternateParams(
            "sn",
            delta=params.omega * d,
            gamma=params.omega ** 2 / (1.0 + params.lam ** 2),
            delta_small=d,
        )
    if isinstance(params, MsnParams):
        lam = params.lambda_vec
        d = lam / math.sqrt(1.0 + lam @ lam)
        big_delta = sym_matrix_sqrt(params.omega_mat) @ d
        gamma = params.omega_mat - np.outer(big_delta, big_delta)
        return AlternateParams("msn", delta=big_delta, gamma=0.5 * (gamma + gamma.T), delta_small=d)
    if isinstance(params, CfusnParams):
        lam = params.lambda_mat
        gamma = params.omega_mat - lam @ lam.T
        big_delta = np.eye(params.dim) - lam.T @ np.linalg.solve(params.omega_mat, lam)
        return AlternateParams(
            "cfusn",
            delta=0.5 * (big_delta + big_delta.T),
            gamma=0.5 * (gamma + gamma.T),
            shape=lam.copy(),
        )
    raise PreconditionError(f"unknown parameter type {type(params).__name__}")


def from_alternate(alt: AlternateParams, family: str | None = None, mu=0.0) -> FamilyParams:
    """Inverse of :func:`to_alternate` given the location ``mu``."""
    family = family or alt.family
    if family != alt.family:
        raise PreconditionError(f"alternate parameters are {alt.family!r}, not {family!r}")
    if family == "sn":
        gamma = float(alt.gamma)
        delta = float(alt.delta)
        if not gamma > 0:
            raise PreconditionError("SN Gamma must be positive")
        # sign(Delta) is taken as 0 at Delta == 0, giving lam = 0
        lam = math.copysign(math.sqrt(delta * delta / gamma), delta) if delta != 0.0 else 0.0
        return SnParams(float(mu), math.sqrt(gamma + delta * delta), lam)
    if family == "msn":
        gamma = as_sym_matrix(alt.gamma, "gamma")
        big_delta = np.atleast_1d(np.asarray(alt.delta, dtype=float))
        if not psd_classify(gamma).is_psd:
            raise PreconditionError("MSN Gamma must be positive semidefinite")
        omega = gamma + np.outer(big_delta, big_delta)
        inv_root = sym_matrix_inv_sqrt(omega)
        small = inv_root @ big_delta
        denom = 1.0 - small @ small
        if not denom > 0:
            raise PreconditionError("MSN alternate parameters need Delta' Omega^{-1} Delta < 1")
        lam = small / math.sqrt(denom)
        return MsnParams(np.broadcast_to(np.asarray(mu, float), big_delta.shape), omega, lam)
    if family == "cfusn":
        if alt.shape is None:
            raise PreconditionError("CFUSN alternate parameters must carry the skewness matrix")
        gamma = as_sym_matrix(alt.gamma, "gamma")
        if not psd_classify(gamma).is_psd:
            raise PreconditionError("CFUSN Gamma must be positive semidefinite")
        lam = np.asarray(alt.shape, dtype=float)
        omega = gamma + lam @ lam.T
        return CfusnParams(np.broadcast_to(np.asarray(mu, float), (gamma.shape[0],)), omega, lam)
    raise PreconditionError(f"unknown family {family!r}")


def gamma_matrix(params: FamilyParams) -> np.ndarray:
    """Gamma as a (K, K) array (1x1 for SN)."""
    return np.atleast_2d(np.asarray(to_alternate(params).gamma, dtype=float))


def location_scale_skew(params: FamilyParams) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(mu, Omega, S)`` such that ``X = mu + S H + N(0, Omega - S S')``.

    ``H`` has independent standard half-normal entries; ``S`` is (K, m) with
    m = 1 for SN/MSN (the Delta vector) and m = K for CFUSN (Lambda).
    """
    if isinstance(params, SnParams):
        alt = to_alternate(params)
        return (np.array([params.mu]), np.array([[params.omega ** 2]]), np.array([[alt.delta]]))
    if isinstance(params, MsnParams):
        alt = to_alternate(params)
        return params.mu, params.omega_mat, np.asarray(alt.delta)[:, None]
    if isinstance(params, CfusnParams):
        return params.mu, params.omega_mat, params.lambda_mat
    raise PreconditionError(f"unknown parameter type {type(params).__name__}")


def same_family(a: FamilyParams, b: FamilyParams) -> None:
    if a.family != b.family:
        raise PreconditionError(f"family mismatch: {a.family} vs {b.family}")
    if a.dim != b.dim:
        raise PreconditionError(f"dimension mismatch: {a.dim} vs {b.dim}")


def canonical_arrays(params: FamilyParams) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    if isinstance(params, SnParams):
        return np.array([params.mu]), np.array([params.omega]), np.array([params.lam])
    if isinstance(params, MsnParams):
        return params.mu, params.omega_mat, params.lambda_vec
    return params.mu, params.omega_mat, params.lambda_mat


def params_close(a: FamilyParams, b: FamilyParams, tol: float = 1e-10) -> bool:
    """Entrywise equality of canonical parameters within ``tol * max(1, scale)``."""
    if a.family != b.family or a.dim != b.dim:
        return False
    for x, y in zip(canonical_arrays(a), canonical_arrays(b)):
        scale = max(1.0, float(np.max(np.abs(y))))
        if np.max(np.abs(x - y)) > tol * scale:
            return False
    return True
