"""Small dense symmetric matrices: validation, eigen-classification, roots."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from ..errors import PreconditionError

DEFAULT_PSD_TOL = 1e-10
SYMMETRY_RTOL = 1e-12


class PsdLabel(str, enum.Enum):
    POSITIVE_DEFINITE = "PositiveDefinite"
    PSD_SINGULAR = "PositiveSemidefiniteSingular"
    INDEFINITE = "Indefinite"
    NEGATIVE_SEMIDEFINITE = "NegativeSemidefinite"
    NEGATIVE_DEFINITE = "NegativeDefinite"


@dataclass(frozen=True)
class PsdClass:
    label: PsdLabel
    min_eigenvalue: float
    max_eigenvalue: float

    @property
    def is_psd(self) -> bool:
        return self.label in (PsdLabel.POSITIVE_DEFINITE, PsdLabel.PSD_SINGULAR)

    @property
    def is_nsd(self) -> bool:
        return self.label in (PsdLabel.NEGATIVE_DEFINITE, PsdLabel.NEGATIVE_SEMIDEFINITE)

    def to_dict(self) -> dict:
        return {
            "label": self.label.value,
            "min_eigenvalue": self.min_eigenvalue,
            "max_eigenvalue": self.max_eigenvalue,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PsdClass":
        return cls(PsdLabel(d["label"]), float(d["min_eigenvalue"]), float(d["max_eigenvalue"]))


def as_sym_matrix(m, name: str = "matrix") -> np.ndarray:
    """Return ``m`` as a float (K, K) array after checking symmetry.

    Scalars become 1x1.  The result is exactly symmetrised.
    """
    a = np.atleast_2d(np.asarray(m, dtype=float))
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise PreconditionError(f"{name} must be a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise PreconditionError(f"{name} has non-finite entries")
    scale = max(1.0, float(np.max(np.abs(a))))
    if np.max(np.abs(a - a.T)) > SYMMETRY_RTOL * scale:
        raise PreconditionError(f"{name} is not symmetric")
    return 0.5 * (a + a.T)


def sym_eig(m) -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and orthonormal eigenvectors (columns)."""
    return np.linalg.eigh(as_sym_matrix(m))


def _zero_band(w: np.ndarray, tol: float) -> float:
    return tol * max(1.0, float(np.max(np.abs(w))))


def psd_classify(m, tol: float = DEFAULT_PSD_TOL) -> PsdClass:
    """Classify by eigenvalue signs; ``|w| < tol * max(1, |w|_max)`` counts as zero.

    The zero matrix is reported as ``PositiveSemidefiniteSingular``.
    """
    if tol <= 0:
        raise PreconditionError("tol must be positive")
    w, _ = sym_eig(m)
    band = _zero_band(w, tol)
    pos = w > band
    neg = w < -band
    lo, hi = float(w[0]), float(w[-1])
    if np.any(pos) and np.any(neg):
        label = PsdLabel.INDEFINITE
    elif np.all(pos):
        label = PsdLabel.POSITIVE_DEFINITE
    elif np.all(neg):
        label = PsdLabel.NEGATIVE_DEFINITE
    elif np.any(neg):
        label = PsdLabel.NEGATIVE_SEMIDEFINITE
    else:
        label = PsdLabel.PSD_SINGULAR
    return PsdClass(label, lo, hi)


def sym_matrix_sqrt(m, tol: float = DEFAULT_PSD_TOL) -> np.ndarray:
    """Symmetric PSD square root.  Eigenvalues inside the zero band are clipped."""
    w, v = sym_eig(m)
    band = _zero_band(w, tol)
    if w[0] < -band:
        raise PreconditionError(f"matrix is not positive semidefinite (min eigenvalue {w[0]:.3g})")
    root = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.T
    return 0.5 * (root + root.T)


def sym_matrix_inv_sqrt(m) -> np.ndarray:
    """Inverse symmetric square root of a positive definite matrix."""
    w, v = sym_eig(m)
    if w[0] <= _zero_band(w, DEFAULT_PSD_TOL):
        raise PreconditionError("matrix is not positive definite")
    root = (v / np.sqrt(w)) @ v.T
    return 0.5 * (root + root.T)


def null_space(m, tol: float = DEFAULT_PSD_TOL) -> np.ndarray:
    """Orthonormal basis (columns) of ``{v : |m v| <= tol}``; shape (K, 0) if trivial."""
    w, v = sym_eig(m)
    return v[:, np.abs(w) <= tol].copy()


def require_positive_definite(m, name: str) -> np.ndarray:
    a = as_sym_matrix(m, name)
    try:
        np.linalg.cholesky(a)
    except np.linalg.LinAlgError as exc:
        raise PreconditionError(f"{name} must be positive definite") from exc
    return a
