"""Two different ``(alpha, f0)`` pairs giving the same mixture density.

Without restrictions on f0, ``a f1 + (1-a) h0`` equals ``b f1 + (1-b) g0`` for
``g0 = w f1 + (1-w) h0`` with ``w = (a-b)/(1-b)``, so ``alpha`` cannot be
recovered.  The certificate checks that equality pointwise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import distributions as dist
from ..errors import PreconditionError
from ..rng import make_rng

CERTIFICATE_TOL = 1e-12
GRID_POINTS = 1001
_GRID_SEED = 1001


@dataclass(frozen=True, eq=False)
class ConfusionCertificate:
    a: float
    b: float
    weight: float
    grid: np.ndarray
    lhs: np.ndarray
    rhs: np.ndarray
    tol: float

    @property
    def max_abs_diff(self) -> float:
        return float(np.max(np.abs(self.lhs - self.rhs)))

    @property
    def passed(self) -> bool:
        return self.max_abs_diff <= self.tol


def default_grid(f1, h0, n: int = GRID_POINTS) -> np.ndarray:
    """Points covering both components: ``n`` evenly spaced (SN) or seeded uniform in a box."""
    m = np.vstack([np.atleast_1d(dist.mean(f1)), np.atleast_1d(dist.mean(h0))])
    _, om1, _ = dist.location_scale_skew(f1)
    _, om0, _ = dist.location_scale_skew(h0)
    sd = np.sqrt(np.maximum(np.diag(om1), np.diag(om0)))
    lo, hi = m.min(axis=0) - 8 * sd, m.max(axis=0) + 8 * sd
    if f1.family == "sn":
        return np.linspace(lo[0], hi[0], n)
    return lo + (hi - lo) * make_rng(_GRID_SEED).random((n, f1.dim))


def construct_confusable_mixture(f1, h0, a: float, b: float, grid=None, tol: float = CERTIFICATE_TOL):
    """Return ``(g0, certificate)`` with ``g0`` the mixture density replacing ``h0``."""
    a, b = float(a), float(b)
    if not 0.0 < b < a < 1.0:
        raise PreconditionError("need 0 < b < a < 1")
    dist.same_family(f1, h0)
    w = (a - b) / (1.0 - b)
    g0 = dist.MixtureModel(w, f1, h0)
    x = default_grid(f1, h0) if grid is None else np.asarray(grid, dtype=float)
    p1 = np.asarray(dist.pdf(f1, x))
    ph = np.asarray(dist.pdf(h0, x))
    lhs = a * p1 + (1.0 - a) * ph
    rhs = b * p1 + (1.0 - b) * np.asarray(dist.mixture_pdf(g0, x))
    return g0, ConfusionCertificate(a, b, w, x, lhs, rhs, tol)
