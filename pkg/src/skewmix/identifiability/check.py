"""Sufficient conditions for identifiability of ``alpha`` in ``alpha f1 + (1-alpha) f0``.

SN and MSN need ``Gamma0 != Gamma1``.  CFUSN additionally excludes
``Gamma1 - Gamma0 = k v v'`` with ``k > 0`` and ``v`` a column of ``Lambda0``.
Alongside the verdict the report carries the transform and direction the
corresponding ratio argument uses.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from ..distributions import FamilyParams, gamma_matrix, params_close, same_family, to_alternate
from ..errors import PreconditionError
from ..numerics import DEFAULT_PSD_TOL, psd_classify, sym_eig
from .linear import find_witness_vector
from .types import IdentifiabilityReport, Theorem, Transform, Verdict

DEFAULT_GAMMA_TOL = 1e-9
RANK1_ANGLE_TOL = 1e-6

CLAUSE_EQUAL = "Gamma0 == Gamma1"
CLAUSE_RANK1 = "Gamma1 - Gamma0 = k v v' with k > 0 and v a column of Lambda0"


def _rank1_along_column(diff: np.ndarray, lam0: np.ndarray, band: float) -> Optional[int]:
    """Index of the Lambda0 column matching a positive rank-1 ``diff``, else None."""
    w, vecs = sym_eig(diff)
    big = np.flatnonzero(np.abs(w) > band)
    if len(big) != 1 or w[big[0]] <= 0:
        return None
    v = vecs[:, big[0]]
    for j, col in enumerate(lam0.T):
        norm = np.linalg.norm(col)
        if norm == 0.0:
            continue
        u = col / norm
        if np.linalg.norm(u - (u @ v) * v) <= RANK1_ANGLE_TOL:
            return j
    return None


def _mgf_direction(l: np.ndarray, delta0: np.ndarray) -> np.ndarray:
    return -l if float(delta0 @ l) > 0 else l


def check_identifiable(
    f0: FamilyParams,
    f1: FamilyParams,
    tol: float = DEFAULT_GAMMA_TOL,
    *,
    other: Optional[FamilyParams] = None,
    psd_tol: float = DEFAULT_PSD_TOL,
) -> IdentifiabilityReport:
    """Check the sufficient condition for the pair ``(f0, f1)``.

    ``other`` is an optional second candidate for the unknown component.  When
    given, CF witnesses are chosen so that ``t'(Gamma_other - Gamma1)t != 0`` too.
    """
    if not tol > 0:
        raise PreconditionError("tol must be positive")
    same_family(f0, f1)
    if other is not None:
        same_family(other, f1)
    theorem = Theorem.for_family(f0.family)
    g0, g1 = gamma_matrix(f0), gamma_matrix(f1)
    diff = g0 - g1
    band = tol * max(1.0, float(np.max(np.abs(g1))))
    klass = psd_classify(diff, psd_tol)

    def report(verdict, clause=None, witness=None, transform=None):
        return IdentifiabilityReport(verdict, theorem, klass, band, clause, witness, transform)

    if params_close(f0, f1, tol):
        return report(Verdict.DEGENERATE, "f0 == f1")
    if np.max(np.abs(diff)) <= band:
        return report(Verdict.CONDITION_VIOLATED, CLAUSE_EQUAL)

    second = diff if other is None else gamma_matrix(other) - g1
    if not np.any(np.abs(second) > band):
        second = diff

    if theorem is Theorem.SN:
        if diff[0, 0] > 0:
            return report(Verdict.IDENTIFIABLE, witness=[1.0], transform=Transform.CF)
        delta0 = float(to_alternate(f0).delta)
        return report(Verdict.IDENTIFIABLE, witness=[-1.0 if delta0 > 0 else 1.0], transform=Transform.MGF)

    if theorem is Theorem.MSN:
        if klass.is_psd:
            t = find_witness_vector(diff, second, band)
            return report(Verdict.IDENTIFIABLE, witness=t, transform=Transform.CF)
        w, vecs = sym_eig(-diff)
        l = vecs[:, int(np.argmax(w))]
        t = _mgf_direction(l, np.asarray(to_alternate(f0).delta))
        return report(Verdict.IDENTIFIABLE, witness=t, transform=Transform.MGF)

    col = _rank1_along_column(-diff, f0.lambda_mat, band)
    if col is not None:
        return report(Verdict.CONDITION_VIOLATED, f"{CLAUSE_RANK1} (column {col})")
    if not psd_classify(-diff, psd_tol).is_psd:
        t = find_witness_vector(diff, second, band)
    else:
        t = find_witness_vector(-diff, -second if second is diff else second, band)
    return report(Verdict.IDENTIFIABLE, witness=t, transform=Transform.CF)
