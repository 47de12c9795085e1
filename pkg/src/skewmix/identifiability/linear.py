"""Witness vectors, direction partitions, and the Xi / V functions for CFUSN."""

from __future__ import annotations

import math

import numpy as np

from ..distributions import CfusnParams, gamma_matrix
from ..errors import PreconditionError, WitnessSearchError
from ..numerics import SQRT_2_OVER_PI, as_sym_matrix, sym_eig
from .types import DirectionCell, DirectionPartition, LogComplex

NZ_TOL = 1e-12
ANGLE_TOL = 1e-9


def nz_index(x, tol: float = NZ_TOL) -> np.ndarray:
    """Indices whose entries exceed ``tol`` in magnitude."""
    return np.flatnonzero(np.abs(np.asarray(x, dtype=float)) > tol)


def find_witness_vector(a, b, tol: float = 1e-9, max_halvings: int = 60) -> np.ndarray:
    """Return ``t`` with ``t'At > tol`` and ``|t'Bt| > tol``.

    ``l`` is the top eigenvector of ``A``; if ``l'Bl`` vanishes, ``t = l + eps l1``
    with ``l1`` the dominant eigenvector of ``B`` and ``eps`` halved from 1
    until both forms pass (skipping the root ``eps = -2 l1'Bl / l1'Bl1``).
    """
    a = as_sym_matrix(a, "a")
    b = as_sym_matrix(b, "b")
    if a.shape != b.shape:
        raise PreconditionError("a and b must have the same shape")
    wa, va = sym_eig(a)
    if not np.any(np.abs(b) > tol):
        raise WitnessSearchError("b is zero within tolerance")
    if wa[-1] <= tol:
        raise WitnessSearchError("a has no direction with a positive quadratic form (a is zero or negative semidefinite)")
    l = va[:, int(np.argmax(wa))]
    lbl = l @ b @ l
    if abs(lbl) > tol:
        return l
    wb, vb = sym_eig(b)
    l1 = vb[:, int(np.argmax(np.abs(wb)))]
    b11 = l1 @ b @ l1
    cross = l1 @ b @ l
    root = -2.0 * cross / b11
    eps = 1.0
    for _ in range(max_halvings):
        if abs(eps - root) > 1e-3 * eps:
            t = l + eps * l1
            if t @ a @ t > tol and abs(t @ b @ t) > tol:
                return t
        eps *= 0.5
    raise WitnessSearchError("no perturbation eps produced both quadratic-form conditions")


def direction_partition(vectors, angle_tol: float = ANGLE_TOL, zero_tol: float = NZ_TOL) -> DirectionPartition:
    """Group columns (of a matrix, or a list of vectors) by direction up to sign.

    ``P_C`` is the first member normalised; zero vectors share one cell with a
    zero direction.
    """
    if isinstance(vectors, np.ndarray) and vectors.ndim == 2:
        cols = vectors.T
    else:
        cols = [np.asarray(v, dtype=float) for v in vectors]
        if len({c.shape for c in cols}) > 1:
            raise PreconditionError("all vectors must have the same dimension")
    cols = np.asarray(cols, dtype=float)
    dirs: list[np.ndarray] = []
    members: list[list[int]] = []
    zero: list[int] = []
    for i, v in enumerate(cols):
        norm = np.linalg.norm(v)
        if norm <= zero_tol:
            zero.append(i)
            continue
        u = v / norm
        for d, m in zip(dirs, members):
            # sine of the angle between the lines spanned by u and d
            if np.linalg.norm(u - (u @ d) * d) <= angle_tol:
                m.append(i)
                break
        else:
            dirs.append(u)
            members.append([i])
    cells = [DirectionCell(d, tuple(m)) for d, m in zip(dirs, members)]
    if zero:
        cells.append(DirectionCell(np.zeros(cols.shape[1]), tuple(zero)))
    return DirectionPartition(tuple(cells), cols.T.copy())


def xi_value(u, v, t, tol: float = NZ_TOL) -> complex:
    """``(i sqrt(2/pi))^(|nz(U't)| - |nz(V't)|) * prod_{nz} V_i't / prod_{nz} U_i't``."""
    ut = np.asarray(u, dtype=float).T @ np.asarray(t, dtype=float)
    vt = np.asarray(v, dtype=float).T @ np.asarray(t, dtype=float)
    nu, nv = nz_index(ut, tol), nz_index(vt, tol)
    return (1j * SQRT_2_OVER_PI) ** (len(nu) - len(nv)) * np.prod(vt[nv]) / np.prod(ut[nu])


def xi_from_partition(u, v, t, tol: float = NZ_TOL, angle_tol: float = ANGLE_TOL) -> complex:
    """Xi recomputed cell by cell over the joint direction partition of ``U`` and ``V``.

    Each column is written as ``s * |w| * P_C``; a cell with ``P_C't != 0``
    contributes ``(i sqrt(2/pi) / P_C't)^(n_U - n_V) * prod s|v| / prod s|u|``.
    With equal per-cell counts this is the signed ratio of column norms.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    t = np.asarray(t, dtype=float)
    k = u.shape[1]
    part = direction_partition(np.hstack([u, v]), angle_tol=angle_tol)
    out = 1.0 + 0j
    for cell in part.cells:
        if cell.is_zero:
            continue
        pt = cell.direction @ t
        if abs(pt) <= tol:
            continue
        n_u = n_v = 0
        for j in cell.members:
            w = part.vectors[:, j]
            signed = math.copysign(np.linalg.norm(w), w @ cell.direction)
            if j < k:
                n_u += 1
                out /= signed
            else:
                n_v += 1
                out *= signed
        out *= (1j * SQRT_2_OVER_PI / pt) ** (n_u - n_v)
    return complex(out)


def v_rate(c: float, theta0: CfusnParams, theta1: CfusnParams, t) -> LogComplex:
    """``V(c) = exp(ic(mu0-mu1)'t) exp(-c^2 t'(G0-G1)t / 2) / c^(n0 - n1)`` in log form."""
    if not c > 0:
        raise PreconditionError("c must be positive")
    t = np.asarray(t, dtype=float)
    n0 = len(nz_index(theta0.lambda_mat.T @ t))
    n1 = len(nz_index(theta1.lambda_mat.T @ t))
    q = t @ (gamma_matrix(theta0) - gamma_matrix(theta1)) @ t
    return LogComplex(-0.5 * c * c * q - (n0 - n1) * math.log(c), c * float((theta0.mu - theta1.mu) @ t))
