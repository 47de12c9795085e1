"""JSON parameter and mixture files.

``{"family": "sn"|"msn"|"cfusn", "mu": ..., "omega": ..., "lambda": ...}``
where SN ``omega`` is the scale and MSN/CFUSN ``omega`` is the matrix Omega.
A mixture file adds top-level ``alpha`` plus ``known`` and ``unknown`` objects.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ..errors import ParamFileError, PreconditionError
from .mixture import MixtureModel
from .params import FAMILIES, CfusnParams, FamilyParams, MsnParams, SnParams


def _number(d, key, prefix):
    field = f"{prefix}{key}"
    if key not in d:
        raise ParamFileError(field, "missing")
    val = d[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ParamFileError(field, "expected a number")
    return float(val)


def _array(d, key, prefix, ndim):
    field = f"{prefix}{key}"
    if key not in d:
        raise ParamFileError(field, "missing")
    try:
        arr = np.asarray(d[key], dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParamFileError(field, "expected numeric " + ("vector" if ndim == 1 else "matrix")) from exc
    if arr.ndim == 0 and ndim == 1:
        arr = arr.reshape(1)
    if arr.ndim == 0 and ndim == 2:
        arr = arr.reshape(1, 1)
    if arr.ndim != ndim:
        raise ParamFileError(field, f"expected {ndim}-dimensional array, got {arr.ndim}")
    return arr


def params_from_dict(d: dict, prefix: str = "") -> FamilyParams:
    if not isinstance(d, dict):
        raise ParamFileError(prefix.rstrip(".") or "<root>", "expected an object")
    fam = d.get("family")
    if fam not in FAMILIES:
        raise ParamFileError(f"{prefix}family", f"must be one of {', '.join(FAMILIES)}")
    try:
        if fam == "sn":
            return SnParams(_number(d, "mu", prefix), _number(d, "omega", prefix), _number(d, "lambda", prefix))
        mu = _array(d, "mu", prefix, 1)
        omega = _array(d, "omega", prefix, 2)
        if fam == "msn":
            return MsnParams(mu, omega, _array(d, "lambda", prefix, 1))
        return CfusnParams(mu, omega, _array(d, "lambda", prefix, 2))
    except ParamFileError:
        raise
    except PreconditionError as exc:
        raise ParamFileError(_guess_field(str(exc), prefix), str(exc)) from exc


def _guess_field(msg: str, prefix: str) -> str:
    low = msg.lower()
    for key in ("lambda", "omega", "mu"):
        if key in low:
            return prefix + key
    if "gamma" in low:
        return prefix + "lambda"
    return prefix + "params"


def params_to_dict(p: FamilyParams) -> dict:
    if isinstance(p, SnParams):
        return {"family": "sn", "mu": p.mu, "omega": p.omega, "lambda": p.lam}
    if isinstance(p, MsnParams):
        return {"family": "msn", "mu": p.mu.tolist(), "omega": p.omega_mat.tolist(), "lambda": p.lambda_vec.tolist()}
    return {"family": "cfusn", "mu": p.mu.tolist(), "omega": p.omega_mat.tolist(), "lambda": p.lambda_mat.tolist()}


def mixture_from_dict(d: dict) -> MixtureModel:
    if not isinstance(d, dict):
        raise ParamFileError("<root>", "expected an object")
    alpha = _number(d, "alpha", "")
    for key in ("known", "unknown"):
        if key not in d:
            raise ParamFileError(key, "missing")
    known = params_from_dict(d["known"], "known.")
    unknown = params_from_dict(d["unknown"], "unknown.")
    try:
        return MixtureModel(alpha, known, unknown)
    except PreconditionError as exc:
        field = "alpha" if "alpha" in str(exc) else "unknown.family"
        raise ParamFileError(field, str(exc)) from exc


def mixture_to_dict(m: MixtureModel) -> dict:
    return {"alpha": m.alpha, "known": params_to_dict(m.known), "unknown": params_to_dict(m.unknown)}


def _read_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParamFileError(str(path), f"invalid JSON ({exc.msg} at line {exc.lineno})") from exc


def dump_json(obj, path=None) -> str:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


def load_params(path) -> FamilyParams:
    return params_from_dict(_read_json(path))


def dump_params(p: FamilyParams, path=None) -> str:
    return dump_json(params_to_dict(p), path)


def load_mixture(path) -> MixtureModel:
    return mixture_from_dict(_read_json(path))


def dump_mixture(m: MixtureModel, path=None) -> str:
    return dump_json(mixture_to_dict(m), path)
