"""``skewmix`` command-line interface.

Exit status: 0 on success, 2 for invalid input (bad file, field or option),
3 when a numerical routine fails.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__, _accel
from . import distributions as dist
from . import estimation as est
from . import identifiability as ident
from .errors import NumericalError, PreconditionError
from .numerics import DEFAULT_PSD_TOL
from .numerics.mvn import DEFAULT_TOL as MVN_TOL
from .rng import make_rng

EXIT_OK = 0
EXIT_PRECONDITION = 2
EXIT_NUMERIC = 3

COMMANDS = ("sample", "eval", "cf", "check", "verify-limits", "estimate", "confuse")


@dataclass(frozen=True)
class RunConfig:
    command: str
    inputs: dict = field(default_factory=dict)
    output: Optional[str] = None
    seed: Optional[int] = None
    gamma_tol: float = ident.DEFAULT_GAMMA_TOL
    psd_tol: float = DEFAULT_PSD_TOL
    mvn_tol: float = MVN_TOL
    grid: Optional[str] = None
    fmt: str = "csv"
    extra: dict = field(default_factory=dict)


def parse_grid_axis(spec: str) -> np.ndarray:
    """``start:step:stop`` inclusive; a step of 0 yields just ``start``; a bare number is one point."""
    parts = spec.strip().split(":")
    try:
        nums = [float(p) for p in parts]
    except ValueError as exc:
        raise PreconditionError(f"grid: cannot parse {spec!r}") from exc
    if not all(math.isfinite(v) for v in nums):
        raise PreconditionError(f"grid: non-finite value in {spec!r}")
    if len(nums) == 1:
        return np.array(nums)
    if len(nums) != 3:
        raise PreconditionError(f"grid: expected start:step:stop, got {spec!r}")
    start, step, stop = nums
    if step == 0:
        return np.array([start])
    if (stop - start) * step < 0:
        raise PreconditionError(f"grid: step {step:g} does not lead from {start:g} to {stop:g}")
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(n)


def parse_grid(spec: str, dim: int) -> np.ndarray:
    """(n,) for dim 1; otherwise the tensor product of per-axis grids, shape (n, dim).

    Axes are comma separated; a single axis spec is reused for every dimension.
    """
    axes = [parse_grid_axis(a) for a in spec.split(",")]
    if dim == 1:
        if len(axes) != 1:
            raise PreconditionError("grid: one axis expected for a univariate family")
        return axes[0]
    if len(axes) == 1:
        axes = axes * dim
    if len(axes) != dim:
        raise PreconditionError(f"grid: expected 1 or {dim} axes, got {len(axes)}")
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.reshape(-1) for m in mesh], axis=1)


def parse_vector(spec: str, name: str) -> np.ndarray:
    try:
        out = np.array([float(v) for v in spec.split(",")])
    except ValueError as exc:
        raise PreconditionError(f"{name}: cannot parse {spec!r}") from exc
    if not np.all(np.isfinite(out)):
        raise PreconditionError(f"{name}: non-finite entry")
    return out


def _fmt(v) -> str:
    return repr(float(v))


def _table_text(columns: Sequence[str], rows, fmt: str) -> str:
    if fmt == "json":
        records = [dict(zip(columns, (float(v) for v in r))) for r in rows]
        return json.dumps(records, indent=2, sort_keys=True) + "\n"
    lines = [",".join(columns)]
    lines.extend(",".join(_fmt(v) for v in r) for r in rows)
    return "\n".join(lines) + "\n"


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(text: str, output: Optional[str]) -> None:
    if output is None or output == "-":
        sys.stdout.write(text)
    else:
        Path(output).write_text(text)


def _coord_names(prefix: str, dim: int) -> list[str]:
    return [prefix] if dim == 1 else [f"{prefix}{i + 1}" for i in range(dim)]


def _as_rows(points, dim: int) -> np.ndarray:
    arr = np.asarray(points, dtype=float)
    return arr.reshape(-1, 1) if dim == 1 else arr.reshape(-1, dim)


def _require(path: Optional[str], name: str) -> str:
    if path is None:
        raise PreconditionError(f"--{name} is required")
    if not Path(path).is_file():
        raise PreconditionError(f"--{name}: file not found: {path}")
    return path


def _load_params(path, name):
    return dist.load_params(_require(path, name))


# commands -----------------------------------------------------------------

def cmd_sample(cfg: RunConfig) -> str:
    if cfg.seed is None:
        raise PreconditionError("--seed is required for sample")
    n = cfg.extra["n"]
    if n is None or n < 1:
        raise PreconditionError("--n must be a positive integer")
    rng = make_rng(cfg.seed, cfg.extra.get("stream", 0))
    if cfg.inputs.get("mixture"):
        model = dist.load_mixture(_require(cfg.inputs["mixture"], "mixture"))
        x, labels = dist.mixture_sample(model, rng, n, return_labels=True)
        rows = np.column_stack([_as_rows(x, model.dim), labels])
        return _table_text(_coord_names("x", model.dim) + ["label"], rows, cfg.fmt)
    params = _load_params(cfg.inputs.get("params"), "params")
    x = dist.sample(params, rng, n)
    return _table_text(_coord_names("x", params.dim), _as_rows(x, params.dim), cfg.fmt)


def _eval_points(cfg: RunConfig, dim: int) -> np.ndarray:
    if cfg.inputs.get("points"):
        pts = est.load_sample(_require(cfg.inputs["points"], "points"))
        return _as_rows(pts, dim)
    if cfg.grid is None:
        raise PreconditionError("one of --grid or --points is required")
    return _as_rows(parse_grid(cfg.grid, dim), dim)


def cmd_eval(cfg: RunConfig) -> str:
    if cfg.inputs.get("mixture"):
        model = dist.load_mixture(_require(cfg.inputs["mixture"], "mixture"))
        dim, target = model.dim, model
        logpdf = lambda x: dist.mixture_log_pdf(model, x, mvn_tol=cfg.mvn_tol)  # noqa: E731
    else:
        target = _load_params(cfg.inputs.get("params"), "params")
        dim = target.dim
        logpdf = lambda x: dist.log_pdf(target, x, mvn_tol=cfg.mvn_tol)  # noqa: E731
    rows = _eval_points(cfg, dim)
    pts = rows[:, 0] if target.family == "sn" else rows
    lp = np.atleast_1d(logpdf(pts))
    data = np.column_stack([rows, np.exp(lp), lp])
    return _table_text(_coord_names("x", dim) + ["pdf", "log_pdf"], data, cfg.fmt)


def cmd_cf(cfg: RunConfig) -> str:
    params = _load_params(cfg.inputs.get("params"), "params")
    if cfg.grid is None:
        raise PreconditionError("--t-grid is required")
    rows = _as_rows(parse_grid(cfg.grid, params.dim), params.dim)
    pts = rows[:, 0] if params.family == "sn" else rows
    lc = np.atleast_1d(dist.log_cf(params, pts))
    val = np.exp(lc)
    data = np.column_stack([rows, val.real, val.imag, lc.real, lc.imag])
    cols = _coord_names("t", params.dim) + ["real", "imag", "log_abs", "phase"]
    return _table_text(cols, data, cfg.fmt)


def cmd_check(cfg: RunConfig) -> str:
    f0 = _load_params(cfg.inputs.get("f0"), "f0")
    f1 = _load_params(cfg.inputs.get("f1"), "f1")
    other = _load_params(cfg.inputs["other"], "other") if cfg.inputs.get("other") else None
    report = ident.check_identifiable(f0, f1, cfg.gamma_tol, other=other, psd_tol=cfg.psd_tol)
    return ident.dump_report(report)


def cmd_verify(cfg: RunConfig) -> str:
    f0 = _load_params(cfg.inputs.get("f0"), "f0")
    f1 = _load_params(cfg.inputs.get("f1"), "f1")
    transform = cfg.extra.get("transform")
    t = cfg.extra.get("t")
    if t is not None and transform is None:
        transform = "CF"
    if t is None:
        report = ident.check_identifiable(f0, f1, cfg.gamma_tol, psd_tol=cfg.psd_tol)
        if report.witness is None:
            raise PreconditionError(f"t: no prescribed direction ({report.verdict.value}); pass --t and --transform")
        t = report.witness if t is None else t
        transform = transform or report.transform.value
    c_grid = None if cfg.grid is None else parse_grid_axis(cfg.grid)
    res = ident.verify_ratio_limit(f0, f1, t, transform, c_grid)
    trace_text = ident.trace_to_csv(res.trace)
    summary = {
        "transform": res.trace.transform.value,
        "direction": res.trace.direction.tolist(),
        "verdict": res.verdict.value,
        "predicted": res.predicted.value,
        "agrees": res.agrees,
        "log_log_slope": None if math.isnan(res.log_log_slope) else res.log_log_slope,
        "final_log_abs_ratio": float(res.trace.log_abs_ratio[-1]),
    }
    if res.xi is not None:
        summary["xi"] = [res.xi.real, res.xi.imag]
        summary["normalized_final"] = [float(res.normalized[-1].real), float(res.normalized[-1].imag)]
    summary_text = _json_text(summary)
    if cfg.extra.get("summary"):
        Path(cfg.extra["summary"]).write_text(summary_text)
    else:
        sys.stderr.write(summary_text)
    return trace_text


def cmd_estimate(cfg: RunConfig) -> str:
    x = est.load_sample(_require(cfg.inputs.get("sample"), "sample"))
    f1 = _load_params(cfg.inputs.get("f1"), "f1")
    if cfg.inputs.get("f0"):
        f0 = _load_params(cfg.inputs["f0"], "f0")
        result = est.estimate_alpha_known_both(x, f1, f0)
    else:
        init = _load_params(cfg.inputs["init"], "init") if cfg.inputs.get("init") else None
        opts = est.EmOptions(max_iter=cfg.extra.get("max_iter") or 500, tol=cfg.extra.get("em_tol") or 1e-8)
        result = est.estimate_alpha_unknown_f0(x, f1, cfg.extra.get("family") or "sn", init, opts)
    return est.dump_result(result)


def cmd_confuse(cfg: RunConfig) -> str:
    f1 = _load_params(cfg.inputs.get("f1"), "f1")
    h0 = _load_params(cfg.inputs.get("h0"), "h0")
    a, b = cfg.extra.get("a"), cfg.extra.get("b")
    if a is None or b is None:
        raise PreconditionError("--a and --b are required")
    grid = None if cfg.grid is None else parse_grid(cfg.grid, f1.dim)
    g0, cert = ident.construct_confusable_mixture(f1, h0, a, b, grid)
    return _json_text({
        "a": cert.a,
        "b": cert.b,
        "g0": dist.mixture_to_dict(g0),
        "grid_points": int(len(cert.grid)),
        "max_abs_diff": cert.max_abs_diff,
        "passed": cert.passed,
        "tol": cert.tol,
    })


HANDLERS = {
    "sample": cmd_sample,
    "eval": cmd_eval,
    "cf": cmd_cf,
    "check": cmd_check,
    "verify-limits": cmd_verify,
    "estimate": cmd_estimate,
    "confuse": cmd_confuse,
}


def run(cfg: RunConfig) -> int:
    """Execute ``cfg``; errors map to exit codes and a one-line message on stderr."""
    try:
        text = HANDLERS[cfg.command](cfg)
        _emit(text, cfg.output)
        return EXIT_OK
    except PreconditionError as exc:
        print(f"skewmix {cfg.command}: error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (NumericalError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"skewmix {cfg.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


# argument parsing -----------------------------------------------------------

def _add_tolerances(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("tolerances")
    g.add_argument("--gamma-tol", type=float, default=ident.DEFAULT_GAMMA_TOL,
                   help="Gamma equality band, scaled by max(1, |Gamma1|) (default %(default)g)")
    g.add_argument("--psd-tol", type=float, default=DEFAULT_PSD_TOL,
                   help="relative eigenvalue zero band for PSD classification (default %(default)g)")
    g.add_argument("--mvn-tol", type=float, default=MVN_TOL,
                   help="absolute accuracy of multivariate normal cdf calls (default %(default)g)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="skewmix", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(name, help_text, fmt=False):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--out", help="output path (default: stdout)")
        if fmt:
            p.add_argument("--format", choices=("csv", "json"), default="csv")
        _add_tolerances(p)
        return p

    p = common("sample", "draw a seeded sample as CSV", fmt=True)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--params", help="parameter JSON file")
    src.add_argument("--mixture", help="mixture JSON file (adds a label column, 1 = known)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--stream", type=int, default=0, help="independent stream index for the same seed")

    p = common("eval", "evaluate the pdf on a grid or point list", fmt=True)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--params")
    src.add_argument("--mixture")
    pts = p.add_mutually_exclusive_group(required=True)
    pts.add_argument("--grid", help="start:step:stop per axis, comma separated")
    pts.add_argument("--points", help="CSV of points, one per row")

    p = common("cf", "characteristic function over a t-grid", fmt=True)
    p.add_argument("--params", required=True)
    p.add_argument("--t-grid", required=True, help="start:step:stop per axis, comma separated")

    p = common("check", "identifiability report as JSON")
    p.add_argument("--f0", required=True, help="unknown component parameters")
    p.add_argument("--f1", required=True, help="known component parameters")
    p.add_argument("--other", help="second unknown-component candidate used to pick the witness")

    p = common("verify-limits", "trace the cf/mgf ratio along c*t")
    p.add_argument("--f0", required=True)
    p.add_argument("--f1", required=True)
    p.add_argument("--t", help="direction, comma separated (default: the witness from check)")
    p.add_argument("--transform", choices=("CF", "MGF"), help="default: CF with --t, else the transform from check")
    p.add_argument("--c-grid", help="start:step:stop (default: 60 geometric points on [1, 1000])")
    p.add_argument("--summary", help="write the verdict JSON here (default: stderr)")

    p = common("estimate", "estimate the mixing proportion")
    p.add_argument("--sample", required=True, help="CSV sample")
    p.add_argument("--f1", required=True, help="known component")
    p.add_argument("--f0", help="unknown component if known (alpha-only fit)")
    p.add_argument("--family", default="sn", choices=dist.FAMILIES)
    p.add_argument("--init", help="EM starting point for f0")
    p.add_argument("--max-iter", type=int, default=500)
    p.add_argument("--em-tol", type=float, default=1e-8)

    p = common("confuse", "certificate that two (alpha, f0) pairs give one mixture")
    p.add_argument("--f1", required=True)
    p.add_argument("--h0", required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--grid", help="evaluation grid (default: 1001 points)")
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    inputs = {k: getattr(ns, k, None) for k in ("params", "mixture", "points", "f0", "f1", "other", "sample", "init", "h0")}
    grid = getattr(ns, "grid", None) or getattr(ns, "t_grid", None) or getattr(ns, "c_grid", None)
    extra = {
        "n": getattr(ns, "n", None),
        "stream": getattr(ns, "stream", 0),
        "transform": getattr(ns, "transform", None),
        "t": parse_vector(ns.t, "t") if getattr(ns, "t", None) else None,
        "summary": getattr(ns, "summary", None),
        "family": getattr(ns, "family", None),
        "max_iter": getattr(ns, "max_iter", None),
        "em_tol": getattr(ns, "em_tol", None),
        "a": getattr(ns, "a", None),
        "b": getattr(ns, "b", None),
    }
    return RunConfig(
        command=ns.command,
        inputs={k: v for k, v in inputs.items() if v is not None},
        output=ns.out,
        seed=getattr(ns, "seed", None),
        gamma_tol=ns.gamma_tol,
        psd_tol=ns.psd_tol,
        mvn_tol=ns.mvn_tol,
        grid=grid,
        fmt=getattr(ns, "format", "csv"),
        extra=extra,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    _accel.apply_thread_cap()
    try:
        cfg = config_from_args(ns)
    except PreconditionError as exc:
        print(f"skewmix {ns.command}: error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    return run(cfg)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
