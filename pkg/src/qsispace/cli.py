"""Command-line front end: parse configs, dispatch pipelines, write reports.

Seven subcommands cover the library's pipelines:

``verify-kernel``
    Regularity report for one catalog kernel (positivity floor, amalgam
    sums, off-center ratio).
``riesz``
    Riesz bounds of a node window's exponential system.
``interpolate``
    Interpolate a seeded random space member and report residuals.
``cardinal``
    Tabulate a generator's cardinal interpolator and its Kronecker error.
``recover``
    Screen a generator family and run the recovery error sweep.
``counterexample``
    Non-recovery on the swapped-node window, with the matched control.
``half-shift``
    Condition growth of Gaussian sampling on the half-shifted lattice.

Every run writes ``{command}-{hash}.json`` (and ``.csv`` where the
command has tabular output) into ``--out``, where ``hash`` identifies
the canonical configuration; identical config and seed give
byte-identical files.  Exit codes: 0 success, 1 the run completed but
its verdict failed, 2 usage or domain error, 3 numeric failure.  Every
failure path prints a one-line JSON error object to standard error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from pathlib import Path
from typing import Callable, List, Optional

import numpy as np

from .cardinal import make_cardinal
from .config import COMMANDS, PRESETS, ExperimentConfig, resolve_config
from .errors import (
    AccuracyError,
    ConditioningError,
    DegeneracyError,
    DomainError,
    QsispaceError,
    UsageError,
)
from .fourier import LineGrid
from .interpolation import comparison_csv, interpolate, residual_report
from .kernels import make_kernel, regularity_report
from .nodes import make_nodes, riesz_estimate
from .recovery import (
    FamilySpec,
    counterexample_run,
    half_shift_conditioning,
    run_family_sweep,
    screen_family,
)
from .space import random_function

__all__ = ["main"]

_EXIT_OK = 0
_EXIT_VERDICT = 1
_EXIT_USAGE = 2
_EXIT_NUMERIC = 3


# ---------------------------------------------------------------------------
# Result plumbing
# ---------------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class _CommandResult:
    """What a handler hands back to the writer: payload, table, verdict."""

    payload: dict
    verdict: bool
    lines: List[str]
    csv: Optional[str] = None


def _jsonable(value):
    """Recursively convert a payload to strict JSON (no NaN/Inf literals)."""
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (bool, str)) or value is None:
        return value
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    return str(value)


def _write_outputs(cfg: ExperimentConfig, result: _CommandResult) -> List[Path]:
    out_dir = Path(cfg.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = f"{cfg.command}-{cfg.config_hash()}"
    doc = {
        "command": cfg.command,
        "config": cfg.canonical_dict(),
        "verdict": result.verdict,
    }
    doc.update(result.payload)
    json_path = out_dir / f"{stem}.json"
    json_path.write_text(
        json.dumps(_jsonable(doc), indent=2, sort_keys=True) + "\n",
        encoding="utf-8")
    paths = [json_path]
    if result.csv is not None:
        csv_path = out_dir / f"{stem}.csv"
        csv_path.write_text(result.csv, encoding="utf-8")
        paths.append(csv_path)
    return paths


def _flag(value: bool) -> str:
    return "pass" if value else "FAIL"


# ---------------------------------------------------------------------------
# Command handlers
# ---------------------------------------------------------------------------

def _target_kernel(cfg: ExperimentConfig):
    """The reference-space kernel: ``target`` falling back to ``kernel``."""
    if cfg.target is not None:
        return make_kernel(cfg.target, cfg.target_alpha)
    cfg.require("kernel")
    return make_kernel(cfg.kernel, cfg.alpha)


def _cmd_verify_kernel(cfg: ExperimentConfig) -> _CommandResult:
    cfg.require("kernel")
    kernel = make_kernel(cfg.kernel, cfg.alpha)
    kwargs = {}
    if cfg.cells is not None:
        kwargs["cells"] = cfg.cells
    if cfg.torus_points is not None:
        kwargs["grid_points"] = cfg.torus_points
    report = regularity_report(kernel, **kwargs)
    ok = report.pass_positive and report.pass_summable
    csv_lines = ["cell,sup"]
    csv_lines.extend(f"{k},{report.cell_sups[k]:.17g}"
                     for k in sorted(report.cell_sups))
    lines = [
        f"kernel {kernel.label}: floor delta={report.delta:.6g}, "
        f"off-center ratio={report.offcenter_ratio:.6g}, "
        f"tail bound={report.tail_bound:.3g}",
        f"positive spectrum: {_flag(report.pass_positive)}; "
        f"summable cells: {_flag(report.pass_summable)}",
    ]
    return _CommandResult(payload={"report": report.to_dict(), "pass": ok},
                          verdict=ok, lines=lines,
                          csv="\n".join(csv_lines) + "\n")


def _cmd_riesz(cfg: ExperimentConfig) -> _CommandResult:
    cfg.require("nodes")
    nodes = make_nodes(cfg.nodes, cfg.J if cfg.J is not None else 24)
    estimate = riesz_estimate(nodes)
    ok = estimate.kadec_pass and math.isfinite(estimate.constant)
    csv = ("lambda_min,lambda_max,constant,raw_constant,kadec_deviation\n"
           f"{estimate.lambda_min:.17g},{estimate.lambda_max:.17g},"
           f"{estimate.constant:.17g},{estimate.raw_constant:.17g},"
           f"{estimate.kadec_deviation:.17g}\n")
    lines = [
        f"window {nodes.name} ({len(nodes)} nodes): "
        f"riesz constant={estimate.constant:.12g}, "
        f"kadec deviation={estimate.kadec_deviation:.6g}",
        f"kadec bound: {_flag(estimate.kadec_pass)}",
    ]
    return _CommandResult(payload={"estimate": estimate.to_dict()},
                          verdict=ok, lines=lines, csv=csv)


def _cmd_interpolate(cfg: ExperimentConfig) -> _CommandResult:
    cfg.require("kernel", "nodes")
    kernel = make_kernel(cfg.kernel, cfg.alpha)
    half_width = cfg.J if cfg.J is not None else 24
    nodes = make_nodes(cfg.nodes, half_width)
    sample_spec = cfg.sample_nodes if cfg.sample_nodes is not None else cfg.nodes
    sample = make_nodes(sample_spec, half_width)
    reference = random_function(_target_kernel(cfg), sample, cfg.seed)
    interpolant = interpolate(reference, kernel, nodes)
    kwargs = {}
    if cfg.central_fraction is not None:
        kwargs["central_fraction"] = cfg.central_fraction
    grid = None
    if cfg.grid_half_width is not None or cfg.grid_spacing is not None:
        grid = LineGrid(cfg.grid_half_width or 16.0,
                        cfg.grid_spacing or 1.0 / 16.0)
    residual = residual_report(reference, interpolant, grid, **kwargs)
    node_tol = cfg.tol if cfg.tol is not None else 1e-8
    ok = interpolant.residual <= node_tol
    lines = [
        f"interpolated seed-{cfg.seed} member of {reference.kernel.label} "
        f"space with {kernel.label} on {nodes.name} ({len(nodes)} nodes)",
        f"node residual={interpolant.residual:.3g} "
        f"(kappa={interpolant.kappa:.6g}): {_flag(ok)}",
        f"central errors: l2={residual.l2_error:.6g}, "
        f"sup={residual.sup_error:.6g}",
    ]
    payload = {
        "interpolant": interpolant.to_dict(),
        "residual": residual.to_dict(),
    }
    return _CommandResult(payload=payload, verdict=ok, lines=lines,
                          csv=comparison_csv(reference, interpolant, grid))


def _cmd_cardinal(cfg: ExperimentConfig) -> _CommandResult:
    cfg.require("kernel")
    kernel = make_kernel(cfg.kernel, cfg.alpha)
    half_width = float(cfg.grid_half_width or 8.0)
    spacing = float(cfg.grid_spacing or 0.25)
    grid = LineGrid(half_width, spacing)
    kwargs = {"line_grid": grid}
    if cfg.depth is not None:
        kwargs["depth"] = cfg.depth
    if cfg.torus_points is not None:
        kwargs["torus_points"] = cfg.torus_points
    cardinal = make_cardinal(kernel, **kwargs)
    xs = grid.nodes
    values = cardinal.space_values
    on_integers = np.isclose(xs, np.round(xs), rtol=0.0, atol=1e-12)
    expected = (np.abs(xs) < 0.5).astype(float)
    kronecker = float(np.max(np.abs(values[on_integers]
                                    - expected[on_integers])))
    tol = cfg.tol if cfg.tol is not None else 1e-6
    ok = kronecker <= tol
    csv_lines = ["x,value"]
    csv_lines.extend(f"{x:.17g},{v:.17g}" for x, v in zip(xs, values))
    route = ("closed-form periodization" if cardinal.depth is None
             else f"truncation depth {cardinal.depth}")
    lines = [
        f"cardinal of {kernel.label} via {route}: "
        f"denominator floor={cardinal.sigma_floor:.6g}",
        f"kronecker deviation on the window lattice={kronecker:.3g} "
        f"(tol {tol:g}): {_flag(ok)}",
    ]
    payload = {
        "cardinal": {
            "kernel": {"name": kernel.name, "alpha": kernel.alpha},
            "depth": cardinal.depth,
            "torus_points": cardinal.torus.nodes.size,
            "sigma_floor": cardinal.sigma_floor,
            "kronecker_deviation": kronecker,
            "grid_half_width": half_width,
            "grid_spacing": spacing,
        },
    }
    return _CommandResult(payload=payload, verdict=ok, lines=lines,
                          csv="\n".join(csv_lines) + "\n")


def _cmd_recover(cfg: ExperimentConfig) -> _CommandResult:
    cfg.require("construction", "alphas", "nodes", "target")
    half_width = cfg.J if cfg.J is not None else 24
    interp_window = make_nodes(cfg.nodes, half_width)
    sample_spec = cfg.sample_nodes if cfg.sample_nodes is not None else cfg.nodes
    sample_window = make_nodes(sample_spec, half_width)
    family = FamilySpec(
        construction=cfg.construction,
        alphas=cfg.alphas,
        target=make_kernel(cfg.target, cfg.target_alpha),
        sample_window=sample_window,
        interp_window=interp_window,
        base=cfg.base,
    )
    screen_kwargs = {}
    if cfg.depth is not None:
        screen_kwargs["depth"] = cfg.depth
    if cfg.threshold is not None:
        screen_kwargs["threshold"] = cfg.threshold
    if cfg.limit_rel_tol is not None:
        screen_kwargs["limit_rel_tol"] = cfg.limit_rel_tol
    condition = screen_family(family, **screen_kwargs)
    sweep_kwargs = {}
    if cfg.central_fraction is not None:
        sweep_kwargs["central_fraction"] = cfg.central_fraction
    if cfg.grid_half_width is not None or cfg.grid_spacing is not None:
        sweep_kwargs["grid"] = LineGrid(cfg.grid_half_width or 16.0,
                                        cfg.grid_spacing or 1.0 / 16.0)
    sweep = run_family_sweep(family, seed=cfg.seed, **sweep_kwargs)

    failed = [r for r in sweep.rows if not math.isfinite(r.l2_error)]
    decay_threshold = (cfg.decay_threshold
                       if cfg.decay_threshold is not None else 1.0)
    if failed:
        ok = False
        decay_line = (f"{len(failed)} of {len(sweep.rows)} members failed "
                      "to solve; see row notes")
    else:
        ratio = sweep.final_over_initial
        ok = sweep.errors_nonincreasing and ratio <= decay_threshold
        decay_line = (f"error decay: final/initial={ratio:.6g} "
                      f"(threshold {decay_threshold:g}), "
                      f"nonincreasing={sweep.errors_nonincreasing}")
    lines = [
        f"family {family.construction} -> {family.target.label}: "
        f"{len(sweep.rows)} members on {interp_window.name} "
        f"({len(interp_window)} nodes), seed {cfg.seed}",
        f"screening: {'screened' if condition.screened else 'not screened'} "
        f"({', '.join(f'{k}={_flag(v)}' for k, v in sorted(condition.verdicts.items()))})",
        f"{decay_line}: {_flag(ok)}",
    ]
    payload = {"screening": condition.to_dict(), "sweep": sweep.to_dict()}
    return _CommandResult(payload=payload, verdict=ok, lines=lines,
                          csv=sweep.to_csv())


def _cmd_counterexample(cfg: ExperimentConfig) -> _CommandResult:
    kwargs = {}
    if cfg.alphas is not None:
        kwargs["alphas"] = cfg.alphas
    if cfg.J is not None:
        kwargs["half_width"] = cfg.J
    if cfg.floor_threshold is not None:
        kwargs["floor_threshold"] = cfg.floor_threshold
    if cfg.control_threshold is not None:
        kwargs["control_threshold"] = cfg.control_threshold
    if cfg.central_fraction is not None:
        kwargs["central_fraction"] = cfg.central_fraction
    if cfg.grid_half_width is not None or cfg.grid_spacing is not None:
        kwargs["grid"] = LineGrid(cfg.grid_half_width or 16.0,
                                  cfg.grid_spacing or 1.0 / 16.0)
    kwargs["seeds"] = tuple(cfg.seed + i for i in range(3))
    report = counterexample_run(**kwargs)
    ok = report.floor_verdict and report.control_verdict
    csv_lines = ["run,alpha,l2_error,sup_error,kappa,coeff_norm"]
    for run in report.runs:
        for row in run.rows:
            csv_lines.append(
                f"seed{run.seed},{row.alpha:.17g},{row.l2_error:.17g},"
                f"{row.sup_error:.17g},{row.kappa:.17g},"
                f"{row.coeff_norm:.17g}")
    for row in report.control.rows:
        csv_lines.append(
            f"control,{row.alpha:.17g},{row.l2_error:.17g},"
            f"{row.sup_error:.17g},{row.kappa:.17g},{row.coeff_norm:.17g}")
    floors = ", ".join(f"{r:.4g}" for r in report.floor_ratios)
    lines = [
        f"swapped-node window: error floors final/initial=[{floors}] "
        f"above {report.floor_threshold:g}: {_flag(report.floor_verdict)}",
        f"matched control decays to "
        f"{report.control.final_over_initial:.4g}: "
        f"{_flag(report.control_verdict)}",
    ]
    return _CommandResult(payload={"counterexample": report.to_dict()},
                          verdict=ok, lines=lines,
                          csv="\n".join(csv_lines) + "\n")


def _cmd_half_shift(cfg: ExperimentConfig) -> _CommandResult:
    kwargs = {}
    if cfg.half_widths is not None:
        kwargs["half_widths"] = cfg.half_widths
    if cfg.width is not None:
        kwargs["width"] = cfg.width
    report = half_shift_conditioning(**kwargs)
    ok = report.growth_verdict and report.control_verdict
    kappas = ", ".join(f"{k:.4g}" for k in report.kappas)
    lines = [
        f"half-shift sampling conditioning grows: [{kappas}]: "
        f"{_flag(report.growth_verdict)}",
        f"matched control stabilizes near {report.control_limit:.6g}: "
        f"{_flag(report.control_verdict)}",
    ]
    return _CommandResult(payload={"half_shift": report.to_dict()},
                          verdict=ok, lines=lines, csv=report.to_csv())


_HANDLERS: dict = {
    "verify-kernel": _cmd_verify_kernel,
    "riesz": _cmd_riesz,
    "interpolate": _cmd_interpolate,
    "cardinal": _cmd_cardinal,
    "recover": _cmd_recover,
    "counterexample": _cmd_counterexample,
    "half-shift": _cmd_half_shift,
}


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    """Argument parser that reports problems as usage errors, not exits."""

    def error(self, message):
        raise UsageError(message)


def _float_flag(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise UsageError(f"expected a number, got {text!r}") from None


def _int_flag(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise UsageError(f"expected an integer, got {text!r}") from None


# argparse names the converter in its error text
_float_flag.__name__ = "number"
_int_flag.__name__ = "integer"


def _build_parser() -> _Parser:
    parser = _Parser(prog="qsispace",
                     description="Sampling and recovery experiments in "
                                 "quasi shift-invariant spaces.")
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", dest="config_file", metavar="FILE",
                        help="JSON config file; flags override its values")
    common.add_argument("--preset", help="named experiment preset")
    common.add_argument("--out", metavar="DIR",
                        help="output directory (default: current)")
    common.add_argument("--seed", type=_int_flag, help="RNG seed")
    common.add_argument("--tol", type=_float_flag,
                        help="verdict tolerance override")

    kernel = argparse.ArgumentParser(add_help=False)
    kernel.add_argument("--kernel", help="catalog kernel name")
    kernel.add_argument("--alpha", type=_float_flag,
                        help="kernel shape parameter")

    nodes = argparse.ArgumentParser(add_help=False)
    nodes.add_argument("--nodes", help="node window: lattice, "
                       "kadec-alternating:EPS, sqrt2-swap, explicit:X1,X2,...")
    nodes.add_argument("--J", type=_int_flag,
                       help="window half-size (nodes -J..J)")

    target = argparse.ArgumentParser(add_help=False)
    target.add_argument("--target", help="target-space kernel name")
    target.add_argument("--target-alpha", dest="target_alpha",
                        type=_float_flag, help="target kernel parameter")
    target.add_argument("--sample-nodes", dest="sample_nodes",
                        help="sampling window when it differs from --nodes")

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--grid-half-width", dest="grid_half_width",
                      type=_float_flag, help="evaluation grid half-width")
    grid.add_argument("--grid-spacing", dest="grid_spacing",
                      type=_float_flag, help="evaluation grid spacing")
    grid.add_argument("--central-fraction", dest="central_fraction",
                      type=_float_flag,
                      help="central window fraction for error norms")

    p = sub.add_parser("verify-kernel", parents=[common, kernel],
                       help="regularity report for a catalog kernel")
    p.add_argument("--cells", type=_int_flag,
                   help="spectral cells each side of center")
    p.add_argument("--torus-points", dest="torus_points", type=_int_flag,
                   help="grid points per spectral cell")

    sub.add_parser("riesz", parents=[common, nodes],
                   help="Riesz bounds of a node window")

    sub.add_parser("interpolate", parents=[common, kernel, nodes, target,
                                           grid],
                   help="interpolate a seeded random space member")

    p = sub.add_parser("cardinal", parents=[common, kernel],
                       help="tabulate a generator's cardinal interpolator")
    p.add_argument("--depth", type=_int_flag,
                   help="periodization truncation depth")
    p.add_argument("--torus-points", dest="torus_points", type=_int_flag,
                   help="torus grid points for the denominator")
    p.add_argument("--grid-half-width", dest="grid_half_width",
                   type=_float_flag, help="table half-width")
    p.add_argument("--grid-spacing", dest="grid_spacing", type=_float_flag,
                   help="table spacing")

    p = sub.add_parser("recover", parents=[common, nodes, target, grid],
                       help="screen a family and run the recovery sweep")
    p.add_argument("--construction",
                   help="family construction (regular-gaussian, convolution, "
                        "dilated-approx-identity, multiquadric-cardinal)")
    p.add_argument("--base", help="base kernel for convolution families")
    p.add_argument("--alphas", help="comma-separated family parameters")
    p.add_argument("--depth", type=_int_flag,
                   help="alias depth override for screening")
    p.add_argument("--threshold", type=_float_flag,
                   help="mismatch-series decay threshold")
    p.add_argument("--limit-rel-tol", dest="limit_rel_tol",
                   type=_float_flag, help="finite-cell limit tolerance")
    p.add_argument("--decay-threshold", dest="decay_threshold",
                   type=_float_flag,
                   help="required final/initial error ratio")

    p = sub.add_parser("counterexample", parents=[common, grid],
                       help="non-recovery on the swapped-node window")
    p.add_argument("--alphas", help="comma-separated family parameters")
    p.add_argument("--J", type=_int_flag, help="window half-size")
    p.add_argument("--floor-threshold", dest="floor_threshold",
                   type=_float_flag, help="required error floor ratio")
    p.add_argument("--control-threshold", dest="control_threshold",
                   type=_float_flag, help="control decay threshold")

    p = sub.add_parser("half-shift", parents=[common],
                       help="conditioning of half-shifted Gaussian sampling")
    p.add_argument("--half-widths", dest="half_widths",
                   help="comma-separated window half-sizes")
    p.add_argument("--width", type=_float_flag, help="Gaussian width")

    return parser


def _error_exit_code(exc: BaseException) -> int:
    if isinstance(exc, (UsageError, DomainError)):
        return _EXIT_USAGE
    return _EXIT_NUMERIC


def _emit_error(exc: BaseException, command: Optional[str]) -> int:
    code = _error_exit_code(exc)
    obj = {
        "error": type(exc).__name__,
        "message": str(exc),
        "exit_code": code,
    }
    if command:
        obj["command"] = command
    print(json.dumps(obj, sort_keys=True), file=sys.stderr)
    return code


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def main(argv: Optional[List[str]] = None) -> int:
    command = None
    try:
        args = _build_parser().parse_args(argv)
        command = args.command
        raw = vars(args)
        config_file = raw.pop("config_file", None)
        raw.pop("command")
        flags = {k: v for k, v in raw.items() if v is not None}
        cfg = resolve_config(command, flags, config_file)
        result = _HANDLERS[cfg.command](cfg)
        paths = _write_outputs(cfg, result)
    except SystemExit as exc:  # argparse --help
        code = exc.code
        return int(code) if isinstance(code, int) else 0
    except QsispaceError as exc:
        return _emit_error(exc, command)
    except Exception as exc:  # noqa: BLE001 -- every failure must report
        return _emit_error(exc, command)
    for line in result.lines:
        print(line)
    for path in paths:
        print(f"wrote {path}")
    if result.verdict:
        return _EXIT_OK
    print(json.dumps({
        "error": "VerdictFailure",
        "message": "run completed but its verdict failed; see the report",
        "exit_code": _EXIT_VERDICT,
        "command": cfg.command,
    }, sort_keys=True), file=sys.stderr)
    return _EXIT_VERDICT
