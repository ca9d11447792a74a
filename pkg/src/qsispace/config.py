"""Experiment configuration shared by every command-line entry point.

An :class:`ExperimentConfig` collects everything a command run depends
on: the command itself, kernel and node specifications, the family
description for recovery sweeps, grid parameters, the seed, tolerance
overrides, and the output directory.  Configs build from command-line
flags, from a single JSON config file, or from a named preset; explicit
flags override file values, which override preset values.  Unknown keys
are rejected, every numeric parameter is validated against a documented
range, and the canonical serialization (sorted keys, ``out`` excluded)
is hashed to name output files, so identical experiments land in
identical files regardless of how they were spelled.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Tuple, Union

from .errors import UsageError

__all__ = [
    "COMMANDS",
    "PRESETS",
    "ExperimentConfig",
    "load_config_file",
    "resolve_config",
]

COMMANDS = (
    "verify-kernel",
    "riesz",
    "interpolate",
    "cardinal",
    "recover",
    "counterexample",
    "half-shift",
)

# Inclusive bounds for every numeric field.  Parameters outside these
# ranges are refused at construction time with the offending value in
# the message; the ranges are deliberately generous -- they guard
# against typos and nonsense, not against expensive-but-valid runs.
_INT_RANGES = {
    "J": (1, 512),
    "torus_points": (16, 65536),
    "depth": (0, 64),
    "cells": (1, 64),
    "seed": (0, 2**32 - 1),
}
_FLOAT_RANGES = {
    "alpha": (1e-9, 1e9),
    "target_alpha": (1e-9, 1e9),
    "grid_half_width": (1e-3, 1024.0),
    "grid_spacing": (1e-6, 64.0),
    "fourier_cutoff": (1e-3, 1e6),
    "central_fraction": (1e-9, 1.0),
    "width": (1e-6, 100.0),
    "threshold": (1e-12, 1e6),
    "limit_rel_tol": (1e-12, 1.0),
    "decay_threshold": (1e-12, 1e6),
    "floor_threshold": (1e-12, 1e6),
    "control_threshold": (1e-12, 1e6),
    "tol": (1e-15, 1.0),
}

_NODE_FIELDS = ("nodes", "sample_nodes")
_TUPLE_FLOAT_FIELDS = ("alphas",)
_TUPLE_INT_FIELDS = ("half_widths",)


def _check_int(name: str, value) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise UsageError(f"{name} must be an integer, got {value!r}")
    lo, hi = _INT_RANGES[name]
    if not lo <= value <= hi:
        raise UsageError(f"{name}={value} outside the range [{lo}, {hi}]")
    return value


def _check_float(name: str, value) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise UsageError(f"{name} must be a number, got {value!r}")
    value = float(value)
    lo, hi = _FLOAT_RANGES[name]
    if not (math.isfinite(value) and lo <= value <= hi):
        raise UsageError(f"{name}={value!r} outside the range [{lo}, {hi}]")
    return value


def _float_tuple(name: str, value) -> Tuple[float, ...]:
    """Accept a comma-separated string or a sequence of numbers."""
    if isinstance(value, str):
        parts = [p.strip() for p in value.split(",") if p.strip()]
        try:
            value = [float(p) for p in parts]
        except ValueError:
            raise UsageError(
                f"{name}={value!r}: expected comma-separated numbers"
            ) from None
    if not isinstance(value, (list, tuple)) or not value:
        raise UsageError(f"{name} must be a nonempty list of numbers")
    out = []
    for v in value:
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise UsageError(f"{name} entries must be numbers, got {v!r}")
        v = float(v)
        if not (math.isfinite(v) and 0.0 < v <= 1e9):
            raise UsageError(f"{name} entry {v!r} outside (0, 1e9]")
        out.append(v)
    if len(out) > 64:
        raise UsageError(f"{name} has {len(out)} entries; at most 64 allowed")
    return tuple(out)


def _int_tuple(name: str, value) -> Tuple[int, ...]:
    floats = _float_tuple(name, value)
    out = []
    for v in floats:
        if v != int(v):
            raise UsageError(f"{name} entries must be integers, got {v!r}")
        out.append(int(v))
    return tuple(out)


def _coordinates(name: str, values) -> Tuple[float, ...]:
    coords = []
    for v in values:
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise UsageError(f"{name} coordinates must be numbers, got {v!r}")
        v = float(v)
        if not math.isfinite(v):
            raise UsageError(f"{name} coordinates must be finite, got {v!r}")
        coords.append(v)
    if not coords:
        raise UsageError(f"{name} coordinate list is empty")
    if len(coords) > 4096:
        raise UsageError(f"{name} has {len(coords)} coordinates; "
                         "at most 4096 allowed")
    return tuple(coords)


def _node_spec(name: str, value) -> Union[str, Tuple[float, ...]]:
    """Normalize a node specification.

    Strings pass through (``lattice``, ``kadec-alternating:EPS``,
    ``sqrt2-swap``) except for the ``explicit:`` prefix, which parses the
    rest as a comma-separated coordinate list; sequences of numbers are
    taken as explicit coordinates.  Coordinates may be any finite reals;
    ordering is checked where the window is built.
    """
    if isinstance(value, str):
        if value.startswith("explicit:"):
            text = value[len("explicit:"):]
            parts = [p.strip() for p in text.split(",") if p.strip()]
            try:
                return _coordinates(name, [float(p) for p in parts])
            except ValueError:
                raise UsageError(
                    f"{name}={value!r}: expected comma-separated numbers "
                    "after 'explicit:'") from None
        return value
    if isinstance(value, (list, tuple)):
        return _coordinates(name, value)
    raise UsageError(f"{name} must be a token string or a coordinate list, "
                     f"got {value!r}")


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated, hashable description of one command run.

    Only ``command`` is mandatory here; each command checks for the
    fields it needs and reports the missing ones by name.  ``out`` is
    excluded from the canonical serialization so the same experiment
    written to two directories produces identically named, byte-equal
    files.
    """

    command: str
    # kernel specification
    kernel: Optional[str] = None
    alpha: Optional[float] = None
    # target-space specification (recovery / interpolation reference)
    target: Optional[str] = None
    target_alpha: Optional[float] = None
    # node specifications
    nodes: Union[str, Tuple[float, ...], None] = None
    sample_nodes: Union[str, Tuple[float, ...], None] = None
    J: Optional[int] = None
    # family specification
    construction: Optional[str] = None
    base: Optional[str] = None
    alphas: Optional[Tuple[float, ...]] = None
    # grid parameters
    torus_points: Optional[int] = None
    grid_half_width: Optional[float] = None
    grid_spacing: Optional[float] = None
    fourier_cutoff: Optional[float] = None
    depth: Optional[int] = None
    cells: Optional[int] = None
    central_fraction: Optional[float] = None
    # half-shift geometry
    half_widths: Optional[Tuple[int, ...]] = None
    width: Optional[float] = None
    # run controls
    seed: int = 0
    out: str = "."
    preset: Optional[str] = None
    # tolerance overrides
    threshold: Optional[float] = None
    limit_rel_tol: Optional[float] = None
    decay_threshold: Optional[float] = None
    floor_threshold: Optional[float] = None
    control_threshold: Optional[float] = None
    tol: Optional[float] = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}; expected "
                             f"one of {', '.join(COMMANDS)}")
        for name in ("kernel", "target", "construction", "base", "out"):
            value = getattr(self, name)
            if value is not None and (not isinstance(value, str)
                                      or not value.strip()):
                raise UsageError(
                    f"{name} must be a nonempty string, got {value!r}")
        if self.preset is not None and self.preset not in PRESETS:
            raise UsageError(f"unknown preset {self.preset!r}; available: "
                             f"{', '.join(sorted(PRESETS))}")
        for name in _INT_RANGES:
            value = getattr(self, name)
            if name == "seed" or value is not None:
                object.__setattr__(self, name, _check_int(name, value))
        for name in _FLOAT_RANGES:
            value = getattr(self, name)
            if value is not None:
                object.__setattr__(self, name, _check_float(name, value))
        for name in _TUPLE_FLOAT_FIELDS:
            value = getattr(self, name)
            if value is not None:
                object.__setattr__(self, name, _float_tuple(name, value))
        for name in _TUPLE_INT_FIELDS:
            value = getattr(self, name)
            if value is not None:
                object.__setattr__(self, name, _int_tuple(name, value))
        for name in _NODE_FIELDS:
            value = getattr(self, name)
            if value is not None:
                object.__setattr__(self, name, _node_spec(name, value))
        if self.grid_spacing is not None and self.grid_half_width is not None:
            if self.grid_spacing > self.grid_half_width:
                raise UsageError(
                    f"grid_spacing={self.grid_spacing} exceeds "
                    f"grid_half_width={self.grid_half_width}")

    # -- canonical form ---------------------------------------------------

    def canonical_dict(self) -> dict:
        """Sorted, JSON-ready view of every set field except ``out``."""
        raw = dataclasses.asdict(self)
        raw.pop("out")
        out = {}
        for key in sorted(raw):
            value = raw[key]
            if value is None:
                continue
            if isinstance(value, tuple):
                value = list(value)
            out[key] = value
        return out

    def config_hash(self) -> str:
        """Twelve hex digits identifying the canonical configuration."""
        text = json.dumps(self.canonical_dict(), sort_keys=True,
                          separators=(",", ":"))
        return hashlib.sha256(text.encode("utf-8")).hexdigest()[:12]

    def require(self, *names: str) -> None:
        """Raise with the missing field names for this command."""
        missing = [n for n in names if getattr(self, n) is None]
        if missing:
            raise UsageError(
                f"command {self.command!r} needs {', '.join(missing)} "
                "(set by flag, config file, or preset)")


# ---------------------------------------------------------------------------
# Presets: one-command reproductions of the named experiments
# ---------------------------------------------------------------------------

#: Each preset expands to concrete config values before validation, so a
#: preset run and its fully spelled-out flag equivalent hash to the same
#: experiment apart from the recorded preset name.  Decay thresholds are
#: frozen from calibration runs recorded in the project notes.
PRESETS: dict = {
    # Gaussian-bump approximate identity, dilated and convolved with the
    # bandlimited triangle-spectrum target; sampling and interpolation on
    # the same alternating-perturbation window.  This is the dilation
    # family whose members are Gaussian convolutions of the target.
    "gaussian-conv-triangle": {
        "command": "recover",
        "construction": "dilated-approx-identity",
        "base": "gaussian-ai",
        "target": "triangle-spectrum",
        "alphas": (1.0, 2.0, 4.0, 8.0, 16.0),
        "nodes": "kadec-alternating:0.2",
        "J": 24,
        "seed": 5,
        "decay_threshold": 0.01,
    },
    # The same construction under its generic name.
    "ai-dilation-triangle": {
        "command": "recover",
        "construction": "dilated-approx-identity",
        "base": "gaussian-ai",
        "target": "triangle-spectrum",
        "alphas": (1.0, 2.0, 4.0, 8.0, 16.0),
        "nodes": "kadec-alternating:0.2",
        "J": 24,
        "seed": 5,
        "decay_threshold": 0.01,
    },
    # Poisson kernels convolved with the triangle-spectrum target.
    "poisson-conv-triangle": {
        "command": "recover",
        "construction": "convolution",
        "base": "poisson",
        "target": "triangle-spectrum",
        "alphas": (1.0, 2.0, 4.0, 8.0, 16.0),
        "nodes": "kadec-alternating:0.2",
        "J": 24,
        "seed": 5,
        "decay_threshold": 0.05,
    },
    # Inverse multiquadrics of growing order convolved with the target.
    # The error roughly halves per order doubling, so the window runs to
    # order 32 and the threshold records that first-order pace.
    "multiquadric-conv-triangle": {
        "command": "recover",
        "construction": "convolution",
        "base": "inverse-multiquadric",
        "target": "triangle-spectrum",
        "alphas": (2.0, 4.0, 8.0, 16.0, 32.0),
        "nodes": "kadec-alternating:0.2",
        "J": 16,
        "seed": 5,
        "decay_threshold": 0.1,
    },
    # Widening Gaussians against the single-cell sinc space on the plain
    # lattice.  The family stays fixed-shape in the limit, so only partial
    # error reduction is available; the threshold records the calibrated
    # plateau, not a convergence claim.
    "regular-gaussian-sinc": {
        "command": "recover",
        "construction": "regular-gaussian",
        "target": "sinc",
        "alphas": (1.0, 1.5, 2.0, 2.5),
        "nodes": "lattice",
        "J": 24,
        "seed": 0,
        "decay_threshold": 0.6,
    },
    # Non-recovery on the swapped-node window, with the matched control.
    "sqrt2-swap": {
        "command": "counterexample",
        "alphas": (1.0, 2.0, 4.0, 8.0, 16.0),
        "J": 24,
        "floor_threshold": 0.5,
        "control_threshold": 0.01,
    },
    # Condition-number growth of half-shifted Gaussian sampling.
    "half-shift": {
        "command": "half-shift",
        "half_widths": (4, 8, 16, 24),
        "width": 1.0,
    },
}

_FIELD_NAMES = tuple(f.name for f in dataclasses.fields(ExperimentConfig))


def _check_keys(source: str, mapping: dict) -> None:
    unknown = sorted(set(mapping) - set(_FIELD_NAMES))
    if unknown:
        raise UsageError(
            f"unknown config key{'s' if len(unknown) > 1 else ''} in "
            f"{source}: {', '.join(unknown)}")


def load_config_file(path: Union[str, Path]) -> dict:
    """Load a JSON config file into a flat key/value mapping."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"config file {path} is not valid JSON: {exc}"
                         ) from None
    if not isinstance(data, dict):
        raise UsageError(f"config file {path} must hold a JSON object, "
                         f"got {type(data).__name__}")
    _check_keys(f"config file {path}", data)
    return data


def resolve_config(command: str,
                   flag_values: Optional[dict] = None,
                   config_file: Union[str, Path, None] = None,
                   ) -> ExperimentConfig:
    """Merge preset, config file, and flags into a validated config.

    Precedence, lowest to highest: preset values, config-file values,
    explicit flag values.  The preset may be named in either source; a
    preset or file that names a different command than the one invoked
    is refused rather than silently re-dispatched.
    """
    flags = dict(flag_values or {})
    _check_keys("flags", flags)
    file_values = load_config_file(config_file) if config_file else {}

    merged = dict(file_values)
    merged.update(flags)

    preset_name = merged.get("preset")
    if preset_name is not None:
        if preset_name not in PRESETS:
            raise UsageError(f"unknown preset {preset_name!r}; available: "
                             f"{', '.join(sorted(PRESETS))}")
        base = dict(PRESETS[preset_name])
        base.update(file_values)
        base.update(flags)
        merged = base
        merged["preset"] = preset_name

    declared = merged.pop("command", None)
    if declared is not None and declared != command:
        raise UsageError(
            f"config names command {declared!r} but {command!r} was invoked")
    return ExperimentConfig(command=command, **merged)
