"""Command-line front end: presets, config runs, and parameter sweeps.

The tool exposes three subcommands.  ``simulate preset <name>`` runs one of
the built-in scenarios; ``simulate run <config>`` executes an arbitrary
scenario from a flat key-value config file; ``simulate sweep <config>`` runs
a family of scenarios along one parameter axis.  Every run writes a
trajectory CSV (columns t, re_q, im_q, abs_q2, K1, K2, C at 17 significant
digits) and an event-summary JSON; sweeps add a combined summary table.

Presets are stored as raw key-value pairs and funneled through the same
parser as user config files, so a config file duplicating a preset produces
byte-identical output.

Exit codes: 0 success, 2 config or preset-name errors, 3 invalid spectral
model, 4 numerical failure, 1 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, TextIO, Tuple, Union

import numpy as np

from . import volterra
from .dynamics import BellLikeInit, NonPhysicalAmplitude, bell_like_state
from .entanglement import (
    GridTooCoarse,
    NotAState,
    Trajectory,
    analyze,
    compute_trajectory,
    concurrence_x,
)
from .qmath import ConvergenceFailure
from .reservoir import AmplitudeFn, BandGapDip, DetunedLorentzian, InvalidModel
from .reservoir import kernel as res_kernel

SpectralModel = Union[DetunedLorentzian, BandGapDip]


class ParseError(ValueError):
    """Config file is malformed; message carries line or key diagnostics."""


class UnknownPreset(ValueError):
    """Requested preset name is not defined."""


class IoFailure(RuntimeError):
    """Writing an output artifact failed."""


@dataclass(frozen=True)
class GridSpec:
    t_max: float
    n_samples: int

    def __post_init__(self) -> None:
        if not (math.isfinite(self.t_max) and self.t_max > 0.0):
            raise ValueError("grid.t_max must be positive and finite")
        if self.n_samples < 16:
            raise ValueError("grid.n must be at least 16")

    @property
    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.t_max, self.n_samples)


@dataclass(frozen=True)
class OracleSpec:
    enabled: bool = False
    step: float = 1e-3

    def __post_init__(self) -> None:
        if not (math.isfinite(self.step) and self.step > 0.0):
            raise ValueError("oracle.step must be positive and finite")


@dataclass(frozen=True)
class OutputSpec:
    path: Optional[str] = None
    format: str = "csv"

    def __post_init__(self) -> None:
        if self.format != "csv":
            raise ValueError("output.format must be 'csv'")


@dataclass(frozen=True)
class RunConfig:
    model: SpectralModel
    initial: BellLikeInit
    grid: GridSpec
    oracle: OracleSpec
    output: OutputSpec


@dataclass(frozen=True)
class SweepSpec:
    key: str
    values: Tuple[float, ...]
    configs: Tuple[RunConfig, ...]


@dataclass(frozen=True)
class EventReport:
    esd_time: Optional[float]
    revival_windows: Tuple[Tuple[float, float], ...]
    plateau: Optional[float]
    regime_label: Optional[str]
    oracle_max_deviation: Optional[float] = None

    def to_json_dict(self) -> dict:
        return {
            "esd_time": self.esd_time,
            "revivals": [list(w) for w in self.revival_windows],
            "plateau": self.plateau,
            "oracle_max_deviation": self.oracle_max_deviation,
            "regime": self.regime_label,
        }


# Preset definitions as raw strings; they pass through the same parser as
# user config files so preset runs and equivalent configs agree byte for
# byte.  Detunings follow the 0, 2λ, 5λ, 8λ family at λ = 0.1; dip depths
# follow the 1, 2/3, 1/3, 0 family.
_SQRT3_INV = repr(1.0 / math.sqrt(3.0))
_SQRT2_INV = repr(1.0 / math.sqrt(2.0))

_FIG1_COMMON = {
    "model.kind": "lorentzian",
    "model.gamma": "1.0",
    "model.lambda": "0.1",
    "initial.family": "psi",
    "initial.alpha": _SQRT3_INV,
    "grid.t_max": "15.0",
    "grid.n": "1501",
    "oracle.step": "1e-3",
}
_FIG2_COMMON = {
    "model.kind": "bandgap-dip",
    "model.gamma1": "1.0",
    "model.lambda1": "50.0",
    "model.lambda2": "5.0",
    "initial.family": "phi",
    "initial.alpha": _SQRT2_INV,
    "grid.t_max": "50.0",
    "grid.n": "2001",
    "oracle.step": "1e-3",
}

PRESETS: Dict[str, Dict[str, str]] = {
    "fig1-d0": {**_FIG1_COMMON, "model.delta": "0.0"},
    "fig1-d2": {**_FIG1_COMMON, "model.delta": "0.2"},
    "fig1-d5": {**_FIG1_COMMON, "model.delta": "0.5"},
    "fig1-d8": {**_FIG1_COMMON, "model.delta": "0.8"},
    "fig2-g1": {**_FIG2_COMMON, "model.gamma2": "1.0"},
    "fig2-g23": {**_FIG2_COMMON, "model.gamma2": repr(2.0 / 3.0)},
    "fig2-g13": {**_FIG2_COMMON, "model.gamma2": repr(1.0 / 3.0)},
    "fig2-g0": {**_FIG2_COMMON, "model.gamma2": "0.0"},
}

_COMMON_KEYS = {
    "model.kind",
    "initial.family",
    "initial.alpha",
    "initial.delta",
    "grid.t_max",
    "grid.n",
    "oracle.enabled",
    "oracle.step",
    "output.path",
    "output.format",
}
_MODEL_KEYS = {
    "lorentzian": {"model.gamma", "model.lambda", "model.delta"},
    "bandgap-dip": {
        "model.gamma1",
        "model.gamma2",
        "model.lambda1",
        "model.lambda2",
    },
}
_REQUIRED_MODEL_KEYS = {
    "lorentzian": {"model.gamma", "model.lambda"},
    "bandgap-dip": {
        "model.gamma1",
        "model.gamma2",
        "model.lambda1",
        "model.lambda2",
    },
}
_REQUIRED_KEYS = {"model.kind", "initial.family", "initial.alpha", "grid.t_max", "grid.n"}


def parse_pairs(text: str) -> Dict[str, Tuple[int, str]]:
    """Split config text into key -> (line number, raw value).

    Lines are ``key = value``; blank lines and lines starting with ``#`` are
    skipped.  Duplicate keys are rejected with both line numbers.
    """
    pairs: Dict[str, Tuple[int, str]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ParseError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not key:
            raise ParseError(f"line {lineno}: empty key")
        if not value:
            raise ParseError(f"line {lineno}: empty value for key {key!r}")
        if key in pairs:
            raise ParseError(
                f"line {lineno}: duplicate key {key!r} (first set on line {pairs[key][0]})"
            )
        pairs[key] = (lineno, value)
    return pairs


def _take_float(pairs, key: str) -> float:
    lineno, raw = pairs[key]
    try:
        value = float(raw)
    except ValueError:
        raise ParseError(f"line {lineno}: key {key!r}: not a number: {raw!r}") from None
    if not math.isfinite(value):
        raise ParseError(f"line {lineno}: key {key!r}: value must be finite")
    return value


def _take_int(pairs, key: str) -> int:
    lineno, raw = pairs[key]
    try:
        return int(raw)
    except ValueError:
        raise ParseError(f"line {lineno}: key {key!r}: not an integer: {raw!r}") from None


def _take_bool(pairs, key: str) -> bool:
    lineno, raw = pairs[key]
    if raw == "true":
        return True
    if raw == "false":
        return False
    raise ParseError(f"line {lineno}: key {key!r}: expected 'true' or 'false', got {raw!r}")


def assemble_run_config(pairs: Dict[str, Tuple[int, str]]) -> RunConfig:
    """Build a validated RunConfig from parsed key-value pairs.

    Raises ParseError for vocabulary, type, or range problems and lets
    InvalidModel propagate so callers can distinguish physics violations
    from config mistakes.
    """
    for key in _REQUIRED_KEYS:
        if key not in pairs:
            raise ParseError(f"missing required key {key!r}")

    kind_line, kind = pairs["model.kind"]
    if kind not in _MODEL_KEYS:
        allowed = ", ".join(sorted(_MODEL_KEYS))
        raise ParseError(
            f"line {kind_line}: unknown model.kind {kind!r} (expected one of: {allowed})"
        )
    vocabulary = _COMMON_KEYS | _MODEL_KEYS[kind]
    for key, (lineno, _) in pairs.items():
        if key not in vocabulary:
            raise ParseError(f"line {lineno}: unknown key {key!r} for model.kind {kind!r}")
    for key in _REQUIRED_MODEL_KEYS[kind]:
        if key not in pairs:
            raise ParseError(f"missing required key {key!r} for model.kind {kind!r}")

    if kind == "lorentzian":
        model: SpectralModel = DetunedLorentzian(
            gamma=_take_float(pairs, "model.gamma"),
            lam=_take_float(pairs, "model.lambda"),
            delta=_take_float(pairs, "model.delta") if "model.delta" in pairs else 0.0,
        )
    else:
        model = BandGapDip(
            gamma1=_take_float(pairs, "model.gamma1"),
            gamma2=_take_float(pairs, "model.gamma2"),
            lam1=_take_float(pairs, "model.lambda1"),
            lam2=_take_float(pairs, "model.lambda2"),
        )

    family = pairs["initial.family"][1]
    try:
        initial = BellLikeInit(
            family=family,
            alpha=_take_float(pairs, "initial.alpha"),
            delta=_take_float(pairs, "initial.delta") if "initial.delta" in pairs else 0.0,
        )
        grid = GridSpec(
            t_max=_take_float(pairs, "grid.t_max"),
            n_samples=_take_int(pairs, "grid.n"),
        )
        oracle = OracleSpec(
            enabled=_take_bool(pairs, "oracle.enabled") if "oracle.enabled" in pairs else False,
            step=_take_float(pairs, "oracle.step") if "oracle.step" in pairs else 1e-3,
        )
        output = OutputSpec(
            path=pairs["output.path"][1] if "output.path" in pairs else None,
            format=pairs["output.format"][1] if "output.format" in pairs else "csv",
        )
    except ParseError:
        raise
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    return RunConfig(model=model, initial=initial, grid=grid, oracle=oracle, output=output)


def assemble_sweep(pairs: Dict[str, Tuple[int, str]]) -> SweepSpec:
    """Build a sweep: one axis key, a value list, and one RunConfig per point."""
    if "sweep.key" not in pairs:
        raise ParseError("missing required key 'sweep.key'")
    if "sweep.values" not in pairs:
        raise ParseError("missing required key 'sweep.values'")
    key_line, axis_key = pairs["sweep.key"]
    values_line, raw_values = pairs["sweep.values"]
    if axis_key in pairs:
        raise ParseError(
            f"line {pairs[axis_key][0]}: axis key {axis_key!r} must not also be set directly"
        )
    values = []
    for part in raw_values.split(","):
        part = part.strip()
        try:
            value = float(part)
        except ValueError:
            raise ParseError(
                f"line {values_line}: sweep.values: not a number: {part!r}"
            ) from None
        if not math.isfinite(value):
            raise ParseError(f"line {values_line}: sweep.values must be finite")
        values.append(value)
    if not values:
        raise ParseError(f"line {values_line}: sweep.values is empty")

    base = {k: v for k, v in pairs.items() if k not in ("sweep.key", "sweep.values")}
    configs = []
    for value in values:
        point = dict(base)
        point[axis_key] = (key_line, repr(value))
        configs.append(assemble_run_config(point))
    return SweepSpec(key=axis_key, values=tuple(values), configs=tuple(configs))


def _regime_label(model: SpectralModel) -> Optional[str]:
    """Weak/strong damping label; defined only for the undetuned Lorentzian."""
    if not isinstance(model, DetunedLorentzian) or model.delta != 0.0:
        return None
    threshold = model.lam / 2.0
    if model.gamma < threshold:
        return "weak"
    if model.gamma > threshold:
        return "strong"
    return None


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def _write_trajectory_csv(path: Path, traj: Trajectory) -> None:
    lines = ["t,re_q,im_q,abs_q2,K1,K2,C"]
    for i in range(len(traj)):
        q = traj.amplitudes[i]
        lines.append(
            ",".join(
                (
                    _fmt(float(traj.times[i])),
                    _fmt(float(q.real)),
                    _fmt(float(q.imag)),
                    _fmt(float(abs(q) ** 2)),
                    _fmt(float(traj.k1[i])),
                    _fmt(float(traj.k2[i])),
                    _fmt(float(traj.c[i])),
                )
            )
        )
    _write_text(path, "\n".join(lines) + "\n")


def _write_oracle_csv(path: Path, grid: volterra.GridAmplitude) -> None:
    lines = ["t,re_q,im_q,abs_q2"]
    for t, q in zip(grid.times, grid.values):
        lines.append(
            ",".join(
                (
                    _fmt(float(t)),
                    _fmt(float(q.real)),
                    _fmt(float(q.imag)),
                    _fmt(float(abs(q) ** 2)),
                )
            )
        )
    _write_text(path, "\n".join(lines) + "\n")


def _write_text(path: Path, text: str) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="ascii", newline="\n")
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def execute_run(config: RunConfig, base: Path, quiet: bool, out: TextIO) -> EventReport:
    """Run one scenario: trajectory CSV, optional oracle CSV, summary JSON."""
    amp = AmplitudeFn(config.model)
    x0 = bell_like_state(config.initial)
    traj = compute_trajectory(amp, x0, config.grid.times)

    def c_of_t(t: float) -> float:
        return concurrence_x(x0, amp(t), t).c

    traj = analyze(traj, c_of_t)

    deviation: Optional[float] = None
    csv_path = base.with_name(base.name + ".csv")
    json_path = base.with_name(base.name + ".json")
    _write_trajectory_csv(csv_path, traj)
    if config.oracle.enabled:
        solver = volterra.SolverConfig(step=config.oracle.step, t_max=config.grid.t_max)
        oracle_grid = volterra.solve(lambda tau: res_kernel(config.model, tau), solver)
        analytic = amp(oracle_grid.times)
        deviation = float(np.max(np.abs(analytic - oracle_grid.values)))
        _write_oracle_csv(base.with_name(base.name + "_oracle.csv"), oracle_grid)

    report = EventReport(
        esd_time=traj.esd_time,
        revival_windows=traj.revivals,
        plateau=traj.plateau,
        regime_label=_regime_label(config.model),
        oracle_max_deviation=deviation,
    )
    _write_text(json_path, json.dumps(report.to_json_dict(), indent=2, sort_keys=True) + "\n")

    if not quiet:
        print(f"wrote {csv_path}", file=out)
        print(f"wrote {json_path}", file=out)
        esd = "none" if report.esd_time is None else _fmt(report.esd_time)
        plateau = "none" if report.plateau is None else _fmt(report.plateau)
        print(f"esd_time = {esd}", file=out)
        print(f"revivals = {len(report.revival_windows)}", file=out)
        print(f"plateau = {plateau}", file=out)
        if deviation is not None:
            print(f"oracle_max_deviation = {_fmt(deviation)}", file=out)
    return report


def _output_base(config: RunConfig, fallback: str, out_dir: Path) -> Path:
    name = config.output.path if config.output.path is not None else fallback
    path = Path(name)
    if not path.is_absolute():
        path = out_dir / path
    return path


def run_preset(name: str, out_dir: Path, oracle: bool, quiet: bool, out: TextIO) -> EventReport:
    if name not in PRESETS:
        known = ", ".join(sorted(PRESETS))
        raise UnknownPreset(f"unknown preset {name!r} (known presets: {known})")
    raw = dict(PRESETS[name])
    if oracle:
        raw["oracle.enabled"] = "true"
    pairs = {key: (0, value) for key, value in raw.items()}
    config = assemble_run_config(pairs)
    return execute_run(config, _output_base(config, name, out_dir), quiet, out)


def run_config_file(path: Path, out_dir: Path, quiet: bool, out: TextIO) -> EventReport:
    text = path.read_text(encoding="utf-8")
    config = assemble_run_config(parse_pairs(text))
    return execute_run(config, _output_base(config, path.stem, out_dir), quiet, out)


def run_sweep_file(path: Path, out_dir: Path, quiet: bool, out: TextIO) -> List[EventReport]:
    """Execute every sweep point, then merge the per-point event summaries."""
    text = path.read_text(encoding="utf-8")
    sweep = assemble_sweep(parse_pairs(text))
    reports = []
    rows = ["value,esd_time,revival_count,plateau"]
    base = _output_base(sweep.configs[0], path.stem, out_dir)
    for index, (value, config) in enumerate(zip(sweep.values, sweep.configs)):
        point_base = base.with_name(f"{base.name}_{index:02d}")
        report = execute_run(config, point_base, quiet, out)
        reports.append(report)
        esd = "" if report.esd_time is None else _fmt(report.esd_time)
        plateau = "" if report.plateau is None else _fmt(report.plateau)
        rows.append(f"{_fmt(value)},{esd},{len(report.revival_windows)},{plateau}")
    summary_path = base.with_name(base.name + "_summary.csv")
    _write_text(summary_path, "\n".join(rows) + "\n")
    if not quiet:
        print(f"wrote {summary_path}", file=out)
    return reports


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="simulate",
        description=(
            "Exact entanglement dynamics of two qubits in independent "
            "structured reservoirs"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    preset = sub.add_parser("preset", help="run a built-in scenario")
    preset.add_argument("name", help="preset name, e.g. fig1-d0 or fig2-g1")
    preset.add_argument("--oracle", action="store_true", help="also run the integral-equation oracle")

    run = sub.add_parser("run", help="run a scenario from a config file")
    run.add_argument("config", type=Path, help="path to a key = value config file")

    sweep = sub.add_parser("sweep", help="run a one-axis parameter sweep")
    sweep.add_argument("config", type=Path, help="path to a sweep config file")

    for p in (preset, run, sweep):
        p.add_argument("--out-dir", type=Path, default=Path("."), help="directory for output files")
        p.add_argument("--quiet", action="store_true", help="suppress progress output")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "preset":
            run_preset(args.name, args.out_dir, args.oracle, args.quiet, sys.stdout)
        elif args.command == "run":
            run_config_file(args.config, args.out_dir, args.quiet, sys.stdout)
        else:
            run_sweep_file(args.config, args.out_dir, args.quiet, sys.stdout)
    except (ParseError, UnknownPreset) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InvalidModel as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (
        volterra.StepTooLarge,
        ConvergenceFailure,
        NonPhysicalAmplitude,
        NotAState,
        GridTooCoarse,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (IoFailure, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0
