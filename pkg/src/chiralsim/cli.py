"""Command-line front end.

Subcommands::

    chiralsim protocol [CONFIG] [--json PATH]
    chiralsim sweep CONFIG
    chiralsim eigen [--omega0 W] [--omega12 Z --omega23 Z]
    chiralsim evolve CONFIG

Exit codes: 0 success, 2 configuration error, 3 numerical invariant
violated, 4 output not writable. Relative output paths resolve against
``output.dir`` in the config, then ``$CHIRALSIM_OUTPUT_DIR``, then the
working directory.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path

import jsonschema
import numpy as np
import yaml

from .evolution import (
    CollapseChannel,
    NumericalInvariantError,
    TimeDependentGenerator,
    evolve_lindblad,
    evolve_piecewise,
    evolve_rk4,
)
from .hamiltonian import CHANNELS, Chirality, DetuningSet, RabiSet, dressed_eigensystem
from .protocol import ENGINES, ProtocolSpec, run_both
from .pulses import Envelope, PulseSegment, Schedule, Shape, calibrate_amplitude
from .quantum import normalize
from .robustness import PARAMETERS, cartesian_grid, run_sweep

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4

OUTPUT_DIR_ENV = "CHIRALSIM_OUTPUT_DIR"
FLOAT_FORMAT = "%.12e"
POPULATION_SUM_ATOL = 1e-8

RESULT_COLUMNS = ("p_l1", "p_l2", "p_l3", "p_r1", "p_r2", "p_r3", "contrast", "engine", "drift")


class ConfigError(Exception):
    pass


_number = {"type": "number"}
_channel_code = {"type": "string", "enum": ["12", "13", "21", "23", "31", "32"]}
_detuning = {
    "type": "object",
    "additionalProperties": False,
    "properties": {"delta12": _number, "delta23": _number, "delta13": _number},
}
_decay = {
    "type": "object",
    "additionalProperties": False,
    "required": ["rate"],
    "properties": {
        "rate": {"type": "number", "minimum": 0},
        "channels": {"type": "array", "items": _channel_code, "minItems": 1},
    },
}
_engine = {"type": "string", "enum": ["auto", *ENGINES]}
_step = {"anyOf": [{"type": "number", "exclusiveMinimum": 0}, {"type": "null"}]}
_output = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "dir": {"type": "string"},
        "csv": {"type": "string"},
        "json": {"type": "string"},
    },
}

PROTOCOL_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "protocol": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "shape": {"type": "string", "enum": [s.value for s in Shape]},
                "durations": {
                    "type": "array",
                    "items": {"type": "number", "exclusiveMinimum": 0},
                    "minItems": 3,
                    "maxItems": 3,
                },
                "gap": {"type": "number", "minimum": 0},
                "areas": {
                    "type": "object",
                    "additionalProperties": False,
                    "properties": {
                        k: {"type": "number", "minimum": 0}
                        for k in ("step1", "step2_12", "step2_23", "step3")
                    },
                },
                "phases": {
                    "type": "object",
                    "additionalProperties": False,
                    "properties": {"ch12": _number, "ch23": _number, "ch13": _number},
                },
                "detuning": _detuning,
                "decay": _decay,
            },
        },
        "engine": _engine,
        "step": _step,
        "sweep": {
            "type": "object",
            "additionalProperties": False,
            "required": ["axes"],
            "properties": {
                "axes": {
                    "type": "object",
                    "additionalProperties": False,
                    "minProperties": 1,
                    "properties": {
                        p: {"type": "array", "items": _number, "minItems": 1} for p in PARAMETERS
                    },
                },
                "workers": {"type": "integer", "minimum": 1},
                "decay_channels": {"type": "array", "items": _channel_code, "minItems": 1},
            },
        },
        "output": _output,
    },
}

_complex = {"anyOf": [{"type": "number"}, {"type": "string"}]}
EVOLVE_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["segments"],
    "properties": {
        "chirality": {"type": "string", "enum": ["left", "right"]},
        "initial_state": {"type": "array", "items": _complex, "minItems": 3, "maxItems": 3},
        "detuning": _detuning,
        "decay": _decay,
        "engine": {"type": "string", "enum": list(ENGINES)},
        "step": _step,
        "t_final": {"type": "number", "minimum": 0},
        "segments": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["t_start", "duration", "channels"],
                "properties": {
                    "t_start": {"type": "number", "minimum": 0},
                    "duration": {"type": "number", "exclusiveMinimum": 0},
                    "shape": {"type": "string", "enum": [s.value for s in Shape]},
                    "channels": {
                        "type": "object",
                        "additionalProperties": False,
                        "minProperties": 1,
                        "properties": {
                            ch: {
                                "type": "object",
                                "additionalProperties": False,
                                "properties": {
                                    "area": {"type": "number", "minimum": 0},
                                    "amplitude": {"type": "number", "minimum": 0},
                                    "phase": _number,
                                },
                            }
                            for ch in CHANNELS
                        },
                    },
                },
            },
        },
        "output": _output,
    },
}


def load_config(path, schema) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from exc
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"config {path} is not valid YAML: {exc}") from exc
    data = {} if data is None else data
    validate_config(data, schema)
    return data


def validate_config(data, schema):
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(data), key=lambda e: [str(p) for p in e.absolute_path])
    if errors:
        err = errors[0]
        where = ".".join(str(p) for p in err.absolute_path) or "<root>"
        raise ConfigError(f"config error at '{where}': {err.message}")


def _decay_channels(section) -> tuple:
    if not section:
        return ()
    codes = section.get("channels", ["31", "32", "21"])
    return tuple(CollapseChannel(int(c[0]), int(c[1]), float(section["rate"])) for c in codes)


def spec_from_config(cfg: dict) -> ProtocolSpec:
    proto = cfg.get("protocol", {})
    kwargs = {}
    if "shape" in proto:
        kwargs["shape"] = proto["shape"]
    if "durations" in proto:
        kwargs["durations"] = tuple(proto["durations"])
    if "gap" in proto:
        kwargs["gap"] = float(proto["gap"])
    names = {"step1": "area1", "step2_12": "area2_12", "step2_23": "area2_23", "step3": "area3"}
    for key, value in proto.get("areas", {}).items():
        kwargs[names[key]] = float(value)
    for key, value in proto.get("phases", {}).items():
        kwargs["phase" + key[2:]] = float(value)
    if "detuning" in proto:
        kwargs["detuning"] = DetuningSet(**proto["detuning"])
    kwargs["decay"] = _decay_channels(proto.get("decay"))
    return ProtocolSpec(**kwargs)


def _engine(cfg):
    engine = cfg.get("engine", "auto")
    return None if engine == "auto" else engine


def resolve_output(cfg: dict, name: str) -> Path:
    path = Path(name)
    if path.is_absolute():
        return path
    base = cfg.get("output", {}).get("dir") or os.environ.get(OUTPUT_DIR_ENV) or "."
    return Path(base) / path


def _fmt(value) -> str:
    return FLOAT_FORMAT % value


def format_csv(records, param_names) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([*param_names, *RESULT_COLUMNS])
    for r in records:
        writer.writerow(
            [
                *(_fmt(r.params[n]) for n in param_names),
                *(_fmt(p) for p in r.p_left),
                *(_fmt(p) for p in r.p_right),
                _fmt(r.contrast),
                r.engine,
                _fmt(r.drift),
            ]
        )
    return buf.getvalue()


def _json_float(x):
    return None if math.isnan(x) else float(x)


def records_json(records, param_names) -> str:
    rows = []
    for r in records:
        row = {n: float(r.params[n]) for n in param_names}
        for name, value in zip(RESULT_COLUMNS[:6], (*r.p_left, *r.p_right)):
            row[name] = _json_float(value)
        row["contrast"] = _json_float(r.contrast)
        row["engine"] = r.engine
        row["drift"] = _json_float(r.drift)
        if r.error:
            row["error"] = r.error
        rows.append(row)
    return json.dumps(rows, indent=2) + "\n"


def _write(path: Path, text: str):
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def cmd_protocol(args) -> int:
    cfg = load_config(args.config, PROTOCOL_SCHEMA) if args.config else {}
    spec = spec_from_config(cfg)
    result = run_both(spec, _engine(cfg), cfg.get("step"))
    for run in (result.left, result.right):
        if abs(float(np.sum(run.populations)) - 1.0) > POPULATION_SUM_ATOL:
            raise NumericalInvariantError(f"{run.chirality.value} populations do not sum to 1")

    out = sys.stdout
    out.write(f"engine: {result.left.engine}\n")
    for tag, run in (("L", result.left), ("R", result.right)):
        for level, p in enumerate(run.populations, start=1):
            out.write(f"P_{tag}({level}) = {p:.12f}\n")
    out.write(f"drift = {max(result.left.drift, result.right.drift):.3e}\n")
    out.write(f"C = {result.contrast:.12f}\n")

    json_name = args.json or cfg.get("output", {}).get("json")
    if json_name:
        report = {
            "engine": result.left.engine,
            "p_left": [float(p) for p in result.left.populations],
            "p_right": [float(p) for p in result.right.populations],
            "contrast": result.contrast,
            "drift": max(result.left.drift, result.right.drift),
        }
        _write(resolve_output(cfg, json_name), json.dumps(report, indent=2) + "\n")
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = load_config(args.config, PROTOCOL_SCHEMA)
    if "sweep" not in cfg:
        raise ConfigError("config error at 'sweep': a sweep config needs a 'sweep' section")
    spec = spec_from_config(cfg)
    sweep = cfg["sweep"]
    axes = sweep["axes"]
    param_names = list(axes)
    records = run_sweep(
        spec,
        cartesian_grid(axes),
        engine=_engine(cfg),
        step=cfg.get("step"),
        workers=sweep.get("workers", 1),
        decay_channels=tuple(sweep.get("decay_channels", ("31", "32", "21"))),
    )
    output = cfg.get("output", {})
    csv_path = resolve_output(cfg, output.get("csv", "sweep.csv"))
    _write(csv_path, format_csv(records, param_names))
    if "json" in output:
        _write(resolve_output(cfg, output["json"]), records_json(records, param_names))
    print(f"wrote {len(records)} rows to {csv_path}")

    failed = [r for r in records if r.error]
    for r in failed:
        print(f"grid point {r.params}: {r.error}", file=sys.stderr)
    if any("NumericalInvariantError" in r.error for r in failed):
        return EXIT_NUMERICAL
    return EXIT_OK


def _parse_complex(text) -> complex:
    try:
        return complex(str(text).replace(" ", ""))
    except ValueError as exc:
        raise ConfigError(f"cannot parse complex number {text!r}") from exc


def cmd_eigen(args) -> int:
    w0 = args.omega0
    omega12 = _parse_complex(args.omega12) if args.omega12 is not None else 1j * w0
    omega23 = _parse_complex(args.omega23) if args.omega23 is not None else complex(w0)
    pairs = dressed_eigensystem(RabiSet(omega12, omega23, 0.0))
    for value, vec in pairs:
        amps = " ".join(f"({a.real:+.12e}{a.imag:+.12e}j)" for a in vec.amplitudes)
        print(f"{_fmt(value)}  {amps}")
    return EXIT_OK


def _schedule_from_config(cfg) -> Schedule:
    segments = []
    for k, seg in enumerate(cfg["segments"]):
        shape = Shape(seg.get("shape", "rect"))
        envs = {}
        for ch, pulse in seg["channels"].items():
            if ("area" in pulse) == ("amplitude" in pulse):
                raise ConfigError(
                    f"config error at 'segments.{k}.channels.{ch}': give exactly one of area/amplitude"
                )
            amp = pulse.get("amplitude")
            if amp is None:
                amp = calibrate_amplitude(shape, seg["duration"], pulse["area"])
            envs[ch] = Envelope(shape, float(amp), float(seg["t_start"]), float(seg["duration"]), float(pulse.get("phase", 0.0)))
        segments.append(PulseSegment(envs))
    try:
        return Schedule(segments)
    except ValueError as exc:
        raise ConfigError(f"config error at 'segments': {exc}") from exc


def cmd_evolve(args) -> int:
    cfg = load_config(args.config, EVOLVE_SCHEMA)
    schedule = _schedule_from_config(cfg)
    chirality = Chirality(cfg.get("chirality", "left"))
    detuning = DetuningSet(**cfg.get("detuning", {}))
    gen = TimeDependentGenerator(schedule, detuning, chirality)
    try:
        psi0 = normalize([_parse_complex(c) for c in cfg.get("initial_state", [1, 0, 0])])
    except ValueError as exc:
        raise ConfigError(f"config error at 'initial_state': {exc}") from exc
    decay = _decay_channels(cfg.get("decay"))
    engine = cfg.get("engine") or ("lindblad" if decay else "piecewise")
    t_final = cfg.get("t_final")
    durations = [s.duration for s in schedule] or [t_final or 1.0]
    step = cfg.get("step") or min(durations) / 1000

    if engine == "piecewise":
        psi = evolve_piecewise(gen, psi0, t_final)
        amps, pops, drift = psi.amplitudes, psi.populations(), abs(psi.norm() - 1.0)
    elif engine == "rk4":
        res = evolve_rk4(gen, psi0, step, t_final)
        amps, pops, drift = res.state.amplitudes, res.state.populations(), res.norm_drift
    else:
        res = evolve_lindblad(gen, decay, psi0.projector(), step, t_final)
        amps, pops, drift = None, res.state.populations(), res.trace_drift

    print(f"engine: {engine}")
    if amps is not None:
        for level, a in enumerate(amps, start=1):
            print(f"c{level} = {a.real:+.12e}{a.imag:+.12e}j")
    for level, p in enumerate(pops, start=1):
        print(f"P({level}) = {p:.12f}")
    print(f"drift = {drift:.3e}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chiralsim", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("protocol", help="run the discrimination sequence for both chiralities")
    p.add_argument("config", nargs="?", help="YAML config (defaults reproduce the ideal sequence)")
    p.add_argument("--json", help="also write a JSON report to this path")
    p.set_defaults(func=cmd_protocol)

    p = sub.add_parser("sweep", help="error-model sweep to CSV")
    p.add_argument("config")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("eigen", help="dressed eigensystem of the two-field Hamiltonian")
    p.add_argument("--omega0", type=float, default=1.0, help="W0 with W12 = i W0, W23 = W0")
    p.add_argument("--omega12", help="complex W12, overrides --omega0 (e.g. '0+1j')")
    p.add_argument("--omega23", help="complex W23, overrides --omega0")
    p.set_defaults(func=cmd_eigen)

    p = sub.add_parser("evolve", help="evolve a state under a raw pulse schedule")
    p.add_argument("config")
    p.set_defaults(func=cmd_evolve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalInvariantError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        # bad step sizes, non-commuting segments for the exact engine, ...
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
