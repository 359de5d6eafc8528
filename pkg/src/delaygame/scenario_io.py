"""Scenario files and result serialisation.

A scenario file is plain text with one ``key = value`` pair per line::

    # Table-4 style run
    label = condition1
    i_j = 30
    c_lc = 10
    ...
    tau = 0.01
    init = 0.8, 0.5, 0.5
    tau_list = 0.01, 0.05, 0.07

Everything after ``#`` is a comment. Sweep axes are written
``sweep_a = c_dj:1:30:30`` (name, low, high, grid count).
"""

from __future__ import annotations

import csv
import io
import json
import os
import re
from importlib import resources
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .dde import IntegratorConfig, Trajectory
from .errors import DomainError, ScenarioError
from .game import GameParams, StrategyState
from .lab import OBSERVABLES, Axis, Scenario, SurfaceResult, SweepSpec
from .stability import Classification

GAME_KEYS = ("i_j", "c_lc", "t_rj", "c_hj", "c_dj", "c_mj", "c_sj", "c_sc", "c_mc", "c_ii")
OPTIONAL_GAME_KEYS = ("c_mi", "e_di", "h_ri")
KEYS = GAME_KEYS + OPTIONAL_GAME_KEYS + (
    "tau", "init", "dt", "t_end", "tol", "experiment", "tau_list",
    "sweep_a", "sweep_b", "observable", "label",
)
_NUMBER = re.compile(r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?")

PathLike = Union[str, os.PathLike]


def _number(text, key, line):
    text = text.strip()
    if not _NUMBER.fullmatch(text):
        raise ScenarioError(f"{key}: malformed number {text!r}", line)
    value = float(text)
    if value != value or value in (float("inf"), float("-inf")):
        raise ScenarioError(f"{key}: number out of range {text!r}", line)
    return value


def _number_list(text, key, line):
    parts = text.split(",")
    if not text.strip() or any(not p.strip() for p in parts):
        raise ScenarioError(f"{key}: expected comma-separated numbers, got {text!r}", line)
    return [_number(p, key, line) for p in parts]


def _axis(text, key, line):
    parts = [p.strip() for p in text.split(":")]
    if len(parts) != 4:
        raise ScenarioError(f"{key}: expected name:lo:hi:n, got {text!r}", line)
    name = parts[0]
    lo = _number(parts[1], key, line)
    hi = _number(parts[2], key, line)
    if not re.fullmatch(r"\d+", parts[3]):
        raise ScenarioError(f"{key}: grid count must be a positive integer, got {parts[3]!r}", line)
    if name not in GAME_KEYS + OPTIONAL_GAME_KEYS:
        raise ScenarioError(f"{key}: unknown parameter {name!r}", line)
    try:
        return Axis(name, lo, hi, int(parts[3]))
    except ScenarioError as exc:
        raise ScenarioError(f"{key}: {exc}", line) from None


def _read_pairs(text):
    pairs = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ScenarioError(f"expected 'key = value', got {body!r}", lineno)
        key, value = (s.strip() for s in body.split("=", 1))
        if key not in KEYS:
            raise ScenarioError(f"unknown key {key!r}", lineno)
        if key in pairs:
            raise ScenarioError(f"duplicate key {key!r} (first on line {pairs[key][1]})", lineno)
        if not value:
            raise ScenarioError(f"{key}: missing value", lineno)
        pairs[key] = (value, lineno)
    return pairs


def parse_scenario(text: Union[str, bytes], default_label: str = "scenario") -> Scenario:
    """Parse and validate scenario text.

    Raises :class:`ScenarioError` (with a line number when one applies) for
    unknown, duplicate, malformed or missing keys and for out-of-range
    values.
    """
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ScenarioError(f"not valid UTF-8 text ({exc.reason} at byte {exc.start})") from None
    pairs = _read_pairs(text)

    def line_of(key):
        return pairs[key][1] if key in pairs else None

    experiment = pairs.get("experiment", ("run", None))[0]
    if experiment not in ("run", "compare", "sweep"):
        raise ScenarioError(f"experiment must be run, compare or sweep, got {experiment!r}", line_of("experiment"))

    sweep = None
    swept = set()
    if experiment == "sweep":
        missing = [k for k in ("sweep_a", "sweep_b") if k not in pairs]
        if missing:
            raise ScenarioError(f"missing required keys for a sweep: {', '.join(missing)}")
        axis_a = _axis(pairs["sweep_a"][0], "sweep_a", line_of("sweep_a"))
        axis_b = _axis(pairs["sweep_b"][0], "sweep_b", line_of("sweep_b"))
        observable = pairs.get("observable", ("x", None))[0]
        if observable not in OBSERVABLES:
            raise ScenarioError(f"observable must be one of {', '.join(OBSERVABLES)}", line_of("observable"))
        try:
            sweep = SweepSpec(axis_a, axis_b, observable)
        except ScenarioError as exc:
            raise ScenarioError(str(exc), line_of("sweep_b")) from None
        swept = {axis_a.name, axis_b.name}
    else:
        for key in ("sweep_a", "sweep_b", "observable"):
            if key in pairs:
                raise ScenarioError(f"{key} only applies to sweep experiments", line_of(key))

    values = {}
    for key in GAME_KEYS + OPTIONAL_GAME_KEYS + ("tau",):
        if key in pairs:
            v = _number(pairs[key][0], key, line_of(key))
            if v < 0:
                raise ScenarioError(f"{key} must be non-negative, got {v}", line_of(key))
            values[key] = v

    required = [k for k in GAME_KEYS + ("tau",) if k not in swept]
    if experiment == "compare":
        required.append("tau_list")
    missing = [k for k in required if k not in pairs]
    if missing:
        raise ScenarioError(f"missing required keys: {', '.join(missing)}")
    for name in swept:
        axis = sweep.axis_a if sweep.axis_a.name == name else sweep.axis_b
        values.setdefault(name, axis.lo)
    params = GameParams(**values)

    init = StrategyState(0.8, 0.5, 0.5)
    if "init" in pairs:
        raw = _number_list(pairs["init"][0], "init", line_of("init"))
        if len(raw) != 3:
            raise ScenarioError(f"init needs three values, got {len(raw)}", line_of("init"))
        if any(not 0 <= v <= 1 for v in raw):
            raise ScenarioError("init values must lie in [0, 1]", line_of("init"))
        init = StrategyState(*raw)

    settings = {}
    for key, field in (("dt", "dt"), ("t_end", "t_end"), ("tol", "convergence_tol")):
        if key in pairs:
            v = _number(pairs[key][0], key, line_of(key))
            if not v > 0:
                raise ScenarioError(f"{key} must be positive, got {v}", line_of(key))
            settings[field] = v
    config = IntegratorConfig(tau=params.tau, **settings)

    tau_list = ()
    if "tau_list" in pairs:
        tau_list = tuple(_number_list(pairs["tau_list"][0], "tau_list", line_of("tau_list")))
        if any(t < 0 for t in tau_list):
            raise ScenarioError("tau_list entries must be non-negative", line_of("tau_list"))

    label = pairs["label"][0] if "label" in pairs else default_label
    try:
        return Scenario(
            params=params,
            init=init,
            integrator=config,
            experiment=experiment,
            tau_list=tau_list,
            sweep=sweep,
            label=label,
        )
    except DomainError as exc:
        raise ScenarioError(str(exc)) from None


def load_scenario(path: PathLike) -> Scenario:
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise ScenarioError(f"cannot read {path}: {exc.strerror}") from None
    return parse_scenario(data, default_label=path.stem)


def shipped_scenario(name: str) -> Path:
    """Path of a scenario file bundled with the package, e.g. ``"condition1"``."""
    ref = resources.files("delaygame") / "scenarios" / f"{name}.scn"
    if not ref.is_file():
        raise FileNotFoundError(f"no bundled scenario named {name!r}")
    return Path(str(ref))


def shipped_scenario_names() -> list[str]:
    folder = resources.files("delaygame") / "scenarios"
    return sorted(p.name[:-4] for p in folder.iterdir() if p.name.endswith(".scn"))


def _fmt(value: float) -> str:
    return f"{float(value):.9g}"


def _open_text(destination):
    if hasattr(destination, "write"):
        return destination, False
    return open(destination, "w", newline="", encoding="utf-8"), True


def write_trajectory_csv(trajectory: Trajectory, destination) -> None:
    """Write ``t,x,y,z`` rows, one per grid node, to a path or text stream."""
    handle, owned = _open_text(destination)
    try:
        out = io.StringIO()
        out.write("t,x,y,z\n")
        for t, (x, y, z) in zip(trajectory.times, trajectory.states):
            out.write(f"{_fmt(t)},{_fmt(x)},{_fmt(y)},{_fmt(z)}\n")
        handle.write(out.getvalue())
    finally:
        if owned:
            handle.close()


def read_trajectory_csv(source) -> tuple[np.ndarray, np.ndarray]:
    """Inverse of :func:`write_trajectory_csv`; returns ``(times, states)``."""
    if hasattr(source, "read"):
        rows = list(csv.reader(source))
    else:
        with open(source, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    if not rows or rows[0] != ["t", "x", "y", "z"]:
        raise ValueError("not a trajectory CSV (bad header)")
    data = np.array(rows[1:], dtype=float).reshape(-1, 4)
    return data[:, 0], data[:, 1:]


def write_surface_grid(surface: SurfaceResult, destination: PathLike) -> Path:
    """Write the surface as CSV plus a JSON sidecar with the axis metadata.

    Rows run over ``axis_a`` in the outer loop and ``axis_b`` in the inner
    loop. Returns the path of the sidecar.
    """
    destination = Path(destination)
    lines = ["a,b,x,y,z,converged"]
    for i, a in enumerate(surface.a_values):
        for j, b in enumerate(surface.b_values):
            x, y, z = surface.finals[i, j]
            lines.append(
                f"{_fmt(a)},{_fmt(b)},{_fmt(x)},{_fmt(y)},{_fmt(z)},{int(bool(surface.converged[i, j]))}"
            )
    with open(destination, "w", newline="", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    spec = surface.spec
    failed = [
        {"a": float(surface.a_values[i]), "b": float(surface.b_values[j]), "t": float(surface.failed_at[i, j])}
        for i, j in zip(*np.nonzero(~np.isnan(surface.failed_at)))
    ]
    meta = {
        "csv": destination.name,
        "order": "row-major: axis_a outer, axis_b inner",
        "axis_a": {"name": spec.axis_a.name, "lo": spec.axis_a.lo, "hi": spec.axis_a.hi, "n": spec.axis_a.n},
        "axis_b": {"name": spec.axis_b.name, "lo": spec.axis_b.lo, "hi": spec.axis_b.hi, "n": spec.axis_b.n},
        "observable": spec.observable,
        "failed_cells": failed,
    }
    sidecar = destination.with_suffix(".json")
    with open(sidecar, "w", newline="", encoding="utf-8") as fh:
        fh.write(json.dumps(meta, indent=2) + "\n")
    return sidecar


def read_surface_grid(source: PathLike) -> np.ndarray:
    """Rows of a surface CSV as an ``(N, 6)`` float array."""
    with open(source, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != ["a", "b", "x", "y", "z", "converged"]:
        raise ValueError("not a surface CSV (bad header)")
    return np.array(rows[1:], dtype=float).reshape(-1, 6)


def classification_dict(report: Classification) -> dict:
    c = report.conditions
    return {
        "tau": report.tau,
        "axis_order": "x, y, z (the published first row lists x, z, y)",
        "corners": [
            {
                "name": e.name,
                "point": list(e.point),
                "coefficients": list(e.coeffs),
                "rightmost_roots": [{"re": re_, "im": im} for re_, im in e.roots],
                "signs": "".join(e.signs),
                "paper_sign_pattern": "".join(e.paper_sign_pattern),
                "verdict": e.verdict.value,
                "sign_only_verdict": e.sign_verdict.value,
            }
            for e in report.equilibria
        ],
        "conditions": {
            "condition1": {"holds": c.condition1, "c_sj": c.storage_cost, "c_mj+c_dj": c.discharge_cost},
            "condition2": {
                "holds": c.condition2,
                "c_sj": c.storage_cost,
                "c_mj+c_dj": c.discharge_cost,
                "c_lc": c.litigation,
                "c_sc": c.substitution,
            },
            "condition3": {
                "holds": c.condition3,
                "c_lc": c.litigation,
                "c_sc": c.substitution,
                "c_sj": c.storage_cost,
                "c_mj+c_dj+t_rj+c_hj+c_lc+i_j": c.full_discharge_cost,
            },
        },
        "interior": {
            "status": report.interior.status,
            "x": report.interior.x,
            "y": report.interior.y,
            "note": report.interior.note,
        },
    }


def run_report(scenario: Scenario, report: Classification, trajectory: Optional[Trajectory] = None) -> dict:
    """JSON-ready summary of a run: parameters, classification and outcome."""
    out = {
        "label": scenario.label,
        "params": scenario.params.as_dict(),
        "init": list(scenario.init),
        "classification": classification_dict(report),
    }
    if trajectory is not None:
        out["limit_state"] = list(trajectory.final)
        out["limit_corner"] = list(trajectory.limit) if trajectory.limit else None
        out["converged_at"] = trajectory.converged_at
        out["max_band_excursion"] = trajectory.band_excursion
    return out


def dumps_report(report: dict) -> str:
    return json.dumps(report, indent=2, allow_nan=False) + "\n"
