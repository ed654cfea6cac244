"""Declarative scenario runner: models -> propagators -> observables -> CSV.

A scenario is a YAML mapping with the fields

    name:         short identifier (used for output naming)
    description:  free text (shown by list-scenarios)
    model:        dicke | tc | ising
    dynamics:     unitary | gksl
    params:       model parameters (see the model builders)
    observables:  subset of {otoc_unitary, otoc_open, otoc_haar_mc,
                  op_entanglement, entropy_production, correlation_entropy}
    times:        {start, stop, points}
    rng_seed:     integer seed for Monte-Carlo observables
    n_pairs:      Haar sample count for otoc_haar_mc (default 200)
    gibbs_temperature:  bath temperature for GKSL entropy production
    output:       CSV file name

Angle-valued parameters accept either radians or strings like "7pi/16".
Runs are deterministic for a fixed seed; the CSV carries the resolved
configuration in '#' metadata lines and one column per observable.
"""

from __future__ import annotations

import dataclasses
import datetime
import json
import math
import os
import re
import tempfile
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Iterable

import numpy as np
import yaml

from . import __version__
from .linalg import kron
from .liouville import build_adjoint_liouvillian, propagate, unitary_adjoint_propagators
from .models import IsingParams, ModelSpec, build_dicke, build_ising, build_tc
from .scrambling import operator_entanglement, otoc_haar_mc, otoc_open, otoc_unitary
from .thermo import (default_initial_states, entropy_production_gksl,
                     entropy_production_unitary)

MODELS = ("dicke", "tc", "ising")
DYNAMICS = ("unitary", "gksl")
OBSERVABLES = ("otoc_unitary", "otoc_open", "otoc_haar_mc", "op_entanglement",
               "entropy_production", "correlation_entropy")
_UNITARY_ONLY = {"otoc_unitary", "op_entanglement", "correlation_entropy"}
_GKSL_ONLY = {"otoc_open"}

_ANGLE_RE = re.compile(r"^\s*(\d+(?:\.\d*)?)?\s*\*?\s*pi\s*(?:/\s*(\d+(?:\.\d*)?))?\s*$")


class ScenarioError(ValueError):
    """Configuration validation failure, carrying the offending field."""

    def __init__(self, field_name: str, message: str):
        self.field_name = field_name
        super().__init__(f"{field_name}: {message}")


def parse_angle(value: Any, field_name: str = "angle") -> float:
    """Parse an angle given in radians or as a 'pi' expression like '7pi/16'."""
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if isinstance(value, str):
        m = _ANGLE_RE.match(value)
        if m:
            coef = float(m.group(1)) if m.group(1) else 1.0
            den = float(m.group(2)) if m.group(2) else 1.0
            return coef * math.pi / den
        try:
            return float(value)
        except ValueError:
            pass
    raise ScenarioError(field_name, f"expected a number or a 'pi' expression, got {value!r}")


@dataclass(frozen=True)
class TimeGrid:
    start: float
    stop: float
    points: int

    def __post_init__(self):
        if self.points < 1:
            raise ScenarioError("times.points", f"must be >= 1, got {self.points}")
        if self.stop < self.start:
            raise ScenarioError("times.stop", f"must be >= start, got {self.stop} < {self.start}")
        if self.points > 1 and self.stop == self.start:
            raise ScenarioError("times", "zero-length grid with more than one point")
        if self.start < 0:
            raise ScenarioError("times.start", f"must be >= 0, got {self.start}")

    def array(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    model: str
    dynamics: str
    params: dict
    observables: tuple[str, ...]
    times: TimeGrid
    rng_seed: int = 0
    n_pairs: int = 200
    gibbs_temperature: float | None = None
    output: str = ""
    description: str = ""

    def resolved(self) -> dict:
        """JSON-serializable copy of the full configuration."""
        out = dataclasses.asdict(self)
        out["observables"] = list(self.observables)
        return out


def _require(mapping: dict, key: str, types, field_name: str):
    if key not in mapping:
        raise ScenarioError(field_name, "missing required field")
    value = mapping[key]
    if types is not None and not isinstance(value, types):
        raise ScenarioError(field_name, f"expected {types}, got {type(value).__name__}")
    return value


def parse_scenario(raw: dict, source: str = "<inline>") -> ScenarioConfig:
    """Validate a raw mapping into a ScenarioConfig with field-level errors."""
    if not isinstance(raw, dict):
        raise ScenarioError(source, "scenario file must contain a mapping")
    name = str(raw.get("name") or Path(source).stem or "scenario")
    model = _require(raw, "model", str, "model")
    if model not in MODELS:
        raise ScenarioError("model", f"unknown model {model!r}; expected one of {MODELS}")
    dynamics = _require(raw, "dynamics", str, "dynamics")
    if dynamics not in DYNAMICS:
        raise ScenarioError("dynamics", f"unknown dynamics {dynamics!r}; expected one of {DYNAMICS}")

    observables = _require(raw, "observables", list, "observables")
    if not observables:
        raise ScenarioError("observables", "at least one observable is required")
    for obs in observables:
        if obs not in OBSERVABLES:
            raise ScenarioError("observables", f"unknown observable {obs!r}")
        if obs in _UNITARY_ONLY and dynamics != "unitary":
            raise ScenarioError("observables", f"{obs} requires dynamics: unitary")
        if obs in _GKSL_ONLY and dynamics != "gksl":
            raise ScenarioError("observables", f"{obs} requires dynamics: gksl")

    times_raw = _require(raw, "times", dict, "times")
    times = TimeGrid(start=float(times_raw.get("start", 0.0)),
                     stop=float(_require(times_raw, "stop", (int, float), "times.stop")),
                     points=int(_require(times_raw, "points", int, "times.points")))

    params = dict(_require(raw, "params", dict, "params"))
    if model == "ising" and "theta" in params:
        params["theta"] = parse_angle(params["theta"], "params.theta")

    gibbs_t = raw.get("gibbs_temperature")
    if "entropy_production" in observables and dynamics == "gksl":
        if gibbs_t is None or float(gibbs_t) <= 0:
            raise ScenarioError("gibbs_temperature",
                                "GKSL entropy production needs a temperature > 0")
        gibbs_t = float(gibbs_t)

    return ScenarioConfig(
        name=name,
        model=model,
        dynamics=dynamics,
        params=params,
        observables=tuple(observables),
        times=times,
        rng_seed=int(raw.get("rng_seed", 0)),
        n_pairs=int(raw.get("n_pairs", 200)),
        gibbs_temperature=gibbs_t,
        output=str(raw.get("output") or f"{name}.csv"),
        description=str(raw.get("description", "")),
    )


def shipped_scenarios() -> dict[str, Path]:
    """Name -> path of the scenario files shipped with the package."""
    base = resources.files("qscramble") / "scenarios"
    out = {}
    for entry in sorted(base.iterdir(), key=lambda p: p.name):
        if entry.name.endswith(".yaml"):
            out[entry.name[: -len(".yaml")]] = Path(str(entry))
    return out


def load_scenario(ref: str | Path) -> ScenarioConfig:
    """Load a scenario from a file path or a shipped scenario name."""
    path = Path(ref)
    if not path.exists():
        shipped = shipped_scenarios()
        if str(ref) in shipped:
            path = shipped[str(ref)]
        else:
            raise ScenarioError("scenario", f"no such file or shipped scenario: {ref}")
    with open(path, "r", encoding="utf-8") as fh:
        raw = yaml.safe_load(fh)
    return parse_scenario(raw, source=str(path))


def _model_param(params: dict, key: str, field_prefix: str, default=None, required=False):
    if key not in params:
        if required:
            raise ScenarioError(f"{field_prefix}.{key}", "missing required field")
        return default
    return params[key]


def build_model(config: ScenarioConfig) -> ModelSpec:
    """Instantiate the configured model, dropping rates for unitary dynamics."""
    p = dict(config.params)
    open_dyn = config.dynamics == "gksl"
    try:
        if config.model in ("dicke", "tc"):
            builder = build_dicke if config.model == "dicke" else build_tc
            return builder(
                omega0=float(_model_param(p, "omega0", "params", required=True)),
                omega_c=float(_model_param(p, "omega_c", "params", required=True)),
                coupling=float(_model_param(p, "coupling", "params", required=True)),
                n_atoms=int(_model_param(p, "n_atoms", "params", default=2)),
                n_max=int(_model_param(p, "n_max", "params", default=3)),
                gamma=float(_model_param(p, "gamma", "params", default=0.0)) if open_dyn else 0.0,
                kappa=float(_model_param(p, "kappa", "params", default=0.0)) if open_dyn else 0.0,
                temp_a=float(_model_param(p, "temp_a", "params", default=0.0)),
                temp_b=float(_model_param(p, "temp_b", "params", default=0.0)),
            )
        temps = _model_param(p, "temperatures", "params", default=[0.0])
        if isinstance(temps, (int, float)):
            temps = [temps]
        ising = IsingParams(
            n_sites=int(_model_param(p, "n_sites", "params", required=True)),
            field=float(_model_param(p, "field", "params", required=True)),
            theta=parse_angle(_model_param(p, "theta", "params", required=True), "params.theta"),
            coupling=float(_model_param(p, "coupling", "params", required=True)),
            split=int(_model_param(p, "split", "params", default=1)),
            bath_topology=str(_model_param(p, "bath_topology", "params", default="uniform")),
            temperatures=tuple(float(t) for t in temps),
            boundary_bond_scale=float(_model_param(p, "boundary_bond_scale", "params", default=1.0)),
        )
        gamma = float(_model_param(p, "gamma", "params", default=0.0)) if open_dyn else 0.0
        return build_ising(ising, gamma)
    except ScenarioError:
        raise
    except (ValueError, TypeError) as exc:
        raise ScenarioError("params", str(exc)) from exc


@dataclass
class ResultTable:
    """One row per time point, one column per observable, plus metadata."""

    columns: list[str]
    data: np.ndarray
    metadata: dict = field(default_factory=dict)

    def column(self, name: str) -> np.ndarray:
        try:
            idx = self.columns.index(name)
        except ValueError:
            raise KeyError(f"no such column: {name}") from None
        return self.data[:, idx]

    def write_csv(self, path: str | Path, timestamp: bool = True) -> Path:
        """Atomically write the table as CSV with '#' metadata lines."""
        path = Path(path)
        lines = [f"# qscramble {self.metadata.get('version', __version__)}"]
        if timestamp:
            lines.append(f"# generated {datetime.datetime.now().isoformat()}")
        config = self.metadata.get("config")
        if config is not None:
            lines.append(f"# config {json.dumps(config, sort_keys=True)}")
        lines.append(",".join(self.columns))
        for row in self.data:
            lines.append(",".join(repr(float(x)) for x in row))
        text = "\n".join(lines) + "\n"

        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
            os.replace(tmp_name, path)
        except BaseException:
            if os.path.exists(tmp_name):
                os.unlink(tmp_name)
            raise
        return path


def compute_observables(config: ScenarioConfig, model: ModelSpec | None = None,
                        times: np.ndarray | None = None) -> ResultTable:
    """Evaluate the configured observables; returns the in-memory table."""
    model = model if model is not None else build_model(config)
    times = times if times is not None else config.times.array()
    space = model.space
    columns: list[str] = ["t"]
    series: list[np.ndarray] = [times]

    adjoint_props = None
    if {"otoc_open", "otoc_haar_mc"} & set(config.observables):
        if config.dynamics == "gksl":
            adjoint_props = propagate(build_adjoint_liouvillian(model), times)
        else:
            adjoint_props = unitary_adjoint_propagators(model.hamiltonian, times)

    thermo_series = None
    if config.dynamics == "unitary" and \
            {"entropy_production", "correlation_entropy"} & set(config.observables):
        rho_s0, rho_e0 = default_initial_states(model)
        thermo_series = entropy_production_unitary(
            model.hamiltonian, space.dims, rho_s0, rho_e0, times)

    for obs in config.observables:
        if obs == "otoc_unitary":
            out = otoc_unitary(model.hamiltonian, space, times)
            columns.append(obs)
            series.append(out.values)
        elif obs == "otoc_open":
            out = otoc_open(adjoint_props, space)
            columns.append(obs)
            series.append(out.values)
        elif obs == "otoc_haar_mc":
            out = otoc_haar_mc(adjoint_props, space, n_pairs=config.n_pairs,
                               rng=config.rng_seed)
            columns.extend([obs, f"{obs}_stderr"])
            series.extend([out.values, out.stderr])
        elif obs == "op_entanglement":
            out = operator_entanglement(model.hamiltonian, space, times)
            columns.append(obs)
            series.append(out.values)
        elif obs == "entropy_production":
            if config.dynamics == "unitary":
                columns.append(obs)
                series.append(thermo_series.sigma)
            else:
                rho_s0, rho_e0 = default_initial_states(model)
                sigma = entropy_production_gksl(model, kron(rho_s0, rho_e0), times,
                                                config.gibbs_temperature)
                columns.append(obs)
                series.append(sigma)
        elif obs == "correlation_entropy":
            columns.append(obs)
            series.append(thermo_series.s_corr)

    if thermo_series is not None and \
            {"entropy_production", "correlation_entropy"} <= set(config.observables):
        columns.append("entropy_sum")
        series.append(thermo_series.total)

    data = np.column_stack(series)
    metadata = {"version": __version__, "config": config.resolved()}
    return ResultTable(columns=columns, data=data, metadata=metadata)


def run_scenario(config: ScenarioConfig, out_dir: str | Path | None = None,
                 seed: int | None = None, timestamp: bool = True) -> tuple[ResultTable, Path]:
    """Run one scenario and write its CSV; returns the table and the path."""
    if seed is not None:
        config = dataclasses.replace(config, rng_seed=seed)
    table = compute_observables(config)
    out_path = Path(out_dir or ".") / config.output
    table.write_csv(out_path, timestamp=timestamp)
    return table, out_path


def _axis_token(value: Any) -> str:
    return str(value).replace("/", "-").replace(" ", "")


def sweep(config: ScenarioConfig, axis: str, values: Iterable[Any],
          out_dir: str | Path | None = None, seed: int | None = None,
          timestamp: bool = True) -> list[tuple[Any, Path | Exception]]:
    """Run one scenario per axis value; per-run errors are collected, not raised."""
    results: list[tuple[Any, Path | Exception]] = []
    stem = Path(config.output).stem
    for value in values:
        try:
            if axis == "temperature":
                # one token drives all bath temperatures of the model
                params = dict(config.params)
                if config.model in ("dicke", "tc"):
                    params["temp_a"] = params["temp_b"] = float(value)
                else:
                    params["temperatures"] = [float(value)]
                run_cfg = dataclasses.replace(config, params=params)
            elif axis == "dissipation":
                # one token drives all dissipative rates of the model
                params = dict(config.params)
                params["gamma"] = float(value)
                if config.model in ("dicke", "tc"):
                    params["kappa"] = float(value)
                run_cfg = dataclasses.replace(config, params=params)
            elif axis in config.params:
                params = dict(config.params)
                params[axis] = parse_angle(value, f"params.{axis}") if axis == "theta" \
                    else float(value)
                run_cfg = dataclasses.replace(config, params=params)
            elif axis == "gibbs_temperature":
                run_cfg = dataclasses.replace(config, gibbs_temperature=float(value))
            elif axis == "n_pairs":
                run_cfg = dataclasses.replace(config, n_pairs=int(value))
            else:
                raise ScenarioError(f"axis.{axis}",
                                    "not a parameter of this scenario")
            out_name = f"{stem}__{axis}={_axis_token(value)}.csv"
            run_cfg = dataclasses.replace(run_cfg, output=out_name)
            _, path = run_scenario(run_cfg, out_dir=out_dir, seed=seed, timestamp=timestamp)
            results.append((value, path))
        except Exception as exc:  # collected per run
            results.append((value, exc))
    return results
