"""Experiment config files: a TOML key-value tree, strictly validated.

A config fully describes one experiment: the field, algorithm parameters,
noise, initialization, the ensemble of seeds, an optional one-parameter
sweep, and output switches. Unknown keys anywhere are rejected by name so
typos cannot silently change an experiment. See configs/ for examples and
docs/config.md for the schema.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib

from .errors import ConfigError
from .fields import (
    FitnessField,
    Linear,
    RelocateAt,
    SourceSpec,
    Static,
    bounds_diagonal,
    gaussian_peaks_field,
    himmelblau_field,
    point_source_field,
)
from .params import SELECTION_MODES, BmoParams
from .sim import Scenario

SCHEMA_VERSION = 1

# Sweepable knobs: numeric BmoParams fields plus scenario-level numbers.
SWEEP_PARAM_FIELDS = (
    "rho",
    "gamma",
    "lambda_d",
    "step_size",
    "fitness_eps",
    "n_agents",
    "max_iters",
)
SWEEP_SCENARIO_FIELDS = ("sensor_sigma", "capture_radius")


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated, resolved contents of one experiment config file."""

    name: str
    field_spec: dict
    params: BmoParams  # seed field is a placeholder; real seeds come from `seeds`
    sensor_sigma: float
    capture_radius: float
    init: Optional[list]
    seeds: list
    sweep: Optional[tuple] = None  # (parameter, [values])
    emit_trace: bool = True
    emit_summary: bool = True
    emit_svg: bool = False
    out_dir: str = "out"
    capture_min_count: int = 1

    def build_field(self) -> FitnessField:
        return build_field(self.field_spec)

    def scenario(self, seed: int, sweep_value=None) -> Scenario:
        params = self.params.replace(seed=seed)
        sensor_sigma = self.sensor_sigma
        capture_radius = self.capture_radius
        if self.sweep is not None and sweep_value is not None:
            key = self.sweep[0]
            if key in SWEEP_PARAM_FIELDS:
                if key in ("n_agents", "max_iters"):
                    sweep_value = int(sweep_value)
                params = params.replace(**{key: sweep_value})
            elif key == "sensor_sigma":
                sensor_sigma = float(sweep_value)
            elif key == "capture_radius":
                capture_radius = float(sweep_value)
        return Scenario(
            name=self.name,
            field=self.build_field(),
            params=params,
            sensor_sigma=sensor_sigma,
            init=self.init,
            capture_radius=capture_radius,
        )


def _require_keys(table: dict, allowed: set, where: str):
    for key in table:
        if key not in allowed:
            raise ConfigError(f"unknown key {key!r} in [{where}]")


def build_field(spec: dict) -> FitnessField:
    """Construct a field from its spec dict (config file or trace metadata)."""
    if "kind" not in spec:
        raise ConfigError("field spec needs a 'kind'")
    kind = spec["kind"]
    if kind == "gaussian_peaks":
        _require_keys(
            spec, {"kind", "centers", "amplitudes", "sigma", "bounds"}, "field"
        )
        for key in ("centers", "amplitudes", "sigma", "bounds"):
            if key not in spec:
                raise ConfigError(f"field.{key} is required for gaussian_peaks")
        return gaussian_peaks_field(
            spec["centers"], spec["amplitudes"], spec["sigma"], spec["bounds"]
        )
    if kind == "himmelblau":
        _require_keys(spec, {"kind", "bounds"}, "field")
        return himmelblau_field(spec.get("bounds"))
    if kind == "point_sources":
        _require_keys(spec, {"kind", "sources", "bounds"}, "field")
        if "sources" not in spec or "bounds" not in spec:
            raise ConfigError("field.sources and field.bounds are required")
        sources = []
        for idx, src in enumerate(spec["sources"]):
            _require_keys(
                src, {"intensity", "position", "kappa", "motion"}, f"field.sources[{idx}]"
            )
            for key in ("intensity", "position", "kappa"):
                if key not in src:
                    raise ConfigError(f"field.sources[{idx}].{key} is required")
            motion = _build_motion(src.get("motion"), idx)
            sources.append(
                SourceSpec(
                    intensity=float(src["intensity"]),
                    position=tuple(src["position"]),
                    kappa=float(src["kappa"]),
                    motion=motion,
                )
            )
        return point_source_field(sources, spec["bounds"])
    raise ConfigError(f"unknown field kind {kind!r}")


def _build_motion(motion, idx: int):
    if motion is None:
        return Static()
    where = f"field.sources[{idx}].motion"
    if "kind" not in motion:
        raise ConfigError(f"{where} needs a 'kind'")
    kind = motion["kind"]
    if kind == "static":
        _require_keys(motion, {"kind"}, where)
        return Static()
    if kind == "relocate_at":
        _require_keys(motion, {"kind", "t", "to"}, where)
        if "t" not in motion or "to" not in motion:
            raise ConfigError(f"{where} needs 't' and 'to'")
        return RelocateAt(t=int(motion["t"]), to=tuple(motion["to"]))
    if kind == "linear":
        _require_keys(motion, {"kind", "velocity"}, where)
        if "velocity" not in motion:
            raise ConfigError(f"{where} needs 'velocity'")
        return Linear(velocity=tuple(motion["velocity"]))
    raise ConfigError(f"unknown motion kind {kind!r} in {where}")


def parse_config(text: str) -> ExperimentConfig:
    try:
        tree = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config is not valid TOML: {exc}") from exc
    return _config_from_tree(tree)


def load_config(path) -> ExperimentConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text)


def _config_from_tree(tree: dict) -> ExperimentConfig:
    _require_keys(
        tree,
        {"schema_version", "name", "field", "params", "scenario", "ensemble",
         "sweep", "output", "analysis"},
        "config root",
    )
    version = tree.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ConfigError(
            f"schema_version must be {SCHEMA_VERSION}, got {version!r}"
        )
    if "name" not in tree or not isinstance(tree["name"], str):
        raise ConfigError("config needs a string 'name'")
    if "field" not in tree:
        raise ConfigError("config needs a [field] table")
    field = build_field(tree["field"])  # validates eagerly

    params_tab = dict(tree.get("params", {}))
    _require_keys(
        params_tab,
        {"rho", "gamma", "lambda_d", "step_size", "n_agents", "max_iters",
         "selection_mode", "fitness_eps"},
        "params",
    )
    if "lambda_d" not in params_tab:
        # default: 10% of the arena diagonal
        params_tab["lambda_d"] = 0.1 * bounds_diagonal(field.bounds)
    mode = params_tab.get("selection_mode", "stochastic")
    if mode not in SELECTION_MODES:
        raise ConfigError(f"params.selection_mode must be one of {SELECTION_MODES}")
    try:
        params = BmoParams(seed=0, **params_tab)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid [params]: {exc}") from exc

    scen = tree.get("scenario", {})
    _require_keys(scen, {"sensor_sigma", "capture_radius", "init"}, "scenario")
    init = scen.get("init", "uniform")
    if isinstance(init, str):
        if init != "uniform":
            raise ConfigError("scenario.init must be 'uniform' or a position list")
        init = None
    else:
        init = [list(map(float, row)) for row in init]
        if len(init) != params.n_agents:
            raise ConfigError(
                f"scenario.init lists {len(init)} positions for "
                f"{params.n_agents} agents"
            )
    sensor_sigma = float(scen.get("sensor_sigma", 0.0))
    capture_radius = float(scen.get("capture_radius", 0.3))

    ens = tree.get("ensemble", {})
    _require_keys(ens, {"seeds", "count", "start"}, "ensemble")
    if "seeds" in ens:
        if "count" in ens or "start" in ens:
            raise ConfigError("ensemble: give either 'seeds' or 'count'/'start'")
        seeds = [int(s) for s in ens["seeds"]]
    else:
        count = int(ens.get("count", 1))
        start = int(ens.get("start", 1))
        seeds = list(range(start, start + count))
    if not seeds:
        raise ConfigError("ensemble must provide at least one seed")
    if len(set(seeds)) != len(seeds):
        raise ConfigError("ensemble seeds must be distinct")

    sweep = None
    if "sweep" in tree:
        sw = tree["sweep"]
        _require_keys(sw, {"parameter", "values"}, "sweep")
        if "parameter" not in sw or "values" not in sw:
            raise ConfigError("[sweep] needs 'parameter' and 'values'")
        param = sw["parameter"]
        allowed = SWEEP_PARAM_FIELDS + SWEEP_SCENARIO_FIELDS
        if param not in allowed:
            raise ConfigError(
                f"sweep.parameter {param!r} is not sweepable (one of {allowed})"
            )
        values = list(sw["values"])
        if not values:
            raise ConfigError("sweep.values must be non-empty")
        for v in values:
            if not isinstance(v, (int, float)) or not math.isfinite(float(v)):
                raise ConfigError(f"sweep value {v!r} is not a finite number")
        sweep = (param, values)

    out = tree.get("output", {})
    _require_keys(out, {"trace", "summary", "svg", "dir"}, "output")

    analysis_tab = tree.get("analysis", {})
    _require_keys(analysis_tab, {"capture_min_count"}, "analysis")

    return ExperimentConfig(
        name=tree["name"],
        field_spec=dict(field.spec),
        params=params,
        sensor_sigma=sensor_sigma,
        capture_radius=capture_radius,
        init=init,
        seeds=seeds,
        sweep=sweep,
        emit_trace=bool(out.get("trace", True)),
        emit_summary=bool(out.get("summary", True)),
        emit_svg=bool(out.get("svg", False)),
        out_dir=str(out.get("dir", "out")),
        capture_min_count=int(analysis_tab.get("capture_min_count", 1)),
    )
