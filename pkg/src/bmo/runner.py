"""Batch experiment execution: ensembles, sweeps, summaries, output files.

One run per (sweep value, seed); each run writes its own trace file and
the summary is assembled afterwards, so results are independent of
execution order. Outputs are written atomically and, when a target file
already exists, compared byte-for-byte: a mismatch means the output
directory holds stale results from a different config and is reported
instead of silently overwritten.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import analysis
from .config import ExperimentConfig
from .errors import BmoError
from .sim import co_location_time, simulate
from .state import RunTrace
from .traceio import trace_to_bytes


class StaleOutputError(BmoError):
    """An existing output file holds different bytes than this run produced."""


def write_atomic(path: str, data: bytes) -> bool:
    """Write ``data`` to ``path`` via rename; verify byte-equality if it exists.

    Returns True if the file was created, False if an identical file was
    already in place. Raises StaleOutputError on content mismatch.
    """
    if os.path.exists(path):
        with open(path, "rb") as fh:
            existing = fh.read()
        if existing == data:
            return False
        raise StaleOutputError(
            f"{path} already exists with different contents; "
            "clean the output directory or choose another"
        )
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "wb") as fh:
        fh.write(data)
    os.replace(tmp, path)
    return True


def _value_token(value) -> str:
    return repr(value) if not isinstance(value, str) else value


def trace_filename(name: str, seed: int, sweep: Optional[tuple] = None) -> str:
    if sweep is None:
        return f"{name}__seed{seed}.csv"
    param, value = sweep
    return f"{name}__{param}_{_value_token(value)}__seed{seed}.csv"


@dataclass(frozen=True)
class RunResult:
    seed: int
    sweep_value: Optional[float]
    trace: RunTrace
    summary: dict


def summarize_trace(trace: RunTrace, capture_min_count: int = 1) -> dict:
    """The per-run summary record: capture, convergence, smoothness, switches."""
    field = None
    peaks = None
    try:
        from .config import build_field

        field = build_field(trace.field_spec)
        peaks = field.known_peaks(trace.n_steps)
    except BmoError:
        pass

    conv = analysis.uv_convergence(trace)
    record = {
        "scenario": trace.scenario_name,
        "seed": trace.seed,
        "n_agents": trace.n_agents,
        "n_steps": trace.n_steps,
        "uv_final": {
            "mean": float(conv.uv_mean[-1]),
            "min": float(conv.uv_min[-1]),
            "max": float(conv.uv_max[-1]),
            "std": float(conv.uv_std[-1]),
        },
        "fitness_final": {
            "mean": float(conv.fitness_mean[-1]),
            "min": float(conv.fitness_min[-1]),
            "max": float(conv.fitness_max[-1]),
            "std": float(conv.fitness_std[-1]),
        },
        "capture": None,
        "co_location_source": None,
        "co_location_mutual": None,
        "smoothness": None,
        "lmate_switch_rate": None,
        "centroid_final": analysis.centroid_series(trace)[-1].tolist(),
    }

    radius = trace.capture_radius if trace.capture_radius else 0.3
    if peaks:
        report = analysis.peak_capture(trace, peaks, radius, capture_min_count)
        record["capture"] = report.to_dict()
        if len(peaks) == 1:
            record["co_location_source"] = co_location_time(
                trace, radius, peaks[0]
            )
    record["co_location_mutual"] = co_location_time(trace, radius, "mutual")

    if len(trace) >= 3:
        sm = analysis.path_smoothness(trace)
        ratios = [r for r in sm.path_ratio if r is not None]
        record["smoothness"] = {
            "mean_turning_angle": float(np.mean(sm.mean_turning_angle)),
            "path_ratio_mean": float(np.mean(ratios)) if ratios else None,
        }
    rates = analysis.lmate_variation(trace)
    record["lmate_switch_rate"] = float(np.mean(rates))
    return record


def execute(
    config: ExperimentConfig,
    *,
    out_dir: Optional[str] = None,
    seed_override: Optional[list] = None,
    quiet: bool = False,
    lane: Optional[str] = None,
) -> list[RunResult]:
    """Run every (sweep value, seed) combination and write the output files."""
    from .render import render_paths  # local import: keeps runner importable alone

    target = out_dir if out_dir is not None else config.out_dir
    os.makedirs(target, exist_ok=True)
    seeds = seed_override if seed_override is not None else config.seeds
    sweep_values = config.sweep[1] if config.sweep else [None]
    sweep_param = config.sweep[0] if config.sweep else None

    results = []
    for value in sweep_values:
        for seed in seeds:
            scenario = config.scenario(seed, sweep_value=value)
            trace = simulate(scenario, lane=lane)
            summary = summarize_trace(trace, config.capture_min_count)
            if sweep_param is not None:
                summary["sweep"] = {sweep_param: value}
            results.append(
                RunResult(seed=seed, sweep_value=value, trace=trace, summary=summary)
            )
            sweep_tag = (sweep_param, value) if sweep_param is not None else None
            fname = trace_filename(config.name, seed, sweep_tag)
            if config.emit_trace:
                write_atomic(os.path.join(target, fname), trace_to_bytes(trace))
            if config.emit_svg:
                svg = render_paths(trace)
                write_atomic(
                    os.path.join(target, fname[: -len(".csv")] + ".svg"), svg
                )
            if not quiet:
                tag = f" {sweep_param}={value}" if sweep_param is not None else ""
                print(f"ran {config.name}{tag} seed={seed} -> {fname}")

    if config.emit_summary:
        payload = "".join(
            json.dumps(r.summary, sort_keys=True) + "\n" for r in results
        )
        write_atomic(
            os.path.join(target, f"{config.name}__summary.jsonl"),
            payload.encode("utf-8"),
        )
    return results
