"""Trace file format: CSV body with a commented metadata header.

Layout:
    # bmo-trace v1
    # meta: {...one-line JSON: params, seed, field spec, bounds, ...}
    iter,agent_id,x0,x1[,x2],fitness_true,fitness_meas,uv,lmate
    0,0,...

Floats are printed with 17 significant digits so parsing returns the
exact same doubles; a written trace re-read and re-written is therefore
byte-identical. The lmate column is empty when an agent has none.
"""

from __future__ import annotations

import json

import numpy as np

from .errors import ContractViolation
from .params import BmoParams
from .state import NO_MATE, IterationRecord, RunTrace

FORMAT_LINE = "# bmo-trace v1"
META_PREFIX = "# meta: "


def _fmt(x: float) -> str:
    return "%.17g" % x


def trace_to_text(trace: RunTrace) -> str:
    dim = trace.dim
    meta = {
        "schema_version": 1,
        "scenario_name": trace.scenario_name,
        "seed": trace.seed,
        "params": trace.params.to_dict(),
        "field": trace.field_spec,
        "bounds": trace.bounds.tolist(),
        "sensor_sigma": trace.sensor_sigma,
        "capture_radius": trace.capture_radius,
        "n_agents": trace.n_agents,
        "dim": dim,
        "n_steps": trace.n_steps,
    }
    lines = [FORMAT_LINE, META_PREFIX + json.dumps(meta, sort_keys=True)]
    cols = ["iter", "agent_id"]
    cols += [f"x{k}" for k in range(dim)]
    cols += ["fitness_true", "fitness_meas", "uv", "lmate"]
    lines.append(",".join(cols))
    for rec in trace.records:
        for i in range(trace.n_agents):
            row = [str(rec.iter), str(i)]
            row += [_fmt(rec.positions[i, k]) for k in range(dim)]
            row.append(_fmt(rec.fitness_true[i]))
            row.append(_fmt(rec.fitness_meas[i]))
            row.append(_fmt(rec.uv[i]))
            m = int(rec.lmates[i])
            row.append("" if m == NO_MATE else str(m))
            lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def trace_to_bytes(trace: RunTrace) -> bytes:
    return trace_to_text(trace).encode("utf-8")


def write_trace(trace: RunTrace, path) -> None:
    with open(path, "wb") as fh:
        fh.write(trace_to_bytes(trace))


def parse_trace(text: str) -> RunTrace:
    lines = text.splitlines()
    if not lines or lines[0] != FORMAT_LINE:
        raise ContractViolation("not a bmo trace: missing format line")
    if len(lines) < 3 or not lines[1].startswith(META_PREFIX):
        raise ContractViolation("not a bmo trace: missing metadata line")
    meta = json.loads(lines[1][len(META_PREFIX):])
    dim = meta["dim"]
    n = meta["n_agents"]

    header = lines[2].split(",")
    expected = (
        ["iter", "agent_id"]
        + [f"x{k}" for k in range(dim)]
        + ["fitness_true", "fitness_meas", "uv", "lmate"]
    )
    if header != expected:
        raise ContractViolation(f"unexpected trace columns: {header}")

    data_rows = [ln.split(",") for ln in lines[3:] if ln]
    if len(data_rows) % n != 0:
        raise ContractViolation("trace row count is not a multiple of n_agents")

    trace = RunTrace(
        params=BmoParams(**meta["params"]),
        seed=meta["seed"],
        field_spec=meta["field"],
        bounds=np.array(meta["bounds"], dtype=np.float64),
        sensor_sigma=meta["sensor_sigma"],
        capture_radius=meta["capture_radius"],
        scenario_name=meta["scenario_name"],
    )
    for start in range(0, len(data_rows), n):
        block = data_rows[start : start + n]
        it = int(block[0][0])
        positions = np.empty((n, dim))
        f_true = np.empty(n)
        f_meas = np.empty(n)
        uv = np.empty(n)
        lmates = np.empty(n, dtype=np.int64)
        for row in block:
            i = int(row[1])
            if int(row[0]) != it:
                raise ContractViolation("interleaved iterations in trace body")
            for k in range(dim):
                positions[i, k] = float(row[2 + k])
            f_true[i] = float(row[2 + dim])
            f_meas[i] = float(row[3 + dim])
            uv[i] = float(row[4 + dim])
            lmates[i] = NO_MATE if row[5 + dim] == "" else int(row[5 + dim])
        trace.records.append(
            IterationRecord(
                iter=it,
                positions=positions,
                fitness_true=f_true,
                fitness_meas=f_meas,
                uv=uv,
                lmates=lmates,
            )
        )
    if len(trace.records) != meta["n_steps"] + 1:
        raise ContractViolation(
            f"trace claims {meta['n_steps']} steps but holds {len(trace.records) - 1}"
        )
    return trace


def read_trace(path) -> RunTrace:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_trace(fh.read())


def traces_equal(a: RunTrace, b: RunTrace) -> bool:
    """Exact equality of metadata and every recorded value."""
    if (
        a.params != b.params
        or a.seed != b.seed
        or a.field_spec != b.field_spec
        or not np.array_equal(a.bounds, b.bounds)
        or a.sensor_sigma != b.sensor_sigma
        or a.capture_radius != b.capture_radius
        or a.scenario_name != b.scenario_name
        or len(a) != len(b)
    ):
        return False
    for ra, rb in zip(a.records, b.records):
        if ra.iter != rb.iter:
            return False
        for fa, fb in (
            (ra.positions, rb.positions),
            (ra.fitness_true, rb.fitness_true),
            (ra.fitness_meas, rb.fitness_meas),
            (ra.uv, rb.uv),
            (ra.lmates, rb.lmates),
        ):
            if not np.array_equal(fa, fb):
                return False
    return True
