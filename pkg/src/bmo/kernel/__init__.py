"""Deterministic BMO kernel: the four phases and their composition.

One iteration runs (a) UV update from sensed fitness, (b) UV distribution
with exponential distance decay, (c) l-mate selection among
superior-fitness agents weighted by received UV, (d) a fixed-size step
toward the chosen l-mate with snap-on-arrival. All phases read the
start-of-step position snapshot; the distribution broadcasts the
freshly updated UV.

Two interchangeable lanes execute the fused step: a compiled extension
(``cython``) and a pure-Python fallback (``python``). They are bit-exact
equals; the compiled lane is simply faster. Lane choice is automatic at
import, can be forced per call via ``lane=``, or globally with the
BMO_KERNEL_LANE environment variable.
"""

from __future__ import annotations

import math
import os
from typing import Callable, Optional, Sequence

import numpy as np

from ..errors import ContractViolation, FieldEvaluationError
from ..params import BmoParams
from ..rng import STREAM_INIT, STREAM_SELECT, Xoshiro256StarStar, stream
from ..state import NO_MATE, IterationRecord, ReceivedUv, RunTrace, SwarmState
from . import _pykernel

try:
    from . import _ckernel
except ImportError:  # extension not built; pure-Python lane still works
    _ckernel = None

_LANES: dict[str, Callable] = {"python": _pykernel.step_arrays}
if _ckernel is not None:
    _LANES["cython"] = _ckernel.step_arrays


def available_lanes() -> tuple[str, ...]:
    return tuple(sorted(_LANES))


def default_lane() -> str:
    forced = os.environ.get("BMO_KERNEL_LANE")
    if forced:
        if forced not in _LANES:
            raise ContractViolation(
                f"BMO_KERNEL_LANE={forced!r} is not available (have {available_lanes()})"
            )
        return forced
    return "cython" if "cython" in _LANES else "python"


def _step_fn(lane: Optional[str]) -> Callable:
    if lane is None:
        lane = default_lane()
    try:
        return _LANES[lane]
    except KeyError:
        raise ContractViolation(
            f"unknown kernel lane {lane!r} (have {available_lanes()})"
        ) from None


# ---------------------------------------------------------------- phases


def uv_update(state: SwarmState, fitness, params: BmoParams) -> np.ndarray:
    """Phase (a): new_uv[i] = (1 - rho)*uv[i] + gamma*fitness[i]."""
    fit = np.asarray(fitness, dtype=np.float64)
    if fit.shape != (state.n_agents,):
        raise ContractViolation(
            f"fitness must have shape ({state.n_agents},), got {fit.shape}"
        )
    out = _pykernel.uv_update_lists(
        state.uv.tolist(), fit.tolist(), params.rho, params.gamma
    )
    return np.array(out, dtype=np.float64)


def uv_distribution(state: SwarmState, params: BmoParams) -> ReceivedUv:
    """Phase (b): r[i, j] = uv_j * exp(-d_ij / lambda_d)."""
    pos = state.positions.tolist()
    dist = _pykernel.distance_matrix_lists(pos)
    r = _pykernel.received_lists(dist, state.uv.tolist(), params.lambda_d)
    return ReceivedUv(r=np.array(r, dtype=np.float64))


def lmate_select(
    agent_index: int,
    state: SwarmState,
    received: ReceivedUv,
    rng: Optional[Xoshiro256StarStar],
    params: BmoParams,
) -> Optional[int]:
    """Phase (c) for one agent; returns the chosen l-mate id or None.

    In stochastic mode this consumes exactly one uniform draw from ``rng``
    whether or not a candidate exists, so the stream position depends only
    on how many selections ran, never on the swarm's values.
    """
    if not 0 <= agent_index < state.n_agents:
        raise ContractViolation(
            f"agent_index {agent_index} out of range for {state.n_agents} agents"
        )
    stochastic = params.selection_mode == "stochastic"
    if stochastic:
        if rng is None:
            raise ContractViolation("stochastic selection requires an rng")
        u = rng.uniform()
    else:
        u = 0.0
    picked = _pykernel.select_one(
        agent_index,
        state.fitness.tolist(),
        received.r[agent_index].tolist(),
        params.fitness_eps,
        stochastic,
        u,
    )
    return None if picked == NO_MATE else picked


def movement(state: SwarmState, lmates, bounds, params: BmoParams) -> np.ndarray:
    """Phase (d): step toward the l-mate, snap if within reach, clamp to bounds.

    ``lmates[i]`` may be None or -1 for agents that stay put.
    """
    bounds = np.asarray(bounds, dtype=np.float64)
    pos = state.positions.tolist()
    lo = bounds[:, 0].tolist()
    hi = bounds[:, 1].tolist()
    new_pos = []
    for i in range(state.n_agents):
        m = lmates[i]
        m = NO_MATE if m is None else int(m)
        if m == i:
            raise ContractViolation(f"agent {i} cannot be its own l-mate")
        if m == NO_MATE:
            moved = list(pos[i])
        else:
            if not 0 <= m < state.n_agents:
                raise ContractViolation(f"l-mate id {m} out of range")
            acc = 0.0
            for k in range(state.dim):
                t = pos[i][k] - pos[m][k]
                acc += t * t
            d = math.sqrt(acc)
            moved = _pykernel.move_one(pos[i], pos[m], d, params.step_size)
        new_pos.append(_pykernel.clamp_one(moved, lo, hi))
    return np.array(new_pos, dtype=np.float64)


# ------------------------------------------------------------- stepping


def _evaluate_fitness(field, positions: np.ndarray, t: int) -> np.ndarray:
    """True field values at every agent, checked finite and clamped at 0."""
    values = np.empty(positions.shape[0], dtype=np.float64)
    rows = positions.tolist()
    for i, row in enumerate(rows):
        v = field.eval(row, t)
        if not math.isfinite(v):
            raise FieldEvaluationError(
                f"non-finite field value {v!r} for agent {i} at position "
                f"{tuple(row)}, t={t}"
            )
        values[i] = v if v > 0.0 else 0.0
    return values


def bmo_step(
    state: SwarmState,
    field,
    rng: Optional[Xoshiro256StarStar],
    params: BmoParams,
    *,
    sensor: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    t: Optional[int] = None,
    lane: Optional[str] = None,
) -> tuple[SwarmState, IterationRecord]:
    """Run one synchronous iteration; returns (new state, its record).

    Fitness is sensed at the current positions (through ``sensor`` when
    given, e.g. to add measurement noise), then the four phases run from
    that snapshot. ``rng`` feeds stochastic selection only: one uniform
    per agent, in id order.
    """
    if t is None:
        t = state.iter + 1
    fitness_true = _evaluate_fitness(field, state.positions, t)
    if sensor is not None:
        fitness_meas = np.asarray(sensor(fitness_true), dtype=np.float64)
        if fitness_meas.shape != fitness_true.shape:
            raise ContractViolation("sensor must return one value per agent")
    else:
        fitness_meas = fitness_true

    stochastic = params.selection_mode == "stochastic"
    if stochastic:
        if rng is None:
            raise ContractViolation("stochastic selection requires an rng")
        uniforms = np.array(
            [rng.uniform() for _ in range(state.n_agents)], dtype=np.float64
        )
    else:
        uniforms = None

    bounds = np.asarray(field.bounds, dtype=np.float64)
    new_uv, lmates, new_pos = _step_fn(lane)(
        state.positions,
        state.uv,
        fitness_meas,
        uniforms,
        stochastic,
        params.rho,
        params.gamma,
        params.lambda_d,
        params.step_size,
        params.fitness_eps,
        np.ascontiguousarray(bounds[:, 0]),
        np.ascontiguousarray(bounds[:, 1]),
    )

    new_state = SwarmState(
        iter=state.iter + 1,
        positions=new_pos,
        uv=new_uv,
        fitness=fitness_meas.copy(),
        lmates=lmates,
    )
    record = IterationRecord(
        iter=new_state.iter,
        positions=new_pos.copy(),
        fitness_true=fitness_true,
        fitness_meas=fitness_meas.copy(),
        uv=new_uv.copy(),
        lmates=lmates.copy(),
    )
    return new_state, record


def initial_positions(
    field, params: BmoParams, init: Optional[Sequence] = None
) -> np.ndarray:
    """Resolve the initial placement: explicit list or seeded uniform."""
    bounds = np.asarray(field.bounds, dtype=np.float64)
    dim = bounds.shape[0]
    if init is not None:
        pos = np.ascontiguousarray(init, dtype=np.float64)
        if pos.shape != (params.n_agents, dim):
            raise ContractViolation(
                f"explicit init must have shape ({params.n_agents}, {dim}), "
                f"got {pos.shape}"
            )
        inside = (pos >= bounds[:, 0]) & (pos <= bounds[:, 1])
        if not inside.all():
            bad = int(np.nonzero(~inside.all(axis=1))[0][0])
            raise ContractViolation(
                f"explicit init position for agent {bad} is outside bounds: "
                f"{pos[bad].tolist()}"
            )
        return pos
    rng = stream(params.seed, STREAM_INIT)
    lo = bounds[:, 0].tolist()
    hi = bounds[:, 1].tolist()
    pos = np.empty((params.n_agents, dim), dtype=np.float64)
    for i in range(params.n_agents):
        for k in range(dim):
            pos[i, k] = lo[k] + rng.uniform() * (hi[k] - lo[k])
    return pos


def run(
    field,
    params: BmoParams,
    init: Optional[Sequence] = None,
    *,
    sensor: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    lane: Optional[str] = None,
    sensor_sigma: float = 0.0,
    capture_radius: Optional[float] = None,
    scenario_name: Optional[str] = None,
) -> RunTrace:
    """Execute a full run: initial record plus exactly max_iters steps.

    The initial record (iter 0) holds the starting placement with UV 0,
    no l-mates, and noise-free fitness at t=0. Identical (field, params,
    init) always produce an identical trace, whatever lane executes it.
    """
    positions = initial_positions(field, params, init)
    state = SwarmState.initial(positions)
    fitness0 = _evaluate_fitness(field, positions, 0)
    state.fitness = fitness0.copy()

    trace = RunTrace(
        params=params,
        seed=params.seed,
        field_spec=dict(field.spec),
        bounds=np.asarray(field.bounds, dtype=np.float64).copy(),
        sensor_sigma=sensor_sigma,
        capture_radius=capture_radius,
        scenario_name=scenario_name,
    )
    trace.records.append(
        IterationRecord(
            iter=0,
            positions=positions.copy(),
            fitness_true=fitness0,
            fitness_meas=fitness0.copy(),
            uv=state.uv.copy(),
            lmates=state.lmates.copy(),
        )
    )

    select_rng = (
        stream(params.seed, STREAM_SELECT)
        if params.selection_mode == "stochastic"
        else None
    )
    for _ in range(params.max_iters):
        state, record = bmo_step(
            state, field, select_rng, params, sensor=sensor, lane=lane
        )
        trace.records.append(record)
    return trace
