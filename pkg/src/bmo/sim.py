"""BflyBot experiments: the kernel driving point agents with noisy sensing.

Robots are point agents inside a bounded arena; the only sensing is a
scalar luminescence reading with additive Gaussian noise clamped at zero.
With sensor_sigma = 0 a simulation reduces bit-exactly to a plain kernel
run on the same seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from . import kernel
from .errors import ContractViolation
from .fields import FitnessField
from .params import BmoParams
from .rng import STREAM_NOISE, stream
from .state import SimTrace


@dataclass(frozen=True)
class Scenario:
    """One fully specified experiment: field, params, noise, init, capture."""

    name: str
    field: FitnessField
    params: BmoParams
    sensor_sigma: float = 0.0
    init: Optional[Sequence] = None  # explicit (n, dim) positions, or None for seeded uniform
    capture_radius: float = 0.3

    def __post_init__(self):
        if not self.sensor_sigma >= 0.0:
            raise ContractViolation("sensor_sigma must be >= 0")
        if not self.capture_radius > 0.0:
            raise ContractViolation("capture_radius must be > 0")
        if self.init is not None:
            pos = np.asarray(self.init, dtype=np.float64)
            bounds = self.field.bounds
            if pos.ndim != 2 or pos.shape[1] != self.field.dimension:
                raise ContractViolation("init positions must be (n, dim)")
            if not ((pos >= bounds[:, 0]) & (pos <= bounds[:, 1])).all():
                raise ContractViolation("init positions must lie within field bounds")

    def with_params(self, params: BmoParams) -> "Scenario":
        return Scenario(
            name=self.name,
            field=self.field,
            params=params,
            sensor_sigma=self.sensor_sigma,
            init=self.init,
            capture_radius=self.capture_radius,
        )


def simulate(
    scenario: Scenario,
    *,
    seed_override: Optional[int] = None,
    lane: Optional[str] = None,
) -> SimTrace:
    """Run one scenario; the trace records true and measured fitness.

    Measured fitness is max(0, J_true + eps) with eps ~ N(0, sensor_sigma)
    drawn from the run's dedicated noise stream, one draw per agent per
    step in agent-id order. sigma = 0 skips the noise stream entirely, so
    the result is bit-identical to kernel.run on the same seed.
    """
    params = scenario.params
    if seed_override is not None:
        params = params.replace(seed=seed_override)

    sensor = None
    if scenario.sensor_sigma > 0.0:
        sigma = scenario.sensor_sigma
        noise_rng = stream(params.seed, STREAM_NOISE)

        def sensor(fitness_true: np.ndarray) -> np.ndarray:
            out = np.empty_like(fitness_true)
            for i in range(fitness_true.shape[0]):
                v = fitness_true[i] + sigma * noise_rng.normal()
                out[i] = v if v > 0.0 else 0.0
            return out

    return kernel.run(
        scenario.field,
        params,
        init=scenario.init,
        sensor=sensor,
        lane=lane,
        sensor_sigma=scenario.sensor_sigma,
        capture_radius=scenario.capture_radius,
        scenario_name=scenario.name,
    )


def co_location_time(
    trace: SimTrace,
    radius: float,
    target: Union[Sequence, str],
) -> Optional[int]:
    """First step at which every agent is within ``radius`` of the target.

    ``target`` is a position, or "mutual" to measure against the swarm's
    own centroid at each step. Returns None if co-location never happens.
    """
    if not radius > 0:
        raise ContractViolation("radius must be > 0")
    mutual = isinstance(target, str)
    if mutual and target != "mutual":
        raise ContractViolation(f"target must be a position or 'mutual', got {target!r}")
    if not mutual:
        ref = np.asarray(target, dtype=np.float64)
        if ref.shape != (trace.dim,):
            raise ContractViolation("target position dimension mismatch")
    for rec in trace.records:
        center = rec.positions.mean(axis=0) if mutual else ref
        dists = np.sqrt(((rec.positions - center) ** 2).sum(axis=1))
        if (dists <= radius).all():
            return rec.iter
    return None


def two_agent_chain_colocation_steps(
    distance: float, radius: float, step_size: float
) -> int:
    """Closed-form co-location step for the two-agent chain.

    One agent holds still while the other closes min(step_size, d) per
    step; co-location against the still agent at ``radius`` happens at
    ceil((distance - radius) / step_size), floored at 0.
    """
    if distance <= radius:
        return 0
    return math.ceil((distance - radius) / step_size)
