"""Swarm state snapshots and run traces.

Internally the swarm is stored as flat numpy arrays (one row per agent);
``Bfly`` objects are read-only per-agent views for inspection and tests.
The l-mate column uses -1 for "no l-mate".
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ContractViolation
from .params import BmoParams

NO_MATE = -1


@dataclass(frozen=True)
class Bfly:
    """One agent: position, accumulated UV, last sensed fitness, l-mate."""

    id: int
    position: np.ndarray
    uv: float
    fitness: float
    lmate: Optional[int]


@dataclass
class SwarmState:
    """Synchronized snapshot of the whole swarm at one iteration.

    positions: (n, dim) float64, uv/fitness: (n,) float64,
    lmates: (n,) int64, -1 where an agent has no l-mate.
    """

    iter: int
    positions: np.ndarray
    uv: np.ndarray
    fitness: np.ndarray
    lmates: np.ndarray

    def __post_init__(self):
        self.positions = np.ascontiguousarray(self.positions, dtype=np.float64)
        self.uv = np.ascontiguousarray(self.uv, dtype=np.float64)
        self.fitness = np.ascontiguousarray(self.fitness, dtype=np.float64)
        self.lmates = np.ascontiguousarray(self.lmates, dtype=np.int64)
        n = self.positions.shape[0]
        if self.positions.ndim != 2:
            raise ContractViolation("positions must be a (n_agents, dim) array")
        for name, arr in (("uv", self.uv), ("fitness", self.fitness), ("lmates", self.lmates)):
            if arr.shape != (n,):
                raise ContractViolation(f"{name} must have shape ({n},), got {arr.shape}")

    @property
    def n_agents(self) -> int:
        return self.positions.shape[0]

    @property
    def dim(self) -> int:
        return self.positions.shape[1]

    @property
    def agents(self) -> list[Bfly]:
        return [
            Bfly(
                id=i,
                position=self.positions[i].copy(),
                uv=float(self.uv[i]),
                fitness=float(self.fitness[i]),
                lmate=None if self.lmates[i] == NO_MATE else int(self.lmates[i]),
            )
            for i in range(self.n_agents)
        ]

    def copy(self) -> "SwarmState":
        return SwarmState(
            iter=self.iter,
            positions=self.positions.copy(),
            uv=self.uv.copy(),
            fitness=self.fitness.copy(),
            lmates=self.lmates.copy(),
        )

    @staticmethod
    def initial(positions: np.ndarray, uv0: float = 0.0) -> "SwarmState":
        positions = np.ascontiguousarray(positions, dtype=np.float64)
        n = positions.shape[0]
        return SwarmState(
            iter=0,
            positions=positions,
            uv=np.full(n, float(uv0)),
            fitness=np.zeros(n),
            lmates=np.full(n, NO_MATE, dtype=np.int64),
        )


@dataclass(frozen=True)
class ReceivedUv:
    """r[i, j] = UV of agent j as it arrives at agent i after distance decay."""

    r: np.ndarray

    def __post_init__(self):
        if self.r.ndim != 2 or self.r.shape[0] != self.r.shape[1]:
            raise ContractViolation("received UV must be a square matrix")


@dataclass(frozen=True)
class IterationRecord:
    """Post-step snapshot: positions and the values that produced them.

    fitness_true/fitness_meas hold the field values sensed during the step
    (at the pre-move positions); for noise-free runs the two are identical.
    """

    iter: int
    positions: np.ndarray
    fitness_true: np.ndarray
    fitness_meas: np.ndarray
    uv: np.ndarray
    lmates: np.ndarray


@dataclass
class RunTrace:
    """Append-only per-iteration history of one run.

    records[0] is the initial state (no movement, no l-mates); records[t]
    is the swarm after step t. Carries enough metadata to be re-run and
    re-analyzed: params, seed, and the field's identity dict.
    """

    params: BmoParams
    seed: int
    field_spec: dict
    bounds: np.ndarray
    records: list[IterationRecord] = field(default_factory=list)
    sensor_sigma: float = 0.0
    capture_radius: Optional[float] = None
    scenario_name: Optional[str] = None

    def __len__(self) -> int:
        return len(self.records)

    @property
    def n_agents(self) -> int:
        return self.records[0].positions.shape[0]

    @property
    def dim(self) -> int:
        return self.records[0].positions.shape[1]

    @property
    def n_steps(self) -> int:
        return len(self.records) - 1

    def positions_over_time(self) -> np.ndarray:
        """(n_records, n_agents, dim) stack of positions."""
        return np.stack([rec.positions for rec in self.records])

    def uv_over_time(self) -> np.ndarray:
        return np.stack([rec.uv for rec in self.records])

    def fitness_true_over_time(self) -> np.ndarray:
        return np.stack([rec.fitness_true for rec in self.records])

    def fitness_meas_over_time(self) -> np.ndarray:
        return np.stack([rec.fitness_meas for rec in self.records])

    def lmates_over_time(self) -> np.ndarray:
        return np.stack([rec.lmates for rec in self.records])

    def final(self) -> IterationRecord:
        return self.records[-1]


# A simulator trace is a RunTrace whose fitness_meas channel carries the
# noisy sensor readings; the alias keeps call sites self-explanatory.
SimTrace = RunTrace
