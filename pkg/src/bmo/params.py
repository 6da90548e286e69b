"""Algorithm constants and run controls."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, asdict

from .errors import ContractViolation

SELECTION_MODES = ("deterministic", "stochastic")


@dataclass(frozen=True)
class BmoParams:
    """Everything that parameterizes one run of the algorithm.

    rho:       UV decay per iteration, in [0, 1].
    gamma:     gain applied to the sensed fitness when updating UV, > 0.
    lambda_d:  decay length of the UV distribution kernel, position units, > 0.
    step_size: distance moved toward the chosen l-mate per iteration, >= 0.
    n_agents / max_iters / seed: run controls.
    selection_mode: "deterministic" (argmax of received UV) or "stochastic"
        (roulette wheel over received UV).
    fitness_eps: minimum fitness margin a candidate l-mate must hold, >= 0.
    """

    rho: float = 0.4
    gamma: float = 0.6
    lambda_d: float = 1.0
    step_size: float = 0.05
    n_agents: int = 4
    max_iters: int = 500
    seed: int = 0
    selection_mode: str = "stochastic"
    fitness_eps: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.rho <= 1.0:
            raise ContractViolation(f"rho must be in [0, 1], got {self.rho}")
        if not self.gamma > 0.0:
            raise ContractViolation(f"gamma must be > 0, got {self.gamma}")
        if not self.lambda_d > 0.0:
            raise ContractViolation(f"lambda_d must be > 0, got {self.lambda_d}")
        if not self.step_size >= 0.0:
            raise ContractViolation(f"step_size must be >= 0, got {self.step_size}")
        if self.n_agents < 1:
            raise ContractViolation(f"n_agents must be >= 1, got {self.n_agents}")
        if self.max_iters < 0:
            raise ContractViolation(f"max_iters must be >= 0, got {self.max_iters}")
        if not 0 <= self.seed < 2**64:
            raise ContractViolation(f"seed must fit in 64 unsigned bits, got {self.seed}")
        if self.selection_mode not in SELECTION_MODES:
            raise ContractViolation(
                f"selection_mode must be one of {SELECTION_MODES}, got {self.selection_mode!r}"
            )
        if not self.fitness_eps >= 0.0:
            raise ContractViolation(f"fitness_eps must be >= 0, got {self.fitness_eps}")

    def replace(self, **changes) -> "BmoParams":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        return asdict(self)
