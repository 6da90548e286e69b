"""Butterfly Mating Optimization: niching kernel, BflyBot simulator, analysis."""

from . import analysis, fields, kernel, sim
from .errors import BmoError, ConfigError, ContractViolation, FieldEvaluationError
from .fields import (
    FitnessField,
    Linear,
    RelocateAt,
    SourceSpec,
    Static,
    default_three_peak_field,
    gaussian_peaks_field,
    himmelblau_field,
    point_source_field,
)
from .params import BmoParams
from .sim import Scenario, co_location_time, simulate
from .state import Bfly, IterationRecord, ReceivedUv, RunTrace, SimTrace, SwarmState

__version__ = "0.1.0"

__all__ = [
    "BmoError",
    "BmoParams",
    "Bfly",
    "ConfigError",
    "ContractViolation",
    "FieldEvaluationError",
    "FitnessField",
    "IterationRecord",
    "Linear",
    "ReceivedUv",
    "RelocateAt",
    "RunTrace",
    "Scenario",
    "SimTrace",
    "SourceSpec",
    "Static",
    "SwarmState",
    "analysis",
    "co_location_time",
    "default_three_peak_field",
    "fields",
    "gaussian_peaks_field",
    "himmelblau_field",
    "kernel",
    "point_source_field",
    "sim",
    "simulate",
]
