"""Time-dependent scalar fitness fields.

Two families: analytic multimodal benchmarks with known peaks (sums of
Gaussians, Himmelblau) and luminescent point-source superpositions with
optional motion (step relocation or constant drift). Fields are immutable
after construction; ``eval(x, t)`` is reentrant and returns a finite
value >= 0 for every in-bounds position and integer time step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .errors import ContractViolation

# Offset added to the negated Himmelblau polynomial so its four roots
# become maxima of value HIMMELBLAU_OFFSET; values below 0 clamp to 0.
HIMMELBLAU_OFFSET = 200.0

# The four roots of the Himmelblau polynomial, to double precision.
HIMMELBLAU_PEAKS = (
    (3.0, 2.0),
    (-2.805118086952745, 3.131312518250573),
    (-3.779310253377747, -3.2831859912861696),
    (3.5844283403304917, -1.8481265269644036),
)


def make_bounds(spec: Sequence) -> np.ndarray:
    """Normalize [(lo, hi), ...] into a validated (dim, 2) float array."""
    bounds = np.asarray(spec, dtype=np.float64)
    if bounds.ndim != 2 or bounds.shape[1] != 2 or bounds.shape[0] not in (2, 3):
        raise ContractViolation(
            f"bounds must be (dim, 2) with dim 2 or 3, got shape {bounds.shape}"
        )
    if not (bounds[:, 0] < bounds[:, 1]).all():
        raise ContractViolation("each bounds axis needs lo < hi")
    return bounds


def bounds_diagonal(bounds) -> float:
    bounds = np.asarray(bounds, dtype=np.float64)
    return float(np.sqrt(((bounds[:, 1] - bounds[:, 0]) ** 2).sum()))


def _inside(point, bounds: np.ndarray) -> bool:
    p = np.asarray(point, dtype=np.float64)
    return bool((p >= bounds[:, 0]).all() and (p <= bounds[:, 1]).all())


@dataclass(frozen=True)
class FitnessField:
    """A scalar signal landscape the swarm senses.

    known_peaks(t) returns the local-maximum positions at step t, or None
    when the construction cannot vouch for them (e.g. overlapping lobes).
    ``spec`` is a plain serializable dict identifying the field; it is
    embedded in trace files so runs stay self-describing.
    """

    dimension: int
    bounds: np.ndarray
    eval: Callable[[Sequence[float], int], float]
    known_peaks: Callable[[int], Optional[list]]
    name: str
    spec: dict
    max_value: float


# --------------------------------------------------------- constructors


def gaussian_peaks_field(
    centers: Sequence, amplitudes: Sequence, sigma: float, bounds
) -> FitnessField:
    """Sum of isotropic Gaussian lobes: J(x) = sum_k a_k exp(-|x-c_k|^2 / sigma^2).

    The centers are reported as known peaks only when every pair is
    separated by more than 3*sigma, i.e. when the lobes cannot shift each
    other's maxima materially.
    """
    bounds = make_bounds(bounds)
    ctr = np.asarray(centers, dtype=np.float64)
    amp = np.asarray(amplitudes, dtype=np.float64)
    if ctr.ndim != 2 or ctr.shape[1] != bounds.shape[0]:
        raise ContractViolation("centers must be (k, dim) matching bounds")
    if amp.shape != (ctr.shape[0],):
        raise ContractViolation(
            f"need one amplitude per center: {ctr.shape[0]} centers, "
            f"{amp.shape[0]} amplitudes"
        )
    if not (amp > 0).all():
        raise ContractViolation("amplitudes must be > 0")
    if not sigma > 0:
        raise ContractViolation("sigma must be > 0")
    for c in ctr:
        if not _inside(c, bounds):
            raise ContractViolation(f"center {c.tolist()} outside bounds")

    dim = bounds.shape[0]
    centers_l = ctr.tolist()
    amps_l = amp.tolist()
    sigma2 = sigma * sigma

    def evaluate(x, t: int) -> float:
        total = 0.0
        for c, a in zip(centers_l, amps_l):
            acc = 0.0
            for k in range(dim):
                d = x[k] - c[k]
                acc += d * d
            total += a * math.exp(-acc / sigma2)
        return total

    separated = True
    for i in range(len(centers_l)):
        for j in range(i + 1, len(centers_l)):
            if math.dist(centers_l[i], centers_l[j]) <= 3.0 * sigma:
                separated = False

    def peaks(t: int):
        if not separated:
            return None
        return [np.array(c) for c in centers_l]

    return FitnessField(
        dimension=dim,
        bounds=bounds,
        eval=evaluate,
        known_peaks=peaks,
        name="gaussian_peaks",
        spec={
            "kind": "gaussian_peaks",
            "centers": centers_l,
            "amplitudes": amps_l,
            "sigma": float(sigma),
            "bounds": bounds.tolist(),
        },
        max_value=float(amp.sum()),
    )


def default_three_peak_field() -> FitnessField:
    """The stock 3-peak layout used by the multimodal capture experiments."""
    return gaussian_peaks_field(
        centers=[(-2.0, -2.0), (2.0, -2.0), (0.0, 2.0)],
        amplitudes=[1.0, 1.0, 1.0],
        sigma=0.8,
        bounds=[(-4.0, 4.0), (-4.0, 4.0)],
    )


def himmelblau_field(bounds=None) -> FitnessField:
    """Four-peak benchmark: J = max(0, offset - H(x, y)) with H Himmelblau."""
    bounds = make_bounds(bounds if bounds is not None else [(-6.0, 6.0), (-6.0, 6.0)])
    if bounds.shape[0] != 2:
        raise ContractViolation("himmelblau_field is two-dimensional")

    def evaluate(x, t: int) -> float:
        a = x[0] * x[0] + x[1] - 11.0
        b = x[0] + x[1] * x[1] - 7.0
        v = HIMMELBLAU_OFFSET - (a * a + b * b)
        return v if v > 0.0 else 0.0

    def peaks(t: int):
        return [np.array(p) for p in HIMMELBLAU_PEAKS]

    return FitnessField(
        dimension=2,
        bounds=bounds,
        eval=evaluate,
        known_peaks=peaks,
        name="himmelblau",
        spec={"kind": "himmelblau", "bounds": bounds.tolist()},
        max_value=HIMMELBLAU_OFFSET,
    )


# ------------------------------------------------------- point sources


@dataclass(frozen=True)
class Static:
    kind: str = "static"


@dataclass(frozen=True)
class RelocateAt:
    """Step change: the source jumps to ``to`` at step t and stays."""

    t: int
    to: tuple
    kind: str = "relocate_at"


@dataclass(frozen=True)
class Linear:
    """Constant drift: position(t) = start + velocity * t, clamped to bounds."""

    velocity: tuple
    kind: str = "linear"


Motion = Union[Static, RelocateAt, Linear]


@dataclass(frozen=True)
class SourceSpec:
    """One luminescent point source with inverse-square-with-softening falloff."""

    intensity: float
    position: tuple
    kappa: float
    motion: Motion = Static()

    def __post_init__(self):
        if not self.intensity > 0:
            raise ContractViolation("source intensity must be > 0")
        if not self.kappa > 0:
            raise ContractViolation("source kappa must be > 0")
        object.__setattr__(self, "position", tuple(float(v) for v in self.position))

    def position_at(self, t: int, bounds: np.ndarray) -> tuple:
        m = self.motion
        if isinstance(m, Static):
            return self.position
        if isinstance(m, RelocateAt):
            return tuple(float(v) for v in m.to) if t >= m.t else self.position
        if isinstance(m, Linear):
            out = []
            for k in range(len(self.position)):
                v = self.position[k] + m.velocity[k] * t
                lo, hi = bounds[k, 0], bounds[k, 1]
                out.append(float(min(hi, max(lo, v))))
            return tuple(out)
        raise ContractViolation(f"unknown motion {m!r}")

    def motion_dict(self) -> dict:
        m = self.motion
        if isinstance(m, Static):
            return {"kind": "static"}
        if isinstance(m, RelocateAt):
            return {"kind": "relocate_at", "t": m.t, "to": list(m.to)}
        return {"kind": "linear", "velocity": list(m.velocity)}


def point_source_field(sources: Sequence[SourceSpec], bounds) -> FitnessField:
    """Superposed sources: J(x, t) = sum_k I_k / (1 + kappa_k * |x - p_k(t)|^2).

    Source positions double as known peaks whenever every pair of sources
    sits further apart than 3/sqrt(kappa) (using the softer of the two
    falloffs), evaluated at the queried step for moving sources.
    """
    bounds = make_bounds(bounds)
    sources = tuple(sources)
    if not sources:
        raise ContractViolation("need at least one source")
    dim = bounds.shape[0]
    for s in sources:
        if len(s.position) != dim:
            raise ContractViolation("source position dimension mismatch")
        if not _inside(s.position, bounds):
            raise ContractViolation(f"source at {s.position} outside bounds")
        if isinstance(s.motion, RelocateAt) and not _inside(s.motion.to, bounds):
            raise ContractViolation(
                f"relocation target {s.motion.to} outside bounds"
            )

    def evaluate(x, t: int) -> float:
        total = 0.0
        for s in sources:
            p = s.position_at(t, bounds)
            acc = 0.0
            for k in range(dim):
                d = x[k] - p[k]
                acc += d * d
            total += s.intensity / (1.0 + s.kappa * acc)
        return total

    def peaks(t: int):
        positions = [s.position_at(t, bounds) for s in sources]
        for i in range(len(sources)):
            for j in range(i + 1, len(sources)):
                kap = min(sources[i].kappa, sources[j].kappa)
                if math.dist(positions[i], positions[j]) <= 3.0 / math.sqrt(kap):
                    return None
        return [np.array(p) for p in positions]

    return FitnessField(
        dimension=dim,
        bounds=bounds,
        eval=evaluate,
        known_peaks=peaks,
        name="point_sources",
        spec={
            "kind": "point_sources",
            "sources": [
                {
                    "intensity": s.intensity,
                    "position": list(s.position),
                    "kappa": s.kappa,
                    "motion": s.motion_dict(),
                }
                for s in sources
            ],
            "bounds": bounds.tolist(),
        },
        max_value=float(sum(s.intensity for s in sources)),
    )
