"""Figures of merit computed from run traces.

Everything here is a pure function over an immutable trace: peak capture
at the final step, UV/fitness convergence statistics, emergence-path
smoothness, l-mate switch rates, and a single-linkage cluster detector
for when no peak positions are known.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import ContractViolation
from .state import RunTrace


@dataclass(frozen=True)
class CaptureReport:
    """Per-peak head counts within ``radius`` at the final recorded step."""

    peaks: list
    radius: float
    min_count: int
    counts: list
    captured: list
    all_captured: bool

    def to_dict(self) -> dict:
        return {
            "peaks": [list(map(float, p)) for p in self.peaks],
            "radius": self.radius,
            "min_count": self.min_count,
            "counts": list(self.counts),
            "captured": list(self.captured),
            "all_captured": self.all_captured,
        }


@dataclass(frozen=True)
class ConvergenceSeries:
    """Per-iteration mean/min/max/std of UV and of measured fitness."""

    uv_mean: np.ndarray
    uv_min: np.ndarray
    uv_max: np.ndarray
    uv_std: np.ndarray
    fitness_mean: np.ndarray
    fitness_min: np.ndarray
    fitness_max: np.ndarray
    fitness_std: np.ndarray

    def __len__(self) -> int:
        return len(self.uv_mean)


@dataclass(frozen=True)
class SmoothnessReport:
    """Per-agent mean absolute turning angle and path-length ratio.

    ratio is total path length over net displacement, None for agents
    that end where they started.
    """

    mean_turning_angle: list
    path_ratio: list


def peak_capture(
    trace: RunTrace,
    peaks: Sequence,
    radius: float,
    min_count: int,
) -> CaptureReport:
    """Count agents within ``radius`` of each peak at the final step."""
    if len(peaks) == 0:
        raise ContractViolation("peaks must be non-empty")
    if not radius > 0:
        raise ContractViolation("radius must be > 0")
    final = trace.final().positions
    counts = []
    for peak in peaks:
        p = np.asarray(peak, dtype=np.float64)
        d = np.sqrt(((final - p) ** 2).sum(axis=1))
        counts.append(int((d <= radius).sum()))
    captured = [c >= min_count for c in counts]
    return CaptureReport(
        peaks=[np.asarray(p, dtype=np.float64) for p in peaks],
        radius=float(radius),
        min_count=int(min_count),
        counts=counts,
        captured=captured,
        all_captured=all(captured),
    )


def uv_convergence(trace: RunTrace) -> ConvergenceSeries:
    """Exact per-iteration statistics of UV and measured fitness.

    std is the population standard deviation over agents (ddof = 0).
    """
    if len(trace) == 0:
        raise ContractViolation("trace must be non-empty")
    uv = trace.uv_over_time()
    meas = trace.fitness_meas_over_time()
    return ConvergenceSeries(
        uv_mean=uv.mean(axis=1),
        uv_min=uv.min(axis=1),
        uv_max=uv.max(axis=1),
        uv_std=uv.std(axis=1),
        fitness_mean=meas.mean(axis=1),
        fitness_min=meas.min(axis=1),
        fitness_max=meas.max(axis=1),
        fitness_std=meas.std(axis=1),
    )


def path_smoothness(trace: RunTrace) -> SmoothnessReport:
    """Turning angles and path-length ratio of each agent's emergence path.

    Zero-length segments are skipped; the turning angle at each interior
    point is the angle between consecutive non-zero displacement vectors.
    Agents with fewer than two moving segments get angle 0.0.
    """
    pos = trace.positions_over_time()  # (T+1, n, dim)
    if pos.shape[0] < 3:
        raise ContractViolation("path smoothness needs at least 3 recorded positions")
    n = pos.shape[1]
    angles = []
    ratios = []
    for i in range(n):
        pts = pos[:, i, :]
        segs = [
            pts[t + 1] - pts[t]
            for t in range(pts.shape[0] - 1)
            if float(((pts[t + 1] - pts[t]) ** 2).sum()) > 0.0
        ]
        turn_sum = 0.0
        turns = 0
        for a, b in zip(segs, segs[1:]):
            na = math.sqrt(float((a * a).sum()))
            nb = math.sqrt(float((b * b).sum()))
            c = float((a * b).sum()) / (na * nb)
            c = max(-1.0, min(1.0, c))
            turn_sum += math.acos(c)
            turns += 1
        angles.append(turn_sum / turns if turns else 0.0)
        path_len = sum(math.sqrt(float((s * s).sum())) for s in segs)
        disp = math.sqrt(float(((pts[-1] - pts[0]) ** 2).sum()))
        ratios.append(path_len / disp if disp > 0.0 else None)
    return SmoothnessReport(mean_turning_angle=angles, path_ratio=ratios)


def lmate_variation(trace: RunTrace) -> list:
    """Per-agent l-mate switch rate across step records, each in [0, 1].

    A switch is any change between consecutive steps, including gaining or
    losing an l-mate. Traces with fewer than two steps report 0.0.
    """
    lmates = trace.lmates_over_time()[1:]  # step records only
    steps = lmates.shape[0]
    if steps < 2:
        return [0.0] * trace.n_agents
    rates = []
    for i in range(lmates.shape[1]):
        seq = lmates[:, i]
        switches = int((seq[1:] != seq[:-1]).sum())
        rates.append(switches / (steps - 1))
    return rates


def cluster_detect(positions, radius: float) -> list[list[int]]:
    """Single-linkage clusters at threshold ``radius`` (transitive closure).

    Returns a partition of agent indices; clusters are ordered by their
    smallest member, members ascending.
    """
    if not radius > 0:
        raise ContractViolation("radius must be > 0")
    pos = np.asarray(positions, dtype=np.float64)
    n = pos.shape[0]
    parent = list(range(n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i in range(n):
        for j in range(i + 1, n):
            if math.dist(pos[i].tolist(), pos[j].tolist()) <= radius:
                ra, rb = find(i), find(j)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)

    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return [sorted(groups[root]) for root in sorted(groups)]


def centroid_series(trace: RunTrace) -> np.ndarray:
    """(n_records, dim) swarm centroid at every recorded step."""
    return trace.positions_over_time().mean(axis=1)


def centroid_capture_time(
    trace: RunTrace,
    radius: float,
    target,
    start: int = 0,
) -> Optional[int]:
    """First step >= start with the swarm centroid within radius of target."""
    if not radius > 0:
        raise ContractViolation("radius must be > 0")
    tgt = np.asarray(target, dtype=np.float64)
    centers = centroid_series(trace)
    for rec, center in zip(trace.records, centers):
        if rec.iter < start:
            continue
        if math.dist(center.tolist(), tgt.tolist()) <= radius:
            return rec.iter
    return None
