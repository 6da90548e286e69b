"""Pure-Python kernel lane.

This module is the normative arithmetic for one synchronous iteration:
explicit loops over plain floats, no vectorized shortcuts. The compiled
lane (_ckernel) mirrors every expression here operation-for-operation so
both lanes produce bit-identical traces; change one and you must change
the other.

Canonical forms (order of floating-point operations matters):
  uv'      = (1 - rho)*uv + gamma*J
  d_ij     = sqrt(sum_k (x_i[k] - x_j[k])**2), k ascending
  r_ij     = uv'_j * exp(-d_ij / lambda_d)
  movement = x_i[k] + step_size * (x_l[k] - x_i[k]) / d, unless d <= step_size
             in which case the agent lands exactly on x_l.
"""

from __future__ import annotations

import math

import numpy as np

NO_MATE = -1


def uv_update_lists(uv: list, fitness: list, rho: float, gamma: float) -> list:
    return [(1.0 - rho) * uv[i] + gamma * fitness[i] for i in range(len(uv))]


def distance_matrix_lists(pos: list) -> list:
    n = len(pos)
    dim = len(pos[0]) if n else 0
    dist = [[0.0] * n for _ in range(n)]
    for i in range(n):
        pi = pos[i]
        for j in range(n):
            pj = pos[j]
            acc = 0.0
            for k in range(dim):
                t = pi[k] - pj[k]
                acc += t * t
            dist[i][j] = math.sqrt(acc)
    return dist

def received_lists(dist: list, uv: list, lambda_d: float) -> list:
    n = len(uv)
    r = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            r[i][j] = uv[j] * math.exp(-dist[i][j] / lambda_d)
    return r


def select_one(
    i: int,
    fitness: list,
    r_row: list,
    fitness_eps: float,
    stochastic: bool,
    u: float,
) -> int:
    """Pick agent i's l-mate; returns NO_MATE when no candidate exists.

    Candidates are the agents whose fitness beats fitness[i] + fitness_eps,
    walked in ascending id order. Deterministic mode takes the argmax of
    received UV (first wins ties); stochastic mode spins a roulette wheel
    weighted by received UV, falling back to a uniform pick when every
    candidate weight is zero.
    """
    n = len(fitness)
    threshold = fitness[i] + fitness_eps
    candidates = [j for j in range(n) if j != i and fitness[j] > threshold]
    if not candidates:
        return NO_MATE

    if not stochastic:
        best = candidates[0]
        best_r = r_row[best]
        for j in candidates[1:]:
            if r_row[j] > best_r:
                best = j
                best_r = r_row[j]
        return best

    total = 0.0
    for j in candidates:
        total += r_row[j]
    if total > 0.0:
        spin = u * total
        acc = 0.0
        for j in candidates:
            acc += r_row[j]
            if acc > spin:
                return j
        return candidates[-1]  # guard against accumulated rounding
    k = int(u * len(candidates))
    if k >= len(candidates):
        k = len(candidates) - 1
    return candidates[k]


def move_one(pos_i: list, pos_m: list, d: float, step_size: float) -> list:
    if d <= step_size:
        return list(pos_m)
    return [
        pos_i[k] + step_size * (pos_m[k] - pos_i[k]) / d for k in range(len(pos_i))
    ]


def clamp_one(p: list, lo: list, hi: list) -> list:
    out = list(p)
    for k in range(len(out)):
        if out[k] < lo[k]:
            out[k] = lo[k]
        elif out[k] > hi[k]:
            out[k] = hi[k]
    return out


def step_arrays(
    positions: np.ndarray,
    uv: np.ndarray,
    fitness: np.ndarray,
    uniforms,
    stochastic: bool,
    rho: float,
    gamma: float,
    lambda_d: float,
    step_size: float,
    fitness_eps: float,
    lo: np.ndarray,
    hi: np.ndarray,
):
    """One fused iteration over the whole swarm.

    All four phases read the same start-of-step snapshot; the UV
    distribution uses the freshly updated UV values. Returns
    (new_uv, lmates, new_positions) as numpy arrays.
    """
    pos = positions.tolist()
    uv_l = uv.tolist()
    fit = fitness.tolist()
    lo_l = np.asarray(lo, dtype=np.float64).tolist()
    hi_l = np.asarray(hi, dtype=np.float64).tolist()
    n = len(pos)

    new_uv = uv_update_lists(uv_l, fit, rho, gamma)
    dist = distance_matrix_lists(pos)
    r = received_lists(dist, new_uv, lambda_d)

    us = uniforms.tolist() if uniforms is not None else [0.0] * n
    lmates = [
        select_one(i, fit, r[i], fitness_eps, stochastic, us[i]) for i in range(n)
    ]

    new_pos = []
    for i in range(n):
        m = lmates[i]
        if m == NO_MATE:
            moved = list(pos[i])
        else:
            moved = move_one(pos[i], pos[m], dist[i][m], step_size)
        new_pos.append(clamp_one(moved, lo_l, hi_l))

    return (
        np.array(new_uv, dtype=np.float64),
        np.array(lmates, dtype=np.int64),
        np.array(new_pos, dtype=np.float64),
    )
