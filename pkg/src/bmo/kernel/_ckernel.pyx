# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel lane.

Mirrors _pykernel.step_arrays expression-for-expression; the build pins
-ffp-contract=off so every multiply/add rounds separately and the two
lanes stay bit-identical. Keep the arithmetic in sync with _pykernel.
"""

from libc.math cimport exp, sqrt

import numpy as np


def step_arrays(
    double[:, ::1] positions,
    double[::1] uv,
    double[::1] fitness,
    uniforms,
    bint stochastic,
    double rho,
    double gamma,
    double lambda_d,
    double step_size,
    double fitness_eps,
    double[::1] lo,
    double[::1] hi,
):
    cdef Py_ssize_t n = positions.shape[0]
    cdef Py_ssize_t dim = positions.shape[1]

    new_uv_arr = np.empty(n, dtype=np.float64)
    lmates_arr = np.empty(n, dtype=np.int64)
    new_pos_arr = np.empty((n, dim), dtype=np.float64)
    dist_arr = np.empty((n, n), dtype=np.float64)
    r_arr = np.empty((n, n), dtype=np.float64)
    if uniforms is None:
        us_arr = np.zeros(n, dtype=np.float64)
    else:
        us_arr = np.ascontiguousarray(uniforms, dtype=np.float64)

    cdef double[::1] new_uv = new_uv_arr
    cdef long long[::1] lmates = lmates_arr
    cdef double[:, ::1] new_pos = new_pos_arr
    cdef double[:, ::1] dist = dist_arr
    cdef double[:, ::1] r = r_arr
    cdef double[::1] us = us_arr

    cdef Py_ssize_t i, j, k, m, n_cand, pick, idx
    cdef double acc, t, d, threshold, best_r, total, spin, v

    # phase a: UV update
    for i in range(n):
        new_uv[i] = (1.0 - rho) * uv[i] + gamma * fitness[i]

    # phase b: pairwise distances and received UV
    for i in range(n):
        for j in range(n):
            acc = 0.0
            for k in range(dim):
                t = positions[i, k] - positions[j, k]
                acc += t * t
            d = sqrt(acc)
            dist[i, j] = d
            r[i, j] = new_uv[j] * exp(-d / lambda_d)

    # phase c: l-mate selection (candidate walk in ascending id order)
    cand_arr = np.empty(n, dtype=np.int64)
    cdef long long[::1] cand = cand_arr
    for i in range(n):
        threshold = fitness[i] + fitness_eps
        n_cand = 0
        for j in range(n):
            if j != i and fitness[j] > threshold:
                cand[n_cand] = j
                n_cand += 1
        if n_cand == 0:
            lmates[i] = -1
            continue
        if not stochastic:
            pick = cand[0]
            best_r = r[i, cand[0]]
            for idx in range(1, n_cand):
                j = cand[idx]
                if r[i, j] > best_r:
                    pick = j
                    best_r = r[i, j]
            lmates[i] = pick
            continue
        total = 0.0
        for idx in range(n_cand):
            total += r[i, cand[idx]]
        if total > 0.0:
            spin = us[i] * total
            acc = 0.0
            pick = cand[n_cand - 1]  # guard against accumulated rounding
            for idx in range(n_cand):
                acc += r[i, cand[idx]]
                if acc > spin:
                    pick = cand[idx]
                    break
            lmates[i] = pick
        else:
            idx = <Py_ssize_t>(us[i] * n_cand)
            if idx >= n_cand:
                idx = n_cand - 1
            lmates[i] = cand[idx]

    # phase d: movement with snap-to-mate, then clamp to bounds
    for i in range(n):
        m = lmates[i]
        if m < 0:
            for k in range(dim):
                new_pos[i, k] = positions[i, k]
        else:
            d = dist[i, m]
            if d <= step_size:
                for k in range(dim):
                    new_pos[i, k] = positions[m, k]
            else:
                for k in range(dim):
                    new_pos[i, k] = (
                        positions[i, k]
                        + step_size * (positions[m, k] - positions[i, k]) / d
                    )
        for k in range(dim):
            v = new_pos[i, k]
            if v < lo[k]:
                new_pos[i, k] = lo[k]
            elif v > hi[k]:
                new_pos[i, k] = hi[k]

    return new_uv_arr, lmates_arr, new_pos_arr
