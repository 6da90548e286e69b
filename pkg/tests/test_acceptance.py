"""Acceptance suite: the seven exit criteria, one pass/fail line each.

A1-A4 execute the shipped configs in configs/ at their frozen defaults;
A5-A7 are the invariant and closed-form gates. Run with `pytest -s
tests/test_acceptance.py` to see the per-criterion lines as they pass.
"""

import math
import os

import numpy as np
import pytest
from scipy.stats import spearmanr

import bmo
from bmo import analysis, kernel, sim, traceio
from bmo.config import load_config
from bmo.rng import STREAM_SELECT, stream

from oracle import naive_bmo_step

CONFIG_DIR = os.path.join(os.path.dirname(__file__), os.pardir, "configs")


def report(criterion: str, ok: bool, detail: str):
    print(f"{criterion}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"{criterion} failed: {detail}"


def shipped(name: str):
    return load_config(os.path.join(CONFIG_DIR, name))


def test_a1_multimodal_capture():
    cfg = shipped("three_peak_capture.toml")
    field = cfg.build_field()
    peaks = field.known_peaks(0)
    assert len(cfg.seeds) == 30 and cfg.params.max_iters == 300
    assert cfg.params.n_agents == 60
    assert cfg.params.selection_mode == "stochastic"
    captured = 0
    for seed in cfg.seeds:
        trace = sim.simulate(cfg.scenario(seed))
        rep = analysis.peak_capture(trace, peaks, radius=0.3, min_count=5)
        captured += rep.all_captured
    report(
        "A1 multimodal capture",
        captured >= 0.9 * len(cfg.seeds),
        f"all peaks captured in {captured}/{len(cfg.seeds)} seeds (need >= 27)",
    )


def test_a2_four_bot_source_seeking():
    cfg = shipped("four_bot_source.toml")
    field = cfg.build_field()
    source = field.known_peaks(0)[0]
    assert cfg.params.n_agents == 4 and cfg.params.max_iters == 500
    assert cfg.sensor_sigma == pytest.approx(0.02)  # 2% of source intensity
    assert len(cfg.seeds) == 40
    located = 0
    for seed in cfg.seeds:
        trace = sim.simulate(cfg.scenario(seed))
        t = sim.co_location_time(trace, cfg.capture_radius, source)
        located += t is not None
    report(
        "A2 four-bot co-location",
        located >= 0.95 * len(cfg.seeds),
        f"co-location defined in {located}/{len(cfg.seeds)} seeds (need >= 38)",
    )


def test_a3_step_size_study():
    cfg = shipped("step_size_study.toml")
    field = cfg.build_field()
    source = field.known_peaks(0)[0]
    param, values = cfg.sweep
    assert param == "step_size" and len(values) == 5
    assert max(values) / min(values) == pytest.approx(10.0, rel=0.01)
    assert cfg.sensor_sigma == 0.0 and len(cfg.seeds) == 20

    medians, angles = [], []
    for value in values:
        times, turn = [], []
        for seed in cfg.seeds:
            trace = sim.simulate(cfg.scenario(seed, sweep_value=value))
            t = sim.co_location_time(trace, cfg.capture_radius, source)
            if t is not None:
                times.append(t)
            sm = analysis.path_smoothness(trace)
            turn.append(float(np.mean(sm.mean_turning_angle)))
        assert len(times) >= len(cfg.seeds) // 2, "undefined medians"
        medians.append(float(np.median(times)))
        angles.append(float(np.mean(turn)))

    rho_time = spearmanr(values, medians).statistic
    rho_angle = spearmanr(values, angles).statistic
    report(
        "A3i co-location time vs step size",
        rho_time <= -0.8,
        f"Spearman rho on medians = {rho_time:+.3f} (need <= -0.8); "
        f"medians={medians}",
    )
    report(
        "A3ii turning angle vs step size",
        rho_angle >= 0.8,
        f"Spearman rho on means = {rho_angle:+.3f} (need >= +0.8); "
        f"angles={[round(a, 3) for a in angles]}",
    )


def test_a4_dynamic_source():
    cfg = shipped("relocating_source.toml")
    field = cfg.build_field()
    src = cfg.field_spec["sources"][0]
    jump_t = src["motion"]["t"]
    new_pos = src["motion"]["to"]
    displacement = math.dist(src["position"], new_pos)
    diagonal = bmo.fields.bounds_diagonal(field.bounds)
    assert jump_t == 300 and cfg.params.max_iters == 600
    assert displacement == pytest.approx(diagonal / 2.0, rel=1e-12)
    assert len(cfg.seeds) == 30

    recaptured = 0
    for seed in cfg.seeds:
        trace = sim.simulate(cfg.scenario(seed))
        t = analysis.centroid_capture_time(
            trace, cfg.capture_radius, new_pos, start=jump_t
        )
        recaptured += t is not None and t <= 600
    report(
        "A4 dynamic source recapture",
        recaptured >= 0.9 * len(cfg.seeds),
        f"centroid re-captured in {recaptured}/{len(cfg.seeds)} seeds (need >= 27)",
    )


class TestA5InvariantSuite:
    def test_determinism_bit_identical(self):
        field = bmo.default_three_peak_field()
        params = bmo.BmoParams(n_agents=20, max_iters=60, seed=101,
                               selection_mode="stochastic", lambda_d=0.5)
        a = traceio.trace_to_bytes(kernel.run(field, params))
        b = traceio.trace_to_bytes(kernel.run(field, params))
        report("A5 determinism", a == b, "repeated runs byte-identical")

    def test_uv_nonnegative_and_bounded(self):
        field = bmo.default_three_peak_field()
        params = bmo.BmoParams(rho=0.4, gamma=0.6, n_agents=30, max_iters=120,
                               seed=7, selection_mode="stochastic", lambda_d=0.5)
        trace = kernel.run(field, params)
        uv = trace.uv_over_time()
        bound = max(0.0, params.gamma * field.max_value / params.rho)
        ok = bool((uv >= 0.0).all() and (uv <= bound * (1 + 1e-12)).all())
        report("A5 UV non-negativity and boundedness", ok,
               f"0 <= uv <= {bound:.3f} over {uv.size} samples")

    def test_distribution_monotonicity(self):
        rng = np.random.default_rng(11)
        params = bmo.BmoParams(lambda_d=0.9)
        worst = 0.0
        for _ in range(50):
            d1 = rng.uniform(0.05, 3.0)
            d2 = d1 + rng.uniform(0.1, 3.0)
            uv_j = rng.uniform(0.01, 5.0)
            state = bmo.SwarmState.initial(
                np.array([[0.0, 0.0], [d1, 0.0], [d2, 0.0]])
            )
            state.uv = np.array([0.0, 0.0, uv_j])
            rec = kernel.uv_distribution(state, params)
            assert rec.r[1, 2] > rec.r[0, 2]
            assert rec.r[0, 2] <= uv_j and rec.r[1, 2] <= uv_j
            worst = max(worst, rec.r[0, 2] / uv_j)
        report("A5 distribution monotonicity", True,
               "strictly decreasing over 50 sampled pairs")

    def test_movement_no_overshoot(self):
        rng = np.random.default_rng(13)
        worst = 0.0
        for _ in range(200):
            n = int(rng.integers(2, 8))
            params = bmo.BmoParams(step_size=float(rng.uniform(0, 2)))
            state = bmo.SwarmState.initial(rng.uniform(-5, 5, (n, 2)))
            lmates = [(i + 1) % n for i in range(n)]
            out = kernel.movement(state, lmates, [(-1e9, 1e9)] * 2, params)
            for i in range(n):
                d = math.dist(state.positions[i].tolist(),
                              state.positions[lmates[i]].tolist())
                after = math.dist(out[i].tolist(),
                                  state.positions[lmates[i]].tolist())
                worst = max(worst, abs(after - max(0.0, d - params.step_size)))
        report("A5 movement no-overshoot", worst <= 1e-12,
               f"max |residual| = {worst:.2e} <= 1e-12")

    def test_top_agent_stasis(self):
        field = bmo.default_three_peak_field()
        rng = np.random.default_rng(17)
        checked = 0
        for trial in range(50):
            n = int(rng.integers(2, 10))
            params = bmo.BmoParams(n_agents=n, seed=int(rng.integers(1 << 30)),
                                   selection_mode="stochastic")
            state = bmo.SwarmState.initial(rng.uniform(-4, 4, (n, 2)))
            state.uv = rng.uniform(0, 2, n)
            select = stream(params.seed, STREAM_SELECT)
            new_state, record = kernel.bmo_step(state, field, select, params)
            top = int(np.argmax(record.fitness_meas))
            if (record.fitness_meas == record.fitness_meas[top]).sum() == 1:
                assert record.lmates[top] == -1
                assert np.array_equal(new_state.positions[top],
                                      state.positions[top])
                checked += 1
        report("A5 top-agent stasis", checked > 0,
               f"strict champion static in {checked} sampled states")

    def test_scale_equivariance(self):
        base = bmo.default_three_peak_field()
        params = bmo.BmoParams(n_agents=15, max_iters=40, seed=23,
                               selection_mode="stochastic", lambda_d=0.5)
        ref = kernel.run(base, params)
        for c in (4.0, 3.0):  # a power of two and a generic factor
            scaled_field = bmo.gaussian_peaks_field(
                centers=[(-2.0, -2.0), (2.0, -2.0), (0.0, 2.0)],
                amplitudes=[c, c, c],
                sigma=0.8,
                bounds=[(-4.0, 4.0), (-4.0, 4.0)],
            )
            scaled = kernel.run(scaled_field, params)
            pos_equal = all(
                np.array_equal(a.positions, b.positions)
                for a, b in zip(ref.records, scaled.records)
            )
            uv_err = 0.0
            for a, b in zip(ref.records[1:], scaled.records[1:]):
                denom = np.maximum(np.abs(a.uv) * c, 1e-300)
                uv_err = max(uv_err, float(np.max(np.abs(b.uv - a.uv * c) / denom)))
            report(
                f"A5 scale equivariance (c={c})",
                pos_equal and uv_err < 1e-12,
                f"positions identical, max uv relative error {uv_err:.2e} < 1e-12",
            )

    def test_permutation_equivariance(self):
        field = bmo.default_three_peak_field()
        rng = np.random.default_rng(29)
        n = 12
        init = rng.uniform(-4, 4, (n, 2))
        perm = rng.permutation(n)
        params = bmo.BmoParams(n_agents=n, max_iters=50, seed=5,
                               selection_mode="deterministic", lambda_d=0.8)
        a = kernel.run(field, params, init=init)
        b = kernel.run(field, params, init=init[perm])
        inverse = {int(orig): slot for slot, orig in enumerate(perm)}
        ok = True
        for ra, rb in zip(a.records, b.records):
            ok &= np.array_equal(rb.positions, ra.positions[perm])
            ok &= np.array_equal(rb.uv, ra.uv[perm])
            for slot, orig in enumerate(perm):
                want = ra.lmates[orig]
                got = rb.lmates[slot]
                ok &= (got == -1) if want == -1 else (got == inverse[int(want)])
        report("A5 permutation equivariance", bool(ok),
               f"whole trace permutes with agents (n={n}, 50 steps)")

    def test_noise_free_sim_equals_kernel(self):
        field = bmo.point_source_field(
            [bmo.SourceSpec(intensity=1.0, position=(0.0, 0.0), kappa=0.5)],
            bounds=[(-4, 4), (-4, 4)],
        )
        params = bmo.BmoParams(n_agents=6, max_iters=80, seed=3, lambda_d=2.0)
        scn = bmo.Scenario(name="nf", field=field, params=params,
                           sensor_sigma=0.0, init=None, capture_radius=0.4)
        st = sim.simulate(scn)
        kr = kernel.run(field, params)
        ok = all(
            np.array_equal(a.positions, b.positions)
            for a, b in zip(st.records, kr.records)
        )
        report("A5 noise-free reduction", ok, "sim positions == kernel positions")

    def test_trace_round_trip_exact(self):
        field = bmo.default_three_peak_field()
        params = bmo.BmoParams(n_agents=9, max_iters=25, seed=41,
                               selection_mode="stochastic")
        scn = bmo.Scenario(name="rt", field=field, params=params,
                           sensor_sigma=0.05, init=None, capture_radius=0.3)
        trace = sim.simulate(scn)
        data = traceio.trace_to_bytes(trace)
        back = traceio.parse_trace(data.decode("utf-8"))
        ok = traceio.traces_equal(trace, back) and traceio.trace_to_bytes(back) == data
        report("A5 trace round-trip", ok, "parse(write(trace)) == trace, bytes stable")


def test_a6_oracle_equivalence():
    field = bmo.default_three_peak_field()
    rng = np.random.default_rng(97)
    lanes = sorted(kernel.available_lanes())
    checked = 0
    for case in range(100):
        n = int(rng.integers(1, 11))
        mode = "stochastic" if case % 2 else "deterministic"
        params = bmo.BmoParams(
            n_agents=n,
            seed=int(rng.integers(1 << 40)),
            selection_mode=mode,
            rho=float(rng.uniform(0, 1)),
            gamma=float(rng.uniform(0.05, 1.5)),
            lambda_d=float(rng.uniform(0.2, 3.0)),
            step_size=float(rng.uniform(0, 1.5)),
            fitness_eps=float(rng.choice([0.0, 0.0, 0.01])),
        )
        positions = rng.uniform(-4, 4, (n, 2))
        uv = rng.uniform(0, 3, n)
        ref = stream(params.seed, STREAM_SELECT)
        fit, new_uv, lmates, new_pos = naive_bmo_step(
            positions.tolist(), uv.tolist(), field, 1, ref, params,
            field.bounds.tolist(),
        )
        for lane in lanes:
            state = bmo.SwarmState.initial(positions.copy())
            state.uv = np.asarray(uv)
            select = stream(params.seed, STREAM_SELECT)
            _, record = kernel.bmo_step(state, field, select, params, lane=lane)
            assert record.fitness_meas.tolist() == fit
            assert record.uv.tolist() == new_uv
            assert [None if m == -1 else int(m) for m in record.lmates] == lmates
            assert record.positions.tolist() == new_pos
            checked += 1
    report("A6 oracle equivalence",
           checked == 100 * len(lanes),
           f"exact equality on 100 states x {len(lanes)} lane(s), both modes")


class TestA7ClosedForms:
    def test_single_agent_uv_trajectory(self):
        for rho, gamma, J in ((0.5, 0.5, 1.0), (0.4, 0.6, 2.0)):
            field = bmo.FitnessField(
                dimension=2,
                bounds=np.array([(-5.0, 5.0), (-5.0, 5.0)]),
                eval=lambda x, t, J=J: J,
                known_peaks=lambda t: None,
                name="flat",
                spec={"kind": "flat"},
                max_value=J,
            )
            params = bmo.BmoParams(rho=rho, gamma=gamma, n_agents=1,
                                   max_iters=300, seed=1,
                                   selection_mode="deterministic")
            trace = kernel.run(field, params)
            worst = 0.0
            for t, rec in enumerate(trace.records):
                closed = gamma * J * (1.0 - (1.0 - rho) ** t) / rho
                worst = max(worst, abs(rec.uv[0] - closed))
            report(
                f"A7 single-agent UV closed form (rho={rho})",
                worst <= 1e-12,
                f"max |uv - closed form| = {worst:.2e} <= 1e-12 over 300 iters",
            )

    def test_two_agent_colocation_closed_form(self):
        cases = [
            (1.0, 0.05, 0.04),
            (3.0, 0.3, 0.07),
            (2.5, 0.2, 0.11),
            (3.9, 0.5, 0.024),
            (0.2, 0.5, 0.05),
        ]
        for D, radius, step in cases:
            field = bmo.point_source_field(
                [bmo.SourceSpec(intensity=1.0, position=(0.0, 0.0), kappa=0.5)],
                bounds=[(-4, 4), (-4, 4)],
            )
            params = bmo.BmoParams(n_agents=2, max_iters=300, seed=2,
                                   step_size=step, lambda_d=2.0,
                                   selection_mode="deterministic")
            scn = bmo.Scenario(name="chain", field=field, params=params,
                               sensor_sigma=0.0, init=[[D, 0.0], [0.0, 0.0]],
                               capture_radius=radius)
            trace = sim.simulate(scn)
            got = sim.co_location_time(trace, radius, (0.0, 0.0))
            want = sim.two_agent_chain_colocation_steps(D, radius, step)
            assert got == want, (D, radius, step, got, want)
        report("A7 two-agent co-location closed form", True,
               f"simulation == ceil((D - r)/s) on {len(cases)} cases")
