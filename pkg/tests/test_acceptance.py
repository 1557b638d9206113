"""Acceptance gate: ten numbered criteria, one test (one line) each.

Run `pytest tests/test_acceptance.py -v` to get a pass/fail line per
criterion.  Tolerances are deliberate; do not loosen them.
"""
import json
import math
import subprocess
import sys
import time

import numpy as np
import pytest

import duelsim.schedule as schedule_mod
from duelsim import (
    GameSpec,
    PlayerSpec,
    Policy,
    RenewalProcess,
    apply_shot,
    build_schedule,
    estimate,
    evaluate,
    exit_stats_exponential,
    exit_time_samples,
    indicator,
    is_terminal,
    make_curve,
    mc_exit_stats,
    mc_functional,
    new_state,
    pairwise_time,
    player_schedule,
    playout,
    success_prob,
)
from helpers import random_curve, random_curves


def test_criterion_01_analytic_crossing_times():
    # linear horizons (a, b) cross at ab / (a + b); each solve < 1 ms
    schedule_mod._pairwise_time_cached.cache_clear()
    for a, b in [(20.0, 30.0), (20.0, 20.0), (10.0, 40.0)]:
        ci, cj = make_curve("linear", a), make_curve("linear", b)
        t0 = time.perf_counter()
        t_star = pairwise_time(ci, cj)
        elapsed = time.perf_counter() - t0
        assert abs(t_star - a * b / (a + b)) <= 1e-9, (a, b, t_star)
        assert elapsed < 1e-3, (a, b, elapsed)


def test_criterion_02_crossing_property_random_pairs():
    # 1000 random valid pairs; the crossing is tight on both sides
    rng = np.random.default_rng(20240811)
    for trial in range(1000):
        ci, cj = random_curve(rng), random_curve(rng)
        t_star = pairwise_time(ci, cj)
        here = evaluate(ci, t_star) + evaluate(cj, t_star)
        assert here >= 1.0 - 1e-9, (trial, t_star, here)
        if t_star > 1e-5:
            before = evaluate(ci, t_star - 1e-5) + evaluate(cj, t_star - 1e-5)
            assert before <= 1.0 + 1e-9, (trial, t_star, before)


def test_criterion_03_schedule_combinatorics():
    rng = np.random.default_rng(3)
    for n in range(2, 9):
        sched = build_schedule(random_curves(rng, n))
        assert len(sched.battlefields) == math.comb(n, 2)
        assert [bf.index for bf in sched.battlefields] == list(
            range(1, math.comb(n, 2) + 1)
        )
        times = [bf.time for bf in sched.battlefields]
        assert times == sorted(times)
        for pid in range(1, n + 1):
            assert len(player_schedule(sched, pid)) == n - 1


def test_criterion_04_battlefield_reciprocity():
    # q_ij q_ji = 1 to 1e-12; the opening battlefield has the closed form
    rng = np.random.default_rng(4)
    checked = 0
    while checked < 1000:
        n = int(rng.integers(2, 7))
        curves = random_curves(rng, n)
        sched = build_schedule(curves)
        for bf in sched.battlefields:
            i, j = bf.pair
            prod = indicator(sched, curves, i, bf.index) * indicator(
                sched, curves, j, bf.index
            )
            assert abs(prod - 1.0) <= 1e-12, (checked, bf, prod)
            checked += 1
    first = sched.battlefields[0]
    i, j = first.pair
    assert success_prob(sched, curves, i, 1) == 1.0 - evaluate(
        curves[j], first.time
    )


def test_criterion_05_exponential_closed_forms_vs_mc():
    t0 = time.perf_counter()
    for seed, (lam, thr) in enumerate([(1.0, 10.0), (2.0, 3.0), (0.5, 7.0)]):
        want = exit_stats_exponential(lam, thr)
        got = mc_exit_stats(
            RenewalProcess.exponential(lam), thr, 1_000_000, seed=101 + seed
        )
        assert abs(got.mean_exit - want.mean_exit) <= 3 * got.stderr_exit
        assert abs(got.mean_pre_exit - want.mean_pre_exit) <= 3 * got.stderr_pre_exit
        assert abs(got.mean_nu - want.mean_nu) <= 3 * got.stderr_nu
    assert time.perf_counter() - t0 < 10.0


def test_criterion_06_functional_derivative():
    # d/dtheta1 at 0 of the win functional equals -E[T_exit 1{i first}];
    # central difference under common random numbers within 1%
    proc_i = RenewalProcess.exponential(1.0)
    proc_j = RenewalProcess.uniform(0.5, 1.5)
    thr, n, seed, h = 6.0, 200_000, 77, 1e-4
    up = mc_functional(proc_i, proc_j, thr, 0.0, +h, n, seed)
    dn = mc_functional(proc_i, proc_j, thr, 0.0, -h, n, seed)
    deriv = (dn - up) / (2.0 * h)
    _, _, exi_i = exit_time_samples(proc_i, thr, n, seed, stream=0)
    _, _, exi_j = exit_time_samples(proc_j, thr, n, seed, stream=1)
    direct = float((exi_i * (exi_i <= exi_j)).mean())
    assert direct > 0.0
    assert abs(deriv - direct) <= 0.01 * direct, (deriv, direct)


def test_criterion_07_symmetric_fairness():
    spec = GameSpec(
        players=(
            PlayerSpec(
                id=1,
                curve=make_curve("linear", 20.0),
                renewal=RenewalProcess.exponential(1.0),
            ),
            PlayerSpec(
                id=2,
                curve=make_curve("linear", 20.0),
                renewal=RenewalProcess.exponential(1.0),
            ),
        )
    )
    est = estimate(spec, Policy("threshold"), 100_000, seed=11)
    gap = abs(est.survival_rate[1] - est.survival_rate[2])
    combined = math.hypot(est.survival_stderr[1], est.survival_stderr[2])
    assert gap <= 3.0 * combined, (est.survival_rate, gap, combined)


def test_criterion_08_deterministic_trace():
    # sure shot at t=1 against a slow opponent: player 1 always survives
    spec = GameSpec(
        players=(
            PlayerSpec(
                id=1,
                curve=make_curve("table", 1.0, knots=[(0.0, 0.0), (1.0, 1.0)]),
                renewal=RenewalProcess.deterministic(1.0),
            ),
            PlayerSpec(
                id=2,
                curve=make_curve("linear", 100.0),
                renewal=RenewalProcess.deterministic(1.0),
            ),
        )
    )
    est = estimate(spec, Policy("threshold"), 1000, seed=0)
    assert est.survival_rate[1] == 1.0
    assert est.survival_rate[2] == 0.0
    for seed in range(20):
        res = playout(spec, Policy("threshold"), np.random.default_rng(seed))
        assert res.survivors == frozenset({1})
        assert res.shot_log[0].time == pytest.approx(1.0)


def test_criterion_09_engine_forced_outcomes():
    spec = GameSpec(
        players=tuple(
            PlayerSpec(
                id=i,
                curve=make_curve("linear", h),
                renewal=RenewalProcess.exponential(1.0),
            )
            for i, h in ((1, 20.0), (2, 30.0), (3, 40.0))
        )
    )
    st = new_state(spec)
    # forced hit removes exactly the target and his battlefields
    hit = apply_shot(st, 1, 2, "hit", at_time=12.0)
    assert hit.alive == frozenset({1, 3})
    assert all(2 not in bf.pair for bf in hit.pair_set.battlefields)
    assert set(hit.curves) == {1, 3}
    # forced miss zeroes exactly the shooter's curve
    miss = apply_shot(st, 1, 2, "miss", at_time=12.0)
    assert miss.alive == frozenset({1, 2, 3})
    assert evaluate(miss.curves[1], 19.0) == 0.0
    assert evaluate(miss.curves[2], 29.0) > 0.0
    # everyone out of bullets with 2+ alive: armed-set termination rule
    dry = apply_shot(miss, 2, 3, "miss")
    dry = apply_shot(dry, 3, 2, "miss")
    status = is_terminal(dry)
    assert status == (True, "bullets-exhausted")
    # a lone survivor terminates even while holding bullets
    duel = apply_shot(hit, 3, 1, "hit", at_time=30.0)
    assert is_terminal(duel) == (True, "lone-survivor")


def test_criterion_10_cli_reproducibility(tmp_path):
    spec = {
        "players": [
            {
                "id": 1,
                "curve": {"type": "linear", "t_max": 20.0},
                "renewal": {"dist": "exponential", "rate": 1.0},
            },
            {
                "id": 2,
                "curve": {"type": "expsat", "t_max": 30.0, "rate": 0.1},
                "bullets": 2,
                "renewal": {"dist": "uniform", "lo": 0.5, "hi": 1.5},
            },
            {
                "id": 3,
                "curve": {"type": "power", "t_max": 40.0, "k": 2.0},
                "renewal": {"dist": "gamma", "shape": 2.0, "scale": 0.5},
            },
        ]
    }
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(spec))
    commands = [
        ["validate", str(path)],
        ["schedule", str(path)],
        ["schedule", str(path), "--format", "csv"],
        ["targets", str(path), "--player", "2", "--bullets", "2"],
        ["exit-times", str(path), "--player", "1", "--threshold", "8.0",
         "--mc-samples", "50000", "--seed", "4"],
        ["simulate", str(path), "--runs", "200", "--seed", "9", "--log"],
        ["curves", str(path), "--step", "2.5"],
    ]
    for argv in commands:
        runs = [
            subprocess.run(
                [sys.executable, "-m", "duelsim", *argv],
                capture_output=True, timeout=300,
            )
            for _ in range(2)
        ]
        assert runs[0].returncode == 0, (argv, runs[0].stderr)
        assert runs[1].returncode == 0
        assert runs[0].stdout == runs[1].stdout, argv
