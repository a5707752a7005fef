import csv
import io
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import closure_scan_min_time, random_instance, rendezvous_time_oracle, rk4_final_state
from trochoids.dubins_core import WORD_ORDER, PathWord, dubins_word, shortest_dubins
from trochoids.errors import Infeasible, WindTooStrong
from trochoids.geom_frames import Pose, VehicleLimits, Wind, angle_diff, to_wind_frame, wrap_2pi
from trochoids.trochoid_solver import (
    SCAN_POINTS, K_RANGE, TrochoidProblem, best_for_word, construct_path, find_roots,
    rendezvous_error, residual_f, solve_analytic, solve_numeric, solve_word,
)

MIXED = (PathWord.LSR, PathWord.RSL)


def _problems(n, seed, **kw):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        s, g, w, lim = random_instance(rng, **kw)
        out.append((s, g, w, lim, TrochoidProblem.from_inertial(s, g, w, lim)))
    return out


def _dubins_len(problem, word):
    s, g = problem.start, problem.goal
    th = math.atan2(g.y - s.y, g.x - s.x)
    d = math.hypot(g.x - s.x, g.y - s.y) / problem.rho
    return dubins_word(wrap_2pi(s.psi - th), wrap_2pi(g.psi - th), d, word, problem.rho).total_length


def test_wind_too_strong():
    with pytest.raises(WindTooStrong, match="wind exceeds airspeed"):
        TrochoidProblem.from_inertial(Pose(0, 0, 0), Pose(100, 0, 0), Wind(25, 0), VehicleLimits(20, 0.2))
    with pytest.raises(WindTooStrong):
        TrochoidProblem(Pose(0, 0, 0), Pose(100, 0, 0), 20.0, VehicleLimits(20, 0.2))


def test_zero_wind_each_word_equals_dubins():
    for s, g, w, lim, prob in _problems(200, 1, vw_range=(0.0, 0.0)):
        for word in WORD_ORDER:
            try:
                ref = _dubins_len(prob, word)
            except Infeasible:
                continue
            T = best_for_word(prob, word).T
            assert T * lim.va == pytest.approx(ref, rel=1e-9, abs=1e-7)


def test_zero_wind_mixed_roots_are_tangent_times():
    for s, g, w, lim, prob in _problems(100, 2, vw_range=(0.0, 0.0)):
        for word in MIXED:
            try:
                ref = _dubins_len(prob, word) / lim.va
            except Infeasible:
                continue
            assert best_for_word(prob, word).T == pytest.approx(ref, rel=1e-7)


def test_solutions_match_scan_oracle():
    """Per-word optimum equals an independent dense scan of the first-turn time."""
    worst = 0.0
    for s, g, w, lim, prob in _problems(150, 3):
        for word in WORD_ORDER:
            ref = closure_scan_min_time(prob, word, n_scan=10_000)
            try:
                got = best_for_word(prob, word).T
            except Infeasible:
                got = math.inf
            if math.isinf(ref):
                assert math.isinf(got)
                continue
            worst = max(worst, abs(got - ref))
            assert got == pytest.approx(ref, abs=1e-4)
    assert worst < 1e-4


def test_solutions_match_time_scan_oracle():
    """Cross-check against the moving-goal Dubins rendezvous scan."""
    for s, g, w, lim, prob in _problems(40, 4):
        for i, word in enumerate(WORD_ORDER):
            ref = rendezvous_time_oracle(prob.start, prob.goal, prob.vw, lim, i)
            try:
                got = best_for_word(prob, word).T
            except Infeasible:
                got = math.inf
            if math.isfinite(ref) or math.isfinite(got):
                assert got == pytest.approx(ref, rel=1e-6)


def test_every_solution_closes_under_rk4():
    for s, g, w, lim, prob in _problems(25, 5):
        for word in WORD_ORDER:
            try:
                sols = solve_word(prob, word)
            except Infeasible:
                continue
            for sol in sols:
                x, y, psi = rk4_final_state(s, w, lim, word, sol.t1, sol.t2, sol.T)
                # inertial goal is fixed; closure is against its pose
                assert math.hypot(x - g.x, y - g.y) < 1e-5
                assert abs(angle_diff(psi, g.psi)) < 1e-8


def test_rendezvous_error_small_for_all_solutions():
    for *_, prob in _problems(100, 6):
        for word in WORD_ORDER:
            try:
                sols = solve_word(prob, word)
            except Infeasible:
                continue
            for sol in sols:
                pos, head = rendezvous_error(sol, prob)
                assert pos < 1e-6 and head < 1e-8
                assert 0.0 <= sol.t1 <= sol.t2 <= sol.T
                assert sol.k in K_RANGE


def test_residual_vanishes_at_roots_and_is_bracketed():
    grid = np.linspace(0.0, 1.0, SCAN_POINTS)
    for *_, prob in _problems(100, 7):
        t2pi = prob.limits.t_2pi
        for word in MIXED:
            roots, ks = find_roots(prob, word)
            for t1, k in zip(roots, ks):
                assert abs(residual_f(t1, k, prob, word)) < 1e-8
                f = residual_f(grid * t2pi, k, prob, word)
                i = min(int(t1 / t2pi * (SCAN_POINTS - 1)), SCAN_POINTS - 2)
                # the root sits in a grid cell whose ends differ in sign
                cells = [j for j in (i - 1, i, i + 1) if 0 <= j < SCAN_POINTS - 1]
                assert any(f[j] * f[j + 1] <= 0 for j in cells)


def test_residual_rejects_closed_form_words():
    prob = _problems(1, 8)[0][-1]
    with pytest.raises(ValueError):
        residual_f(0.0, 0, prob, PathWord.LSL)
    with pytest.raises(ValueError):
        solve_numeric(prob, PathWord.RSR)
    with pytest.raises(ValueError):
        solve_analytic(prob, PathWord.LSR)


def test_time_lower_bound():
    """No path can beat flying straight at the rendezvous point."""
    for *_, prob in _problems(200, 9):
        for word in WORD_ORDER:
            try:
                sol = best_for_word(prob, word)
            except Infeasible:
                continue
            gx, gy = prob.goal_at(sol.T)
            assert prob.limits.va * sol.T >= math.hypot(gx - prob.start.x, gy - prob.start.y) - 1e-6


def test_mirror_symmetry():
    for *_, prob in _problems(200, 10):
        mir = prob.mirrored()
        for word in WORD_ORDER:
            try:
                t = best_for_word(prob, word).T
            except Infeasible:
                with pytest.raises(Infeasible):
                    best_for_word(mir, word.mirrored())
                continue
            assert best_for_word(mir, word.mirrored()).T == pytest.approx(t, rel=1e-9)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0.1, 10.0))
def test_scaling_symmetry(seed, c):
    rng = np.random.default_rng(seed)
    s, g, w, lim = random_instance(rng)
    prob = TrochoidProblem.from_inertial(s, g, w, lim)
    big = TrochoidProblem.from_inertial(
        Pose(c * s.x, c * s.y, s.psi), Pose(c * g.x, c * g.y, g.psi), w,
        VehicleLimits.from_radius(lim.va, c * lim.radius))
    for word in WORD_ORDER:
        try:
            t = best_for_word(prob, word).T
        except Infeasible:
            continue
        assert best_for_word(big, word).T == pytest.approx(c * t, rel=1e-9)


# ---------------------------------------------------------------- sampling

def _one(seed=12, word=PathWord.LSR):
    rng = np.random.default_rng(seed)
    while True:
        s, g, w, lim = random_instance(rng)
        s = Pose(s.x, s.y, s.psi, 100.0)
        g = Pose(g.x, g.y, g.psi, 160.0)
        prob = TrochoidProblem.from_inertial(s, g, w, lim)
        try:
            sol = best_for_word(prob, word)
        except Infeasible:
            continue
        if sol.t1 > 1.0:
            return s, g, w, lim, prob, sol


@pytest.mark.parametrize("word", list(WORD_ORDER))
def test_path_endpoints(word):
    s, g, w, lim, prob, sol = _one(word=word)
    path = construct_path(sol, prob, 0.1, w, s.z, g.z, origin=s)
    assert (path.x[0], path.y[0], path.psi[0], path.z[0]) == (s.x, s.y, s.psi, s.z)
    assert path.t[0] == 0.0 and path.t[-1] == sol.T
    assert math.hypot(path.x[-1] - g.x, path.y[-1] - g.y) < 1e-3
    assert abs(angle_diff(path.psi[-1], g.psi)) < 1e-4
    assert path.z[-1] == pytest.approx(g.z)
    assert np.all(np.diff(path.t) > 0) and np.all(np.diff(path.t) <= 0.1 + 1e-12)


def test_path_turn_rate_and_ground_speed():
    s, g, w, lim, prob, sol = _one()
    path = construct_path(sol, prob, 0.01, w)
    bank1 = path.t < sol.t1 - 1e-9
    dpsi = np.diff(np.unwrap(path.psi[bank1])) / np.diff(path.t[bank1])
    assert np.allclose(dpsi, sol.word.delta1 * lim.omega, atol=1e-3)
    # finite-difference ground speed on each segment interior
    for lo, hi in ((0.0, sol.t1), (sol.t1, sol.t2), (sol.t2, sol.T)):
        m = (path.t >= lo) & (path.t <= hi)
        t, x, y, p = path.t[m], path.x[m], path.y[m], path.psi[m]
        if t.size < 3:
            continue
        speed = np.hypot(np.diff(x), np.diff(y)) / np.diff(t)
        pm = p[:-1] + 0.5 * np.diff(np.unwrap(p))
        ref = np.hypot(lim.va * np.cos(pm) + w.wx, lim.va * np.sin(pm) + w.wy)
        # chord vs arc difference is O(omega^2 dt^2)
        assert np.allclose(speed, ref, atol=1e-3)


def test_path_csv_and_json():
    s, g, w, lim, prob, sol = _one()
    path = construct_path(sol, prob, 0.5, w, origin=s)
    rows = list(csv.reader(io.StringIO(path.to_csv())))
    assert rows[0] == ["t", "x", "y", "z", "psi"]
    assert len(rows) == len(path) + 1
    assert float(rows[-1][0]) == sol.T
    data = json.loads(path.to_json())
    assert data["columns"] == ["t", "x", "y", "z", "psi"] and len(data["samples"]) == len(path)
    assert path.samples[0][1].x == s.x


def test_construct_path_rejects_bad_dt():
    s, g, w, lim, prob, sol = _one()
    with pytest.raises(ValueError):
        construct_path(sol, prob, 0.0, w)


def test_wind_frame_problem_is_consistent():
    s, g, w, lim, prob, sol = _one()
    assert prob.start == to_wind_frame(s, w)
    assert prob.vw == pytest.approx(w.speed)
