import math

import numpy as np
import pytest

from rectblanket.bnp import RULE1, RULE2, SolverConfig, find_branch_target, lagrangean_bound, solve
from rectblanket.geometry import BinaryImage, validate_blanket
from rectblanket.master import Column, LpSolution
from rectblanket.oracle import exact_solve
from rectblanket.solution import Status

from conftest import MID_COL, MID_ROW, random_image


def _lp(x):
    return LpSolution(0.0, 0.0, x, np.zeros((3, 3)), 0.0, [], 0.0, ())


def test_lagrangean_bound():
    assert lagrangean_bound(-1, -3, 2) == -5
    assert lagrangean_bound(0.0, -4.5, 3) == -4.5


def test_branch_target_examples():
    cols = {0: Column(0, MID_ROW, -3), 1: Column(1, MID_COL, -3)}
    assert find_branch_target(_lp({0: 0.5, 1: 0.5}), cols, RULE2, 3, 3) == ((1, 2), (2, 2))
    assert find_branch_target(_lp({0: 0.3, 1: 1.0}), cols, RULE1) == 0
    assert find_branch_target(_lp({0: 0.4, 1: 0.6}), cols, RULE1) == 0
    with pytest.raises(ValueError):
        find_branch_target(_lp({0: 1.0, 1: 0.0}), cols, RULE2, 3, 3)


def test_config_validation():
    for bad in (dict(k=-1), dict(k=1, alpha=1.0), dict(k=1, rule=3), dict(k=1, capacity=0)):
        with pytest.raises(ValueError):
            SolverConfig(**bad)


@pytest.mark.parametrize("rule", [RULE1, RULE2])
def test_plus3_ladder(plus3, rule):
    for k, want in [(1, 2), (2, 1), (3, 0), (4, 0), (6, 0)]:
        sol = solve(plus3, SolverConfig(k=k, rule=rule))
        assert sol.status is Status.OPTIMAL and sol.objective == want
        assert validate_blanket(sol.blanket, k, plus3).ok
        assert math.ceil(sol.lower_bound - 1e-9) == sol.objective


def test_plus3_root_lp(plus3):
    sol = solve(plus3, SolverConfig(k=3))
    assert sol.stats["root_lp"] == pytest.approx(-5)
    assert set(sol.rects) == {MID_COL, *[r for r in sol.rects if r.area == 1]}


def test_trivial_cases():
    zeros = BinaryImage(np.zeros((3, 4), bool))
    sol = solve(zeros, SolverConfig(k=2))
    assert sol.objective == 0 and sol.rects == [] and sol.stats["colgen_iterations"] == 1
    img = random_image(np.random.default_rng(0), 4, 4, 0.5)
    sol = solve(img, SolverConfig(k=0))
    assert sol.objective == img.area and sol.rects == []
    ones = BinaryImage(np.ones((2, 2), bool))
    assert solve(ones, SolverConfig(k=1)).objective == 0


def _sandwich(sol):
    by_node = {}
    for row in sol.trace:
        by_node.setdefault(row["node"], []).append(row)
    for rows in by_node.values():
        final = rows[-1]["z_rlpm"]
        for row in rows:
            assert row["lb"] <= final + 1e-6
            assert final <= row["z_rlpm"] + 1e-6


@pytest.mark.parametrize("seed", range(20))
def test_random_8x8_matches_oracle(seed):
    rng = np.random.default_rng(100 + seed)
    img = random_image(rng, 8, 8, rng.uniform(0.3, 0.7))
    prev = None
    for k in (1, 2, 3, 4):
        want = exact_solve(img, k).objective if k <= 3 else None
        objs = set()
        for rule in (RULE1, RULE2):
            sol = solve(img, SolverConfig(k=k, rule=rule))
            assert sol.status is Status.OPTIMAL
            assert validate_blanket(sol.blanket, k, img).ok
            _sandwich(sol)
            objs.add(sol.objective)
        assert len(objs) == 1
        z = objs.pop()
        if want is not None:
            assert z == want
        if prev is not None:
            assert z <= prev
        prev = z


def test_deterministic():
    img = random_image(np.random.default_rng(9), 7, 6, 0.5)
    a = solve(img, SolverConfig(k=3))
    b = solve(img, SolverConfig(k=3))
    assert a.rects == b.rects and a.trace == b.trace


def test_time_limit_reports_bound():
    img = random_image(np.random.default_rng(3), 10, 10, 0.5)
    sol = solve(img, SolverConfig(k=5, time_limit=0.0))
    assert sol.status is Status.TIME_LIMIT
    assert sol.lower_bound <= sol.objective
    assert validate_blanket(sol.blanket, 5, img).ok


def test_incumbent_and_bound_histories():
    from rectblanket.bnp import BranchAndPrice
    img = random_image(np.random.default_rng(21), 9, 9, 0.5)
    bp = BranchAndPrice(img, SolverConfig(k=3, rule=RULE1))
    bp.run()
    values = [v for _, v in bp.incumbent_history]
    assert values == sorted(values, reverse=True)


def test_misprice_falls_back_to_unsmoothed(plus3):
    sol = solve(plus3, SolverConfig(k=3))
    rows = sol.trace
    for prev, row in zip(rows, rows[1:]):
        if prev["misprice"]:
            assert row["alpha"] == 0.0
    assert any(r["misprice"] for r in rows)
