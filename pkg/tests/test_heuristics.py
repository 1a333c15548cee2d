import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rectblanket.geometry import BinaryImage, Rect, blanket_objective, validate_blanket
from rectblanket.heuristics import (PERFECT_FIT, CsaConfig, CsaState, FastConfig, SfConfig, benefit,
                                    csa_energy, csa_solve, fast_solve, fitness, sf_solve)
from rectblanket.heuristics.split_fit import split_pairs
from rectblanket.oracle import exact_solve
from rectblanket.shapes import gen_shape

from conftest import MID_COL, MID_ROW, random_image


def test_fitness(plus3):
    assert fitness(MID_ROW, plus3) == PERFECT_FIT
    assert fitness(plus3.full_rect(), plus3) == 0.25
    assert fitness(Rect(1, 1, 1, 1), plus3) == 1.0
    assert PERFECT_FIT > 1e300


def test_split_pairs():
    r = Rect(1, 4, 1, 3)
    pairs = split_pairs(r, 2)
    assert (Rect(1, 2, 1, 3), Rect(3, 4, 1, 3)) in pairs
    for a, b in split_pairs(Rect(1, 7, 2, 6), 4):
        assert a.area + b.area == 35 and not a.intersects(b)
    assert split_pairs(Rect(2, 2, 2, 2), 3) == []


def test_sf_examples(plus3):
    ones = BinaryImage(np.ones((2, 2), bool))
    sol = sf_solve(ones, 1)
    assert sol.objective == 0 and sol.rects == [Rect(1, 2, 1, 2)]
    sol = sf_solve(plus3, 1)
    assert sol.objective == 2 and sol.rects[0] in (MID_ROW, MID_COL)
    solid = gen_shape("solid", 6, 4)
    for k in range(1, 8):
        assert sf_solve(solid, k, SfConfig(rho=2)).objective == 0
    with pytest.raises(ValueError):
        SfConfig(rho=1)


def test_benefit(plus3):
    assert benefit(MID_ROW, plus3, 0.5) == 1.5
    assert benefit(plus3.full_rect(), plus3, 0.5) == 0.5
    assert benefit(Rect(1, 3, 1, 1), plus3, 1.0) < 0
    assert benefit(MID_COL, plus3, 1.0) == 0


def test_fast_examples(plus3):
    solid = gen_shape("solid", 4, 4)
    sol = fast_solve(solid, 1, FastConfig(0.5))
    assert sol.objective == 0 and sol.rects == [Rect(1, 4, 1, 4)]
    sol = fast_solve(plus3, 1)
    assert sol.objective == 2 and sol.rects[0] in (MID_ROW, MID_COL)
    sol = fast_solve(plus3, 5)
    assert sol.objective == 0 and len(sol.rects) == 3
    with pytest.raises(ValueError):
        FastConfig(tau=1.5)


def test_csa_energy_examples(plus3):
    st_ = CsaState([MID_ROW, MID_COL], lambda1=2, lambda2=3)
    assert csa_energy(st_, plus3, 1) == 2
    feas = CsaState([MID_ROW], lambda1=7, lambda2=9)
    assert csa_energy(feas, plus3, 1) == -3
    assert csa_energy(CsaState(), plus3, 3) == 0


def test_csa_examples(plus3):
    ones = BinaryImage(np.ones((2, 2), bool))
    hits = sum(csa_solve(ones, 1, CsaConfig(seed=s)).objective == 0 for s in range(100))
    assert hits >= 95
    img = random_image(np.random.default_rng(0), 5, 5, 0.5)
    sol = csa_solve(img, 0)
    assert sol.rects == [] and sol.objective == img.area
    for s in range(10):
        sol = csa_solve(plus3, 3, CsaConfig(seed=s))
        assert sol.objective >= 0 and validate_blanket(sol.blanket, 3, plus3).ok


def test_csa_energy_bookkeeping():
    img = random_image(np.random.default_rng(4), 9, 7, 0.5)
    sol = csa_solve(img, 3, CsaConfig(seed=3, check_energy=True, max_temps=10))
    assert sol.stats["max_energy_drift"] <= 1e-9


def test_csa_seeded_identical():
    img = random_image(np.random.default_rng(5), 10, 10, 0.5)
    a = csa_solve(img, 4, CsaConfig(seed=11))
    b = csa_solve(img, 4, CsaConfig(seed=11))
    assert a.rects == b.rects and a.stats == b.stats


def test_csa_config_validation():
    for bad in (dict(beta=1.0), dict(beta=0.0), dict(t0=0.0), dict(moves_per_temp=0)):
        with pytest.raises(ValueError):
            CsaConfig(**bad)


def test_fast_growth_never_decreases():
    rng = np.random.default_rng(6)
    for _ in range(20):
        img = random_image(rng, 12, 9, rng.uniform(0.3, 0.8))
        for trace in fast_solve(img, 6).stats["growth"]:
            assert all(b > a for a, b in zip(trace, trace[1:]))


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 7), st.integers(2, 7), st.integers(0, 10**6), st.floats(0.2, 0.8), st.integers(1, 3))
def test_heuristics_feasible_and_dominated(W, H, seed, density, k):
    img = random_image(np.random.default_rng(seed), W, H, density)
    best = exact_solve(img, k).objective
    for sol in (sf_solve(img, k), fast_solve(img, k), csa_solve(img, k, CsaConfig(seed=seed, max_temps=8))):
        assert validate_blanket(sol.blanket, k, img).ok
        assert sol.objective == blanket_objective(img, sol.blanket)
        assert sol.objective >= best
