import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rectblanket.geometry import Rect, build_integrals, image_weights
from rectblanket.oracle import enumerate_rectangles, exact_min_rect
from rectblanket.pricing import (Admissibility, FixedWeights, PairDiffer, PairSame, RectSet,
                                 admissible, bisect, lower_bound, solve_pricing)

from conftest import MID_COL, MID_ROW


def _value(w, r):
    return float(w[r.top - 1:r.bottom, r.left - 1:r.right].sum())


def _ok(r, constraints, prohibited=()):
    if r in prohibited:
        return False
    for c in constraints:
        if isinstance(c, PairDiffer) and r.contains(c.e) and r.contains(c.f):
            return False
        if isinstance(c, PairSame) and r.contains(c.e) != r.contains(c.f):
            return False
    return True


def _brute(w, constraints=(), prohibited=()):
    H, W = w.shape
    vals = [(_value(w, r), r.key(), r) for r in enumerate_rectangles(W, H) if _ok(r, constraints, prohibited)]
    return sorted(vals)


def test_lower_bound_examples(plus3):
    t = build_integrals(image_weights(plus3))
    assert lower_bound(RectSet.root(3, 3), t) == -5
    assert lower_bound(RectSet((2, 2), (1, 1), (2, 2), (3, 3)), t) == -3
    rs = RectSet((2, 2), (1, 1), (2, 2), (2, 3))
    assert lower_bound(rs, t) == -3
    assert min(_value(image_weights(plus3), r) for r in rs.members()) == -3


def test_bisect_examples():
    a, b = bisect(RectSet((1, 3), (1, 1), (1, 1), (1, 1)))
    assert a.top == (1, 2) and b.top == (3, 3)
    a, b = bisect(RectSet.root(3, 3))
    assert a.top == (1, 2) and b.top == (3, 3) and a.left == (1, 3)
    with pytest.raises(ValueError):
        bisect(RectSet((1, 1), (2, 2), (1, 1), (2, 2)))


def _random_set(rng, W, H):
    iv = []
    for n in (H, W, H, W):
        lo, hi = sorted(rng.integers(1, n + 1, 2))
        iv.append((int(lo), int(hi)))
    return RectSet(*iv)


def test_bisect_partitions_members():
    rng = np.random.default_rng(0)
    done = 0
    while done < 50:
        rs = _random_set(rng, 6, 6)
        if rs.is_singleton() or not rs.members():
            continue
        a, b = bisect(rs)
        ma, mb = set(a.members()), set(b.members())
        assert not ma & mb and ma | mb == set(rs.members())
        assert rs.size() == len(rs.members())
        done += 1


def test_bound_is_monotone_and_valid():
    rng = np.random.default_rng(1)
    for _ in range(100):
        w = rng.uniform(-3, 3, (6, 6))
        t = build_integrals(w)
        rs = _random_set(rng, 6, 6)
        members = rs.members()
        if not members or rs.is_singleton():
            continue
        lb = lower_bound(rs, t)
        assert lb <= min(_value(w, r) for r in members) + 1e-9
        kids = [c.normalized() for c in bisect(rs)]
        assert min(lower_bound(c, t) for c in kids if c is not None) >= lb - 1e-12


def test_admissible_examples():
    single = RectSet((2, 2), (1, 1), (2, 2), (3, 3))
    assert admissible(single, PairDiffer((1, 2), (2, 2))) is Admissibility.NONE
    assert admissible(RectSet.root(3, 3), PairSame((1, 1), (3, 3))) is Admissibility.MIXED
    col = RectSet((1, 1), (2, 2), (3, 3), (2, 2))
    assert admissible(col, PairDiffer((1, 2), (3, 2))) is Admissibility.ALL


def test_admissible_agrees_with_members():
    rng = np.random.default_rng(2)
    pix = [(x, y) for x in range(1, 6) for y in range(1, 6)]
    for _ in range(400):
        rs = _random_set(rng, 5, 5)
        members = rs.members()
        if not members:
            continue
        i, j = rng.choice(len(pix), 2, replace=False)
        for cls in (PairDiffer, PairSame):
            c = cls(pix[i], pix[j])
            ok = [_ok(r, [c]) for r in members]
            got = admissible(rs, c)
            if got is Admissibility.ALL:
                assert all(ok)
            elif got is Admissibility.NONE:
                assert not any(ok)


def test_pricing_examples(plus3):
    w = image_weights(plus3)
    best = solve_pricing(w, capacity=1)
    assert len(best) == 1 and best[0].value == -3 and best[0].rect in (MID_ROW, MID_COL)
    cons = [PairDiffer((1, 2), (2, 2)), PairDiffer((2, 1), (2, 2))]
    got = solve_pricing(w, cons, capacity=1)
    assert got[0].value == _brute(w, cons)[0][0]
    zeros = np.ones((2, 2))
    assert solve_pricing(zeros)[0].value == 1
    top = solve_pricing(w, capacity=1)[0].rect
    assert solve_pricing(w, capacity=1, prohibited=[top])[0].value == _brute(w, (), [top])[0][0]


def test_all_excluded_gives_empty():
    w = np.ones((1, 2))
    assert solve_pricing(w, [PairDiffer((1, 1), (2, 1))], prohibited=[Rect(1, 1, 1, 1), Rect(2, 2, 1, 1)]) == []


def test_fixed_weights_block_pixels(plus3):
    w = image_weights(plus3)
    got = solve_pricing(w, [FixedWeights(tuple(MID_ROW.pixels()))], capacity=5)
    assert all(not p.rect.intersects(MID_ROW) for p in got)
    assert got[0].value == -1


def test_rewards_and_mu(plus3):
    w = image_weights(plus3)
    got = solve_pricing(w, capacity=3, mu=-2.0, rewards=[((1, 2), (3, 2), 1.5)])
    assert got[0].rect == MID_ROW and got[0].value == -4.5 and got[0].reduced_cost == -2.5
    with pytest.raises(ValueError):
        solve_pricing(w, rewards=[((1, 2), (3, 2), -1.0)])
    with pytest.raises(ValueError):
        solve_pricing(w, capacity=0)


@st.composite
def pricing_case(draw):
    W, H = draw(st.integers(1, 7)), draw(st.integers(1, 7))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    w = rng.uniform(-3, 3, (H, W))
    cons = []
    if W * H >= 2:
        pix = [(x, y) for x in range(1, W + 1) for y in range(1, H + 1)]
        for _ in range(draw(st.integers(0, 3))):
            i, j = rng.choice(len(pix), 2, replace=False)
            cls = PairSame if rng.random() < 0.5 else PairDiffer
            cons.append(cls(pix[i], pix[j]))
    return w, cons, draw(st.integers(1, 6)), draw(st.sampled_from([1, 8, 256, 10**9]))


@settings(max_examples=150, deadline=None)
@given(pricing_case())
def test_pricing_matches_brute_force(case):
    w, cons, cap, thr = case
    expect = _brute(w, cons)
    got = solve_pricing(w, cons, capacity=cap, naive_threshold=thr)
    assert [p.rect for p in got] == [r for _, _, r in expect[:cap]]
    assert all(_ok(p.rect, cons) for p in got)
    for p, (v, _, _) in zip(got, expect):
        assert p.value == pytest.approx(v, abs=1e-9)


def test_oracle_min_rect_agrees():
    rng = np.random.default_rng(5)
    for _ in range(30):
        H, W = rng.integers(1, 12, 2)
        w = rng.uniform(-3, 3, (H, W))
        a, b = solve_pricing(w, capacity=1)[0], exact_min_rect(w)
        assert a.value == b.value and a.rect == b.rect
