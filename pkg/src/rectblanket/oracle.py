"""Brute-force reference solvers for desk-scale instances.

Nothing here reuses the pricing or branch-and-price search code: rectangles
are enumerated directly and the blanket search is a plain depth-first search
over disjoint rectangle sets.
"""
from __future__ import annotations

from typing import List

import numpy as np

from .geometry import BinaryImage, Blanket, Rect, build_integrals
from .pricing import PairDiffer, PricedRect
from .solution import BlanketSolution, Status

MAX_RECTS = 10_000
MAX_PRICING_RECTS = 250_000  # 30x30; pricing checks need larger frames than blanket search


class OracleSizeError(ValueError):
    pass


def n_rectangles(W: int, H: int) -> int:
    return W * (W + 1) * H * (H + 1) // 4


def _guard(W: int, H: int, limit: int = MAX_RECTS) -> None:
    if W < 1 or H < 1:
        raise ValueError("width and height must be >= 1")
    if n_rectangles(W, H) > limit:
        raise OracleSizeError(f"{W}x{H} has {n_rectangles(W, H)} rectangles; oracle limit is {limit}")


def enumerate_rectangles(W: int, H: int) -> List[Rect]:
    """All rectangles of a W x H frame, ordered by (top, left, bottom, right)."""
    if W < 1 or H < 1:
        raise ValueError("width and height must be >= 1")
    return [Rect(l, r, t, b)
            for t in range(1, H + 1) for l in range(1, W + 1)
            for b in range(t, H + 1) for r in range(l, W + 1)]


def exact_solve(image: BinaryImage, k: int) -> BlanketSolution:
    """Optimal blanket by exhaustive depth-first search with a simple bound."""
    if k < 0:
        raise ValueError("k must be >= 0")
    W, H = image.width, image.height
    _guard(W, H)
    px = image.pixels
    n_ones = int(px.sum())

    # candidates: rectangles with negative cost, as packed pixel bitmasks
    rects, costs, ones_in = [], [], []
    for r in enumerate_rectangles(W, H):
        block = px[r.top - 1:r.bottom, r.left - 1:r.right]
        ones = int(block.sum())
        cost = block.size - 2 * ones
        if cost < 0:
            rects.append(r)
            costs.append(cost)
            ones_in.append(ones)
    order = sorted(range(len(rects)), key=lambda i: (costs[i], rects[i].key()))
    rects = [rects[i] for i in order]
    costs = np.array([costs[i] for i in order], dtype=np.int64)
    ones_in = [ones_in[i] for i in order]
    cover = np.zeros((len(rects), H * W), dtype=bool)
    for i, r in enumerate(rects):
        cover[i].reshape(H, W)[r.top - 1:r.bottom, r.left - 1:r.right] = True
    masks = np.packbits(cover, axis=1)
    ones_flat = px.ravel().astype(np.int64)

    # greedy start: cheapest disjoint rectangles first
    used = np.zeros(masks.shape[1], dtype=np.uint8)
    chosen = []
    for i in range(len(rects)):
        if len(chosen) == k:
            break
        if not (masks[i] & used).any():
            chosen.append(i)
            used |= masks[i]
    best = [int(costs[chosen].sum()) if chosen else 0, [rects[i] for i in chosen]]

    def dfs(start, used, left, total, covered_ones, chosen):
        if total < best[0]:
            best[0] = total
            best[1] = list(chosen)
        if left == 0 or start >= len(rects):
            return
        if total - (n_ones - covered_ones) >= best[0]:
            return
        free = start + np.flatnonzero(~(masks[start:] & used).any(axis=1))
        if free.size == 0 or total + int(costs[free[:left]].sum()) >= best[0]:
            return
        # a rectangle costs at least minus its ones, so the rest can gain
        # at most the ones reachable by still-free candidates
        reach = np.unpackbits(np.bitwise_or.reduce(masks[free], axis=0))[:H * W]
        if total - int(ones_flat[reach.astype(bool)].sum()) >= best[0]:
            return
        for i in free:
            # later candidates cost at least costs[i] each
            if total + left * int(costs[i]) >= best[0]:
                break
            if (masks[i] & used).any():
                continue
            chosen.append(rects[i])
            dfs(i + 1, used | masks[i], left - 1, total + int(costs[i]),
                covered_ones + ones_in[i], chosen)
            chosen.pop()

    dfs(0, np.zeros(masks.shape[1], dtype=np.uint8), k, 0, 0, [])
    rects = sorted(best[1], key=Rect.key)
    return BlanketSolution(blanket=Blanket(rects), objective=n_ones + best[0],
                           lower_bound=float(n_ones + best[0]), status=Status.OPTIMAL,
                           method="oracle")


def exact_min_rect(weights, constraints=(), prohibited=()) -> PricedRect:
    """Minimum weight-sum rectangle, ties broken by (top, left, bottom, right).

    Every rectangle is scored from the integral tables in one vectorised
    pass. ``constraints`` may hold pixel-pair rules (checked per rectangle
    by direct containment); returns None when nothing qualifies.
    """
    w = np.asarray(weights, dtype=np.float64)
    if w.ndim != 2 or w.size == 0:
        raise ValueError("weights must be a non-empty 2-D array")
    H, W = w.shape
    _guard(W, H, MAX_PRICING_RECTS)
    t = build_integrals(w)
    rects = enumerate_rectangles(W, H)
    top, left, bottom, right = (np.array(v) for v in zip(*[r.key() for r in rects]))
    vals = t.neg_box(Rect(left, right, top, bottom)) + t.pos_box(Rect(left, right, top, bottom))
    ok = np.ones(len(rects), dtype=bool)
    for c in constraints:
        (ex, ey), (fx, fy) = c.e, c.f
        has_e = (left <= ex) & (ex <= right) & (top <= ey) & (ey <= bottom)
        has_f = (left <= fx) & (fx <= right) & (top <= fy) & (fy <= bottom)
        ok &= ~(has_e & has_f) if isinstance(c, PairDiffer) else (has_e == has_f)
    for r in prohibited:
        ok &= ~((left == r.left) & (right == r.right) & (top == r.top) & (bottom == r.bottom))
    idx = np.flatnonzero(ok)
    if idx.size == 0:
        return None
    # enumeration order is already (top, left, bottom, right); argmin keeps the first
    i = idx[np.argmin(vals[idx])]
    return PricedRect(rects[i], float(vals[i]), float(vals[i]))
