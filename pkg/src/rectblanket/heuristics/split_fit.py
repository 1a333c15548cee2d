"""Split-and-Fit: top-down splitting of the image frame, then edge shrinking."""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import List, Tuple

from ..geometry import BinaryImage, Blanket, Rect, blanket_objective, rect_cost
from ..solution import BlanketSolution, Status

PERFECT_FIT = math.inf  # a rectangle with no 0-pixels beats any finite fitness


@dataclass
class SfConfig:
    rho: int = 3

    def __post_init__(self):
        if self.rho < 2:
            raise ValueError("rho must be >= 2")


def fitness(r: Rect, image: BinaryImage) -> float:
    zeros = image.zeros_in(r)
    return PERFECT_FIT if zeros == 0 else 1.0 / zeros


def split_pairs(r: Rect, rho: int) -> List[Tuple[Rect, Rect]]:
    """Vertical then horizontal cuts at i/rho of each side, without degenerate halves."""
    out = []
    seen = set()
    for i in range(1, rho):
        w = round(i * r.width / rho)
        if 0 < w < r.width and ("v", w) not in seen:
            seen.add(("v", w))
            cut = r.left + w - 1
            out.append((Rect(r.left, cut, r.top, r.bottom), Rect(cut + 1, r.right, r.top, r.bottom)))
    for i in range(1, rho):
        h = round(i * r.height / rho)
        if 0 < h < r.height and ("h", h) not in seen:
            seen.add(("h", h))
            cut = r.top + h - 1
            out.append((Rect(r.left, r.right, r.top, cut), Rect(r.left, r.right, cut + 1, r.bottom)))
    return out


_MOVES = (  # top, left, bottom, right pulled one pixel inward
    lambda r: Rect(r.left, r.right, r.top + 1, r.bottom),
    lambda r: Rect(r.left + 1, r.right, r.top, r.bottom),
    lambda r: Rect(r.left, r.right, r.top, r.bottom - 1),
    lambda r: Rect(r.left, r.right - 1, r.top, r.bottom),
)


def shrink(r: Rect, image: BinaryImage) -> Tuple[Rect, int]:
    """Pull edges inward one pixel at a time, cycling top/left/bottom/right, while cost drops."""
    cost = rect_cost(image, r)
    steps = 0
    improved = True
    while improved:
        improved = False
        for move in _MOVES:
            cand = move(r)
            if not cand.is_valid():
                continue
            c = rect_cost(image, cand)
            if c < cost:
                r, cost = cand, c
                steps += 1
                improved = True
    return r, steps


def sf_solve(image: BinaryImage, k: int, config: SfConfig = None) -> BlanketSolution:
    config = config or SfConfig()
    if k < 1:
        raise ValueError("k must be >= 1")
    placed = [image.full_rect()]
    queue = []  # (worse fitness, seq, parent, a, b)
    seq = 0

    def propose(parent):
        nonlocal seq
        for a, b in split_pairs(parent, config.rho):
            heapq.heappush(queue, (min(fitness(a, image), fitness(b, image)), seq, parent, a, b))
            seq += 1

    propose(placed[0])
    splits = 0
    while len(placed) < k and queue:
        _, _, parent, a, b = heapq.heappop(queue)
        if parent not in placed:  # sibling of an applied split
            continue
        placed.remove(parent)
        placed += [a, b]
        propose(a)
        propose(b)
        splits += 1

    rects, steps = [], 0
    for r in placed:
        r, n = shrink(r, image)
        steps += n
        if rect_cost(image, r) <= 0:
            rects.append(r)
    rects.sort(key=Rect.key)
    blanket = Blanket(rects)
    return BlanketSolution(blanket, blanket_objective(image, blanket), status=Status.FEASIBLE,
                           method="sf", stats={"splits": splits, "shrink_steps": steps,
                                               "dropped": len(placed) - len(rects)})
