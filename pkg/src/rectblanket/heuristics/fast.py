"""FAST: seed an all-ones window, grow it greedily, erase it, repeat.

Erased pixels count as 0 afterwards and growth may not enter a placed
rectangle, so the output never overlaps.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..geometry import BinaryImage, Blanket, Rect, blanket_objective
from ..solution import BlanketSolution, Status


@dataclass
class FastConfig:
    tau: float = 0.5

    def __post_init__(self):
        if not 0.0 <= self.tau <= 1.0:
            raise ValueError("tau must lie in [0, 1]")


def benefit(r: Rect, image, tau: float) -> float:
    """Sum of (I - tau) over r; ``image`` is a BinaryImage or a 0/1 array."""
    if isinstance(image, BinaryImage):
        ones = image.ones_in(r)
    else:
        ones = int(np.asarray(image)[r.top - 1:r.bottom, r.left - 1:r.right].sum())
    return ones - tau * r.area


def _table(a: np.ndarray) -> np.ndarray:
    s = np.zeros((a.shape[0] + 1, a.shape[1] + 1), dtype=np.int64)
    s[1:, 1:] = a.cumsum(0).cumsum(1)
    return s


def _seed(work: np.ndarray, sw: int, sh: int):
    """Lexicographically first (top, left) sw x sh window of all ones, or None."""
    s = _table(work)
    counts = s[sh:, sw:] - s[:-sh, sw:] - s[sh:, :-sw] + s[:-sh, :-sw]
    hits = np.argwhere(counts == sw * sh)
    if hits.size == 0:
        return None
    t, l = hits[0]
    return Rect(int(l) + 1, int(l) + sw, int(t) + 1, int(t) + sh)


def fast_solve(image: BinaryImage, k: int, config: FastConfig = None) -> BlanketSolution:
    config = config or FastConfig()
    if k < 1:
        raise ValueError("k must be >= 1")
    tau = config.tau
    W, H = image.width, image.height
    work = image.pixels.astype(np.int64)
    taken = np.zeros((H, W), dtype=bool)
    rects, traces = [], []
    sw, sh = max(1, W // 2), max(1, H // 2)
    while len(rects) < k and work.any():
        seed = _seed(work, sw, sh)
        while seed is None:
            sw, sh = max(1, sw // 2), max(1, sh // 2)
            seed = _seed(work, sw, sh)
        s = _table(work)

        def f(r):
            ones = s[r.bottom, r.right] - s[r.top - 1, r.right] - s[r.bottom, r.left - 1] + s[r.top - 1, r.left - 1]
            return float(ones) - tau * r.area

        r, fr = seed, f(seed)
        trace = [fr]
        while True:
            best = None
            for cand in (Rect(r.left, r.right, r.top - 1, r.bottom), Rect(r.left - 1, r.right, r.top, r.bottom),
                         Rect(r.left, r.right, r.top, r.bottom + 1), Rect(r.left, r.right + 1, r.top, r.bottom)):
                if not image.in_bounds(cand):
                    continue
                if taken[cand.top - 1:cand.bottom, cand.left - 1:cand.right].any():
                    continue
                fc = f(cand)
                if fc > fr and (best is None or fc > best[1]):
                    best = (cand, fc)
            if best is None:
                break
            r, fr = best
            trace.append(fr)
        rects.append(r)
        traces.append(trace)
        taken[r.top - 1:r.bottom, r.left - 1:r.right] = True
        work[r.top - 1:r.bottom, r.left - 1:r.right] = 0

    rects.sort(key=Rect.key)
    blanket = Blanket(rects)
    return BlanketSolution(blanket, blanket_objective(image, blanket), status=Status.FEASIBLE,
                           method="fast", stats={"growth": traces})
