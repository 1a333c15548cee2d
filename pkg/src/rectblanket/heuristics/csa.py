"""Constrained simulated annealing over possibly infeasible rectangle lists.

The annealer minimises the Lagrange function

    L(x, lam) = sum c(r) + lam1 * max(0, n - k) + lam2 * overlap(x)

over rectangle lists x and maximises it over the multipliers, where
``overlap`` counts shared pixels over ordered pairs. Only feasible states
(n <= k, no overlap) are eligible as the answer.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from ..geometry import BinaryImage, Blanket, Rect, rect_cost
from ..solution import BlanketSolution, Status

MOVES = ("grow", "shrink", "split", "delete", "create")


@dataclass
class CsaConfig:
    t0: Optional[float] = None        # None: calibrate from probe moves
    beta: float = 0.95
    moves_per_temp: int = 200
    max_temps: int = 50
    unchanged_levels: int = 3
    lambda_step: Tuple[float, float] = (1.0, 1.0)
    lambda_interval: int = 10         # x-moves between lambda moves
    initial_lambda: Tuple[float, float] = (1.0, 1.0)
    probe_moves: int = 100
    seed: int = 0
    check_energy: bool = False

    def __post_init__(self):
        if not 0.0 < self.beta < 1.0:
            raise ValueError("beta must lie in (0, 1)")
        if self.t0 is not None and self.t0 <= 0:
            raise ValueError("t0 must be positive")
        if self.moves_per_temp < 1 or self.max_temps < 1 or self.lambda_interval < 1:
            raise ValueError("schedule lengths must be >= 1")
        if min(self.initial_lambda) < 0 or min(self.lambda_step) < 0:
            raise ValueError("multipliers and steps must be nonnegative")


@dataclass
class CsaState:
    rects: List[Rect] = field(default_factory=list)
    lambda1: float = 1.0
    lambda2: float = 1.0
    energy: float = 0.0
    best_feasible: Optional[Blanket] = None
    best_objective: Optional[int] = None


def _h(rects, k: int) -> Tuple[int, int]:
    h1 = max(0, len(rects) - k)
    h2 = 0
    for i, a in enumerate(rects):
        for j, b in enumerate(rects):
            if i != j:
                h2 += a.overlap_area(b)
    return h1, h2


def csa_energy(state: CsaState, image: BinaryImage, k: int) -> float:
    """Lagrange value of ``state`` recomputed from scratch."""
    h1, h2 = _h(state.rects, k)
    return sum(rect_cost(image, r) for r in state.rects) + state.lambda1 * h1 + state.lambda2 * h2


class _Annealer:
    """Incremental bookkeeping: per-pixel cover counts give the overlap term."""

    def __init__(self, image: BinaryImage, k: int, config: CsaConfig):
        self.image = image
        self.k = k
        self.cfg = config
        self.rng = np.random.default_rng(config.seed)
        self.rects: List[Rect] = []
        self.count = np.zeros((image.height, image.width), dtype=np.int64)
        self.cost = 0
        self.overlap = 0  # sum over pixels of m * (m - 1)
        self.lam = list(config.initial_lambda)

    def energy(self) -> float:
        return (self.cost + self.lam[0] * max(0, len(self.rects) - self.k)
                + self.lam[1] * self.overlap)

    def _add(self, r: Rect) -> None:
        block = self.count[r.top - 1:r.bottom, r.left - 1:r.right]
        self.overlap += 2 * int(block.sum())
        block += 1
        self.cost += rect_cost(self.image, r)

    def _remove(self, r: Rect) -> None:
        block = self.count[r.top - 1:r.bottom, r.left - 1:r.right]
        block -= 1
        self.overlap -= 2 * int(block.sum())
        self.cost -= rect_cost(self.image, r)

    def propose(self):
        """Draw a random x-move as (index to replace or None, new rects); None if impossible."""
        W, H = self.image.width, self.image.height
        kind = MOVES[self.rng.integers(len(MOVES))]
        n = len(self.rects)
        if kind == "create":
            l, r = sorted(self.rng.integers(1, W + 1, size=2))
            t, b = sorted(self.rng.integers(1, H + 1, size=2))
            return None, [Rect(int(l), int(r), int(t), int(b))]
        if n == 0:
            return None
        i = int(self.rng.integers(n))
        r = self.rects[i]
        if kind == "delete":
            return i, []
        if kind in ("grow", "shrink"):
            edge = int(self.rng.integers(4))
            d = 1 if kind == "grow" else -1
            l, rr, t, b = r.left, r.right, r.top, r.bottom
            if edge == 0:
                t -= d
            elif edge == 1:
                l -= d
            elif edge == 2:
                b += d
            else:
                rr += d
            new = Rect(l, rr, t, b)
            if not new.is_valid() or not self.image.in_bounds(new):
                return None
            return i, [new]
        # split
        if self.rng.integers(2) == 0:
            if r.width < 2:
                return None
            cut = int(self.rng.integers(r.left, r.right))
            return i, [Rect(r.left, cut, r.top, r.bottom), Rect(cut + 1, r.right, r.top, r.bottom)]
        if r.height < 2:
            return None
        cut = int(self.rng.integers(r.top, r.bottom))
        return i, [Rect(r.left, r.right, r.top, cut), Rect(r.left, r.right, cut + 1, r.bottom)]

    def apply(self, move) -> Tuple[float, object]:
        """Apply a move, returning (energy delta, undo token)."""
        before = self.energy()
        i, new = move
        old = None
        if i is not None:
            old = self.rects.pop(i)
            self._remove(old)
        for r in new:
            self._add(r)
            self.rects.append(r)
        return self.energy() - before, (i, old, len(new))

    def undo(self, token) -> None:
        i, old, n_new = token
        for _ in range(n_new):
            self._remove(self.rects.pop())
        if old is not None:
            self._add(old)
            self.rects.insert(i, old)

    def feasible(self) -> bool:
        return len(self.rects) <= self.k and self.overlap == 0


def csa_solve(image: BinaryImage, k: int, config: CsaConfig = None) -> BlanketSolution:
    config = config or CsaConfig()
    if k < 0:
        raise ValueError("k must be >= 0")
    a = _Annealer(image, k, config)
    best_cost, best_rects = 0, []  # the empty start is feasible

    # calibrate T0 from probe moves that are undone immediately
    if config.t0 is None:
        deltas = []
        for _ in range(config.probe_moves):
            move = a.propose()
            if move is None:
                continue
            d, token = a.apply(move)
            a.undo(token)
            deltas.append(abs(d))
        T = float(np.mean(deltas)) if deltas and np.mean(deltas) > 0 else 1.0
    else:
        T = config.t0
    t_initial = T

    accepted = rejected = lambda_moves = 0
    max_drift = 0.0
    unchanged = 0
    temps = 0
    x_moves = 0
    prev = (tuple(a.rects), tuple(a.lam))
    while temps < config.max_temps and unchanged < config.unchanged_levels:
        for _ in range(config.moves_per_temp):
            x_moves += 1
            if x_moves % config.lambda_interval == 0:
                h = (max(0, len(a.rects) - k), a.overlap)
                for j in (0, 1):
                    if h[j] > 0:
                        d = config.lambda_step[j] * h[j]
                        # multipliers ascend: accept with exp(+dL / T)
                        if d >= 0 or a.rng.random() < math.exp(d / T):
                            a.lam[j] += config.lambda_step[j]
                            lambda_moves += 1
            move = a.propose()
            if move is None:
                rejected += 1
                continue
            d, token = a.apply(move)
            if d <= 0 or a.rng.random() < math.exp(-d / T):
                accepted += 1
                if config.check_energy:
                    st = CsaState(list(a.rects), a.lam[0], a.lam[1])
                    max_drift = max(max_drift, abs(csa_energy(st, image, k) - a.energy()))
                if a.feasible() and a.cost < best_cost:
                    best_cost, best_rects = a.cost, list(a.rects)
            else:
                a.undo(token)
                rejected += 1
        temps += 1
        T *= config.beta
        cur = (tuple(a.rects), tuple(a.lam))
        unchanged = unchanged + 1 if cur == prev else 0
        prev = cur

    rects = sorted(best_rects, key=Rect.key)
    stats = {"temperatures": temps, "t0": t_initial, "accepted": accepted, "rejected": rejected,
             "lambda_moves": lambda_moves, "lambda": list(a.lam), "final_energy": a.energy()}
    if config.check_energy:
        stats["max_energy_drift"] = max_drift
    return BlanketSolution(Blanket(rects), image.area + best_cost, status=Status.FEASIBLE,
                           method="csa", stats=stats)
