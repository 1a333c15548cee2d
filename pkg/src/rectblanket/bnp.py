"""Exact rectangle blankets by branch-and-price.

Column generation solves each node's LP relaxation, pricing rectangles with
the geometric search in :mod:`rectblanket.pricing`. Dual smoothing
damps oscillation, and a Lagrangean bound stops column generation as soon as
the integer-rounded bound meets the master value or the incumbent.
Fractional nodes are split by variable branching (``rule=1``) or by pixel
pair branching (``rule=2``: two pixels in different rectangles / in the same
rectangle).

Internally objectives are on the cost scale ``sum c(r)``; reported values
add ``|I|`` to give the mismatch area.
"""
from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from .geometry import BinaryImage, Blanket, Rect
from .master import (FixColumn, ForbidColumn, LpSolution, RestrictedMaster)
from .pricing import PairDiffer, PairSame, solve_pricing
from .solution import BlanketSolution, Status

RULE1 = 1
RULE2 = 2
RC_TOL = 1e-6
BOUND_TOL = 1e-6


@dataclass
class SolverConfig:
    k: int
    rule: int = RULE2
    alpha: float = 0.8
    capacity: int = 10
    naive_threshold: int = 256
    initial_lifespan: int = 50
    time_limit: float = 3600.0
    integrality_tol: float = 1e-6

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("k must be >= 0")
        if not 0.0 <= self.alpha < 1.0:
            raise ValueError("alpha must lie in [0, 1)")
        if self.rule not in (RULE1, RULE2):
            raise ValueError("rule must be 1 (variable) or 2 (pixel pair)")
        if self.capacity < 1 or self.naive_threshold < 1 or self.initial_lifespan < 0:
            raise ValueError("capacity and naive_threshold must be >= 1, lifespan >= 0")


@dataclass
class Node:
    id: int
    parent: Optional[int]
    depth: int
    bound: float
    master: RestrictedMaster
    warm: Optional[tuple] = None
    status: str = "open"

    @property
    def constraints(self):
        return self.master.pricing_constraints

    @property
    def prohibited(self):
        return self.master.prohibited

    @property
    def fixed_columns(self):
        return self.master.fixed

    @property
    def local_budget(self) -> int:
        return self.master.budget


def lagrangean_bound(cbar: float, z_rlpm: float, k_local: int) -> float:
    """Lower bound ``k_local * cbar + z_rlpm`` on the LP master value (cbar <= 0)."""
    return k_local * cbar + z_rlpm


def _ceil(v: float) -> float:
    return math.ceil(v - BOUND_TOL) if math.isfinite(v) else v


def find_branch_target(sol: LpSolution, columns: Dict[int, object], rule: int,
                       width: int = None, height: int = None, tol: float = 1e-6):
    """Pick what to branch on for a fractional LP solution.

    Rule 1 returns the id of the fractional column closest to 0.5 (lowest id
    on ties). Rule 2 returns pixels ``(e, f)`` where ``f`` lies in two
    fractional columns and ``e`` in exactly one of them; pixels are scanned
    with x as the outer loop.
    """
    frac = sol.fractional(tol)
    if not frac:
        raise ValueError("LP solution is integral; nothing to branch on")
    if rule == RULE1:
        return min(frac, key=lambda j: (abs(frac[j] - 0.5), j))
    ids = sorted(frac)
    rects = [columns[j].rect for j in ids]
    if width is None:
        width = max(r.right for r in rects)
        height = max(r.bottom for r in rects)
    pixels = [(x, y) for x in range(1, width + 1) for y in range(1, height + 1)]
    for f in pixels:
        covering = [r for r in rects if r.contains(f)]
        for a in range(len(covering)):
            for b in range(a + 1, len(covering)):
                rj, rk = covering[a], covering[b]
                for e in pixels:
                    if rj.contains(e) != rk.contains(e):
                        return e, f
    raise LookupError("no pixel pair separates the fractional columns")


class BranchAndPrice:
    def __init__(self, image: BinaryImage, config: SolverConfig):
        self.image = image
        self.config = config
        self.base_weights = 1.0 - 2.0 * image.pixels.astype(np.float64)
        self.discarded: Dict[Rect, int] = {}
        self.trace: List[dict] = []
        self.stats = {
            "nodes": 0, "columns": 0, "colgen_iterations": 0, "lp_solves": 0,
            "lp_pivots": 0, "misprices": 0, "max_duality_gap": 0.0, "max_dual": -math.inf,
            "root_lp": None, "root_integral": None, "lp_time": 0.0, "pricing_time": 0.0,
        }
        self.incumbent = 0
        self.incumbent_rects: List[Rect] = []
        self.incumbent_history: List[Tuple[int, int]] = [(0, 0)]
        self.bound_history: List[Tuple[int, float]] = []
        self.deadline = math.inf

    # -- column generation ------------------------------------------------

    def solve_node_lp(self, master: RestrictedMaster, warm=None, node_id: int = 0,
                      depth: int = 0) -> Tuple[LpSolution, float, str]:
        """Column generation at one node; returns (solution, best Lagrangean bound, reason).

        ``reason`` is "optimal" (no improving column), "bound" (rounded bound
        meets the master value), "prune" (rounded bound meets the incumbent)
        or "time_limit".
        """
        cfg = self.config
        lb_best = -math.inf
        pi_best = None
        alpha_next = 0.0
        it = 0
        while True:
            t0 = time.perf_counter()
            sol = master.solve(warm)
            self.stats["lp_time"] += time.perf_counter() - t0
            warm = sol.basis
            self.stats["lp_solves"] += 1
            self.stats["lp_pivots"] += sol.pivots
            self.stats["max_duality_gap"] = max(self.stats["max_duality_gap"], sol.duality_gap)
            max_dual = max(float(sol.pi.max(initial=-math.inf)), sol.mu)
            self.stats["max_dual"] = max(self.stats["max_dual"], max_dual)
            for col in master.expire():
                self.discarded[col.rect] = col.lifespan

            alpha = alpha_next if pi_best is not None else 0.0
            pi_t = sol.pi if alpha == 0.0 else alpha * pi_best + (1.0 - alpha) * sol.pi
            sigma = [max(s, 0.0) for s in sol.sigma]
            rewards = [(e, f, s) for (e, f), s in zip(master.same_pairs, sigma) if s > 0.0]
            t0 = time.perf_counter()
            priced = solve_pricing(self.base_weights - pi_t, master.pricing_constraints,
                                   cfg.capacity, master.prohibited, mu=sol.mu, rewards=rewards,
                                   naive_threshold=cfg.naive_threshold)
            self.stats["pricing_time"] += time.perf_counter() - t0
            min_value = priced[0].value if priced else math.inf
            z_tilde = master.offset + float(pi_t.sum()) + sum(sigma) + master.budget * sol.mu
            lb_t = lagrangean_bound(min(min_value, 0.0) - sol.mu, z_tilde, master.budget)
            if lb_t > lb_best:
                lb_best = lb_t
                pi_best = pi_t

            new_rects = []
            for p in priced:
                # blocked pixels only carry a large weight, so filter them explicitly
                if master.has_rect(p.rect) or not master.admits(p.rect):
                    continue
                if master.reduced_cost(p.rect, sol) < -RC_TOL:
                    new_rects.append(p.rect)
            misprice = not new_rects and alpha > 0.0
            self.stats["misprices"] += misprice
            it += 1
            self.stats["colgen_iterations"] += 1
            row = {
                "node": node_id, "depth": depth, "iteration": it,
                "z_rlpm": sol.objective, "lb": lb_best, "lb_iter": lb_t,
                "added": len(new_rects), "misprice": misprice, "alpha": alpha,
                "duality_gap": sol.duality_gap, "max_dual": max_dual, "stop": "",
            }
            self.trace.append(row)

            reason = None
            if not new_rects and not misprice:
                reason = "optimal"
            elif sol.artificial <= 1e-6 and _ceil(lb_best) >= sol.objective - BOUND_TOL:
                reason = "bound"
            elif _ceil(lb_best) >= self.incumbent:
                reason = "prune"
            elif time.perf_counter() > self.deadline:
                reason = "time_limit"
            if reason is not None:
                row["stop"] = reason
                return sol, lb_best, reason

            if misprice:
                alpha_next = 0.0
                continue
            cols = []
            for r in new_rects:
                life = self.discarded.pop(r, None)
                life = cfg.initial_lifespan if life is None else 2 * max(life, 1)
                cols.append(master.make_column(r, lifespan=life))
            master.add_columns(cols)
            self.stats["columns"] += len(cols)
            alpha_next = cfg.alpha

    # -- tree search ---------------------------------------------------------

    def run(self) -> BlanketSolution:
        cfg = self.config
        start = time.perf_counter()
        self.deadline = start + cfg.time_limit
        root = Node(0, None, 0, -math.inf, RestrictedMaster(self.image, cfg.k))
        heap = [(root.bound, 0, 0, root)]
        seq = 1
        timed_out = False
        current_bound = None

        while heap:
            if time.perf_counter() > self.deadline:
                timed_out = True
                break
            _, _, _, node = heapq.heappop(heap)
            if node.bound >= self.incumbent:
                node.status = "pruned"
                continue
            self.stats["nodes"] += 1
            master = node.master
            sol, lb, reason = self.solve_node_lp(master, node.warm, node.id, node.depth)
            bound = max(node.bound, _ceil(lb))
            if reason == "optimal":
                bound = max(bound, _ceil(sol.objective))
            if node.id == 0:
                self.stats["root_lp"] = sol.objective
                self.stats["root_stop"] = reason
                self.stats["root_integral"] = sol.is_integral(cfg.integrality_tol) and sol.artificial <= 1e-6
            if reason == "time_limit":
                timed_out = True
                current_bound = bound
                break
            if reason == "prune" or bound >= self.incumbent:
                node.status = "pruned"
                continue
            if sol.artificial > 1e-6:
                if reason == "optimal":
                    node.status = "infeasible"
                    continue
            elif sol.is_integral(cfg.integrality_tol):
                value = int(round(sol.objective))
                if value < self.incumbent:
                    self.incumbent = value
                    self.incumbent_rects = list(master.fixed) + [
                        master.columns[j].rect for j, v in sol.x.items() if v > 0.5]
                    self.incumbent_history.append((self.stats["nodes"], value))
                node.status = "integral"
                continue

            node.status = "branched"
            for child_master in self._branch(master, sol):
                child = Node(seq, node.id, node.depth + 1, bound, child_master, sol.basis)
                heapq.heappush(heap, (child.bound, -child.depth, seq, child))
                seq += 1
            open_bounds = [h[0] for h in heap]
            self.bound_history.append((self.stats["nodes"], min(open_bounds + [self.incumbent])))

        if timed_out:
            open_bounds = [h[3].bound for h in heap]
            if current_bound is not None:
                open_bounds.append(current_bound)
            lb = min(open_bounds + [self.incumbent])
            status = Status.TIME_LIMIT
        else:
            lb = self.incumbent
            status = Status.OPTIMAL
        self.stats["wall_time"] = time.perf_counter() - start
        self.stats["max_dual"] = max(self.stats["max_dual"], 0.0) if self.stats["lp_solves"] else 0.0
        rects = sorted(self.incumbent_rects, key=Rect.key)
        lower = self.image.area + lb if math.isfinite(lb) else 0.0
        return BlanketSolution(
            blanket=Blanket(rects),
            objective=self.image.area + self.incumbent,
            lower_bound=float(max(lower, 0.0)),
            status=status,
            method="bp",
            stats=dict(self.stats),
            trace=self.trace,
        )

    def _branch(self, master: RestrictedMaster, sol: LpSolution) -> List[RestrictedMaster]:
        cfg = self.config
        rule = cfg.rule
        if rule == RULE2:
            try:
                e, f = find_branch_target(sol, master.columns, RULE2, self.image.width,
                                          self.image.height, cfg.integrality_tol)
            except LookupError:
                rule = RULE1
        if rule == RULE1:
            j = find_branch_target(sol, master.columns, RULE1, tol=cfg.integrality_tol)
            decisions = [FixColumn(j), ForbidColumn(j)]
        else:
            decisions = [PairDiffer(e, f), PairSame(e, f)]
        children = []
        for d in decisions:
            m = master.copy()
            m.apply_branch(d)
            children.append(m)
        return children


def solve(image: BinaryImage, config: SolverConfig) -> BlanketSolution:
    return BranchAndPrice(image, config).run()
