"""Restricted LP master: packing rows per pixel, one cardinality row, branching rows.

    min  sum_j c_j x_j
    s.t. sum_j x_j              <= K_local      (mu)
         sum_{j covers p} x_j   <= 1   per p    (pi_p)
         sum_{j covers e,f} x_j >= 1   per same-branch pair   (sigma)
         x >= 0

Duals follow the minimisation sign convention: ``mu <= 0``, ``pi <= 0`` and
``sigma >= 0``. "Same" rows start on a big-M artificial so the slack basis is
always feasible. Variable branching (fix to one) is done by substitution: the
budget drops by one, the fixed rectangle's cost moves into a constant offset
and overlapping columns are removed.
"""
from __future__ import annotations

import copy
from dataclasses import dataclass
from typing import Dict, Iterable, List, NamedTuple, Optional, Tuple

import numpy as np
import scipy.linalg

from . import simplex
from .geometry import BinaryImage, Pixel, Rect, rect_cost
from .pricing import FixedWeights, PairDiffer, PairSame, Prohibited

INTEGRALITY_TOL = 1e-6


class DuplicateColumnError(ValueError):
    pass


class UnknownColumnError(KeyError):
    pass


class MasterError(RuntimeError):
    """The LP engine failed; the message carries diagnostics."""


@dataclass
class Column:
    id: int
    rect: Rect
    cost: int
    age: int = 0
    lifespan: int = 50


class FixColumn(NamedTuple):
    """Variable branch x_j = 1."""
    column_id: int


class ForbidColumn(NamedTuple):
    """Variable branch x_j = 0."""
    column_id: int


@dataclass
class LpSolution:
    objective: float
    dual_objective: float
    x: Dict[int, float]
    pi: np.ndarray            # (H, W) pixel-row duals
    mu: float                 # cardinality-row dual
    sigma: List[float]        # same-pair row duals
    artificial: float         # total value of big-M artificials
    basis: tuple              # warm-start token
    pivots: int = 0

    @property
    def duality_gap(self) -> float:
        return abs(self.objective - self.dual_objective)

    def fractional(self, tol: float = INTEGRALITY_TOL) -> Dict[int, float]:
        return {j: v for j, v in self.x.items() if abs(v - round(v)) > tol}

    def is_integral(self, tol: float = INTEGRALITY_TOL) -> bool:
        return not self.fractional(tol)


class RestrictedMaster:
    def __init__(self, image: BinaryImage, k: int, big_m: Optional[float] = None):
        if k < 0:
            raise ValueError("budget k must be >= 0")
        self.image = image
        self.budget = k
        self.big_m = float(big_m) if big_m is not None else 100.0 * (image.width * image.height + 1)
        self.columns: Dict[int, Column] = {}
        self.same_pairs: List[Tuple[Pixel, Pixel]] = []
        self.fixed: List[Rect] = []
        self.offset = 0
        self.prohibited: List[Rect] = []
        self.pricing_constraints: list = []
        self.last: Optional[LpSolution] = None
        self._next_id = 0
        self._rows: Dict[int, np.ndarray] = {}

    # -- columns ---------------------------------------------------------

    def copy(self) -> "RestrictedMaster":
        other = copy.copy(self)
        other.columns = {j: copy.copy(c) for j, c in self.columns.items()}
        other.same_pairs = list(self.same_pairs)
        other.fixed = list(self.fixed)
        other.prohibited = list(self.prohibited)
        other.pricing_constraints = list(self.pricing_constraints)
        other._rows = dict(self._rows)
        return other

    @property
    def n_rows(self) -> int:
        return 1 + self.image.width * self.image.height + len(self.same_pairs)

    def make_column(self, rect: Rect, lifespan: int = 50) -> Column:
        col = Column(self._next_id, rect, rect_cost(self.image, rect), lifespan=lifespan)
        self._next_id += 1
        return col

    def has_rect(self, rect: Rect) -> bool:
        return any(c.rect == rect for c in self.columns.values())

    def admits(self, rect: Rect) -> bool:
        """False for rectangles touching a column fixed to one."""
        return not any(rect.intersects(f) for f in self.fixed)

    def add_columns(self, cols: Iterable[Column]) -> None:
        present = {c.rect for c in self.columns.values()}
        cols = list(cols)
        for c in cols:
            self.image.check_rect(c.rect)
            if not self.admits(c.rect):
                raise ValueError(f"{c.rect} overlaps a fixed column")
            if c.rect in present or c.id in self.columns:
                raise DuplicateColumnError(f"column for {c.rect} already present")
            present.add(c.rect)
        for c in cols:
            self.columns[c.id] = c
            self._next_id = max(self._next_id, c.id + 1)

    def remove_columns(self, ids: Iterable[int]) -> List[Column]:
        return [self.columns.pop(j) for j in list(ids) if j in self.columns]

    def expire(self) -> List[Column]:
        """Drop columns that stayed out of the basis longer than their lifespan."""
        return self.remove_columns([j for j, c in self.columns.items() if c.age > c.lifespan])

    # -- branching -------------------------------------------------------

    def apply_branch(self, c) -> None:
        if isinstance(c, PairDiffer):
            self._drop(lambda r: r.contains(c.e) and r.contains(c.f))
            self.pricing_constraints.append(c)
        elif isinstance(c, PairSame):
            self._drop(lambda r: r.contains(c.e) != r.contains(c.f))
            self.same_pairs.append((tuple(c.e), tuple(c.f)))
            self.pricing_constraints.append(c)
        elif isinstance(c, Prohibited):
            self._drop(lambda r: r == c.rect)
            self.prohibited.append(c.rect)
        elif isinstance(c, ForbidColumn):
            col = self._get(c.column_id)
            self.apply_branch(Prohibited(col.rect))
        elif isinstance(c, FixColumn):
            col = self._get(c.column_id)
            if self.budget < 1:
                raise ValueError("no budget left to fix a column")
            self.budget -= 1
            self.offset += col.cost
            self.fixed.append(col.rect)
            self._drop(lambda r: r.intersects(col.rect))
            self.pricing_constraints.append(FixedWeights(tuple(col.rect.pixels())))
        else:
            raise TypeError(f"unknown branching constraint {c!r}")

    def _get(self, j: int) -> Column:
        try:
            return self.columns[j]
        except KeyError:
            raise UnknownColumnError(j) from None

    def _drop(self, pred) -> None:
        self.remove_columns([j for j, c in self.columns.items() if pred(c.rect)])

    # -- LP ----------------------------------------------------------------

    def _coverage_rows(self, col: Column) -> np.ndarray:
        rows = self._rows.get(col.id)
        if rows is None or len(rows) != col.rect.area:
            W = self.image.width
            r = col.rect
            ys, xs = np.mgrid[r.top:r.bottom + 1, r.left:r.right + 1]
            rows = 1 + (ys.ravel() - 1) * W + (xs.ravel() - 1)
            self._rows[col.id] = rows
        return rows

    def _build(self):
        W, H = self.image.width, self.image.height
        npix = W * H
        S = len(self.same_pairs)
        m = 1 + npix + S
        cols = list(self.columns.values())
        n = len(cols) + 1 + npix + 2 * S
        A = np.zeros((m, n))
        c = np.zeros(n)
        keys = []
        for j, col in enumerate(cols):
            A[0, j] = 1.0
            A[self._coverage_rows(col), j] = 1.0
            for s, (e, f) in enumerate(self.same_pairs):
                if col.rect.contains(e) and col.rect.contains(f):
                    A[1 + npix + s, j] = 1.0
            c[j] = col.cost
            keys.append(("x", col.id))
        base = len(cols)
        for i in range(1 + npix):
            A[i, base + i] = 1.0
            keys.append(("s", i))
        base += 1 + npix
        for s in range(S):
            A[1 + npix + s, base + 2 * s] = -1.0
            A[1 + npix + s, base + 2 * s + 1] = 1.0
            c[base + 2 * s + 1] = self.big_m
            keys.append(("u", s))
            keys.append(("a", s))
        b = np.ones(m)
        b[0] = self.budget
        return A, b, c, keys

    def _cold_basis(self, keys):
        index = {k: i for i, k in enumerate(keys)}
        npix = self.image.width * self.image.height
        return ([index[("s", i)] for i in range(1 + npix)]
                + [index[("a", s)] for s in range(len(self.same_pairs))])

    def _complete(self, A, keys, token):
        """Extend the surviving part of a warm token to a nonsingular basis."""
        index = {k: i for i, k in enumerate(keys)}
        idx = [index[k] for k in token if k in index]
        m = A.shape[0]
        if not idx or len(idx) > m:
            return None
        if len(idx) == m:
            return idx
        P, L, U = scipy.linalg.lu(A[:, idx])
        if np.min(np.abs(np.diag(U))) < 1e-9:
            return None
        pivot_rows = set(int(i) for i in np.argmax(P[:, :len(idx)], axis=0))
        npix = self.image.width * self.image.height
        for i in range(m):
            if i in pivot_rows:
                continue
            key = ("s", i) if i <= npix else ("a", i - 1 - npix)
            if index[key] in idx:
                return None
            idx.append(index[key])
        return idx

    def solve(self, warm: Optional[tuple] = None) -> LpSolution:
        A, b, c, keys = self._build()
        result = None
        if warm is not None:
            basis = self._complete(A, keys, warm)
            if basis is not None:
                try:
                    result = simplex.solve(A, b, c, basis)
                except simplex.SimplexError:
                    result = None
        if result is None:
            try:
                result = simplex.solve(A, b, c, self._cold_basis(keys))
            except simplex.SimplexError as exc:
                raise MasterError(f"LP failed: {exc} (rows={A.shape[0]}, columns={len(self.columns)},"
                                  f" budget={self.budget}, same rows={len(self.same_pairs)})") from exc

        W, H = self.image.width, self.image.height
        npix = W * H
        ids = list(self.columns)
        x = {j: float(result.x[i]) for i, j in enumerate(ids)}
        basic = set(result.basis)
        for i, j in enumerate(ids):
            col = self.columns[j]
            if i in basic or x[j] > 1e-12:
                col.age = 0
            else:
                col.age += 1
        S = len(self.same_pairs)
        art = sum(float(result.x[len(ids) + 1 + npix + 2 * s + 1]) for s in range(S))
        sol = LpSolution(
            objective=result.objective + self.offset,
            dual_objective=result.dual_objective + self.offset,
            x=x,
            pi=result.y[1:1 + npix].reshape(H, W).copy(),
            mu=float(result.y[0]),
            sigma=[float(v) for v in result.y[1 + npix:]],
            artificial=art,
            basis=tuple(keys[i] for i in result.basis),
            pivots=result.pivots,
        )
        self.last = sol
        return sol

    def reduced_cost(self, rect: Rect, sol: LpSolution) -> float:
        """c(r) - sum of pixel duals over r - same-row duals for pairs inside r - mu."""
        v = rect_cost(self.image, rect) - float(sol.pi[rect.top - 1:rect.bottom, rect.left - 1:rect.right].sum())
        for (e, f), s in zip(self.same_pairs, sol.sigma):
            if rect.contains(e) and rect.contains(f):
                v -= s
        return v - sol.mu
