"""Dense revised primal simplex for ``min c.x  s.t.  A x = b, x >= 0``.

Small and self-contained: the restricted masters here have at most a few
thousand rows. The basis inverse is kept explicitly and updated with
rank-one (product form) pivots, refactorised every ``REFACTOR_EVERY`` pivots.
Dantzig pricing switches to Bland's rule after a run of degenerate pivots.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

PIVOT_TOL = 1e-9
OPT_TOL = 1e-9
REFACTOR_EVERY = 64
DEGENERATE_RUN = 30


class SimplexError(RuntimeError):
    pass


@dataclass
class SimplexResult:
    x: np.ndarray
    y: np.ndarray
    basis: list
    objective: float
    dual_objective: float
    pivots: int


def _invert(A, basis):
    B = A[:, basis]
    try:
        Binv = np.linalg.inv(B)
    except np.linalg.LinAlgError as exc:
        raise SimplexError(f"singular basis ({len(basis)} columns)") from exc
    if not np.all(np.isfinite(Binv)):
        raise SimplexError("basis inverse is not finite")
    return Binv


def solve(A: np.ndarray, b: np.ndarray, c: np.ndarray, basis: Sequence[int],
          max_pivots: int = 100_000) -> SimplexResult:
    """Run phase-II simplex from ``basis``, which must be primal feasible."""
    m, n = A.shape
    basis = list(basis)
    if len(basis) != m:
        raise SimplexError(f"basis has {len(basis)} columns for {m} rows")
    Binv = _invert(A, basis)
    xB = Binv @ b
    if xB.min(initial=0.0) < -1e-7:
        raise SimplexError(f"starting basis is infeasible (min x_B = {xB.min():.3g})")
    pivots = 0
    since_refactor = 0
    degenerate = 0
    bland = False
    in_basis = np.zeros(n, dtype=bool)
    in_basis[basis] = True

    while True:
        y = c[basis] @ Binv
        d = c - y @ A
        d[in_basis] = 0.0
        if bland:
            cand = np.flatnonzero(d < -OPT_TOL)
            q = int(cand[0]) if cand.size else -1
        else:
            q = int(np.argmin(d))
            if d[q] >= -OPT_TOL:
                q = -1
        if q < 0:
            if since_refactor:
                # confirm optimality on a fresh factorisation
                Binv = _invert(A, basis)
                xB = Binv @ b
                since_refactor = 0
                continue
            break

        u = Binv @ A[:, q]
        pos = u > PIVOT_TOL
        if not pos.any():
            raise SimplexError(f"LP unbounded along column {q}")
        ratios = np.full(m, np.inf)
        ratios[pos] = np.maximum(xB[pos], 0.0) / u[pos]
        theta = ratios.min()
        ties = np.flatnonzero(ratios <= theta + 1e-12)
        if bland:
            r = int(min(ties, key=lambda i: basis[i]))
        else:
            r = int(ties[np.argmax(u[ties])])

        # product-form update of the inverse
        er = Binv[r] / u[r]
        Binv -= np.outer(u, er)
        Binv[r] = er
        step = xB[r] / u[r]
        xB -= step * u
        xB[r] = step
        in_basis[basis[r]] = False
        in_basis[q] = True
        basis[r] = q

        pivots += 1
        since_refactor += 1
        if theta <= PIVOT_TOL:
            degenerate += 1
            if degenerate >= DEGENERATE_RUN:
                bland = True
        else:
            degenerate = 0
            bland = False
        if since_refactor >= REFACTOR_EVERY:
            Binv = _invert(A, basis)
            xB = Binv @ b
            since_refactor = 0
        if pivots > max_pivots:
            raise SimplexError(f"no convergence after {pivots} pivots")

    x = np.zeros(n)
    x[basis] = np.where(np.abs(xB) < 1e-12, 0.0, xB)
    if x.min() < -1e-7:
        raise SimplexError(f"final basis infeasible (min x = {x.min():.3g})")
    x = np.maximum(x, 0.0)
    y = c[basis] @ Binv
    return SimplexResult(x=x, y=y, basis=basis, objective=float(c @ x),
                         dual_objective=float(y @ b), pivots=pivots)
