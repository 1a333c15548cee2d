"""Minimum weight-sum rectangle search (the column pricing problem).

A best-first geometric branch-and-bound over interval boxes of rectangles
(top, left, bottom and right edge ranges), bounded below by the negative
weights of the box union plus the positive weights of the box intersection.
Boxes with few members are enumerated directly with vectorised numpy.

Results are exact k-best under the total order (value, top, left, bottom,
right), so the answer does not depend on where the naive switch happens.
"""
from __future__ import annotations

import bisect as _bisect
import enum
import heapq
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .geometry import IntegralTables, Pixel, Rect, _box, _prefix, build_integrals

BLOCKED_WEIGHT = 1e9
DEFAULT_CAPACITY = 10
DEFAULT_NAIVE_THRESHOLD = 256

Interval = Tuple[int, int]


# ---------------------------------------------------------------------------
# branching constraints seen by the pricing problem

@dataclass(frozen=True)
class PairDiffer:
    """No generated rectangle may contain both ``e`` and ``f``."""
    e: Pixel
    f: Pixel

    def __post_init__(self):
        if tuple(self.e) == tuple(self.f):
            raise ValueError("pair constraint needs two distinct pixels")


@dataclass(frozen=True)
class PairSame:
    """A generated rectangle contains both ``e`` and ``f`` or neither."""
    e: Pixel
    f: Pixel

    def __post_init__(self):
        if tuple(self.e) == tuple(self.f):
            raise ValueError("pair constraint needs two distinct pixels")


@dataclass(frozen=True)
class Prohibited:
    rect: Rect


@dataclass(frozen=True)
class FixedWeights:
    """Override the weight of ``pixels``; the default sentinel blocks them."""
    pixels: Tuple[Pixel, ...]
    value: float = BLOCKED_WEIGHT


BranchConstraint = object  # PairDiffer | PairSame | Prohibited | FixedWeights


class Admissibility(enum.Enum):
    ALL = "all"
    NONE = "none"
    MIXED = "mixed"


class PricedRect(NamedTuple):
    rect: Rect
    value: float
    reduced_cost: float


# ---------------------------------------------------------------------------
# rectangle sets

class RectSet(NamedTuple):
    top: Interval
    left: Interval
    bottom: Interval
    right: Interval

    @classmethod
    def root(cls, width: int, height: int) -> "RectSet":
        return cls((1, height), (1, width), (1, height), (1, width))

    @property
    def union_rect(self) -> Rect:
        return Rect(self.left[0], self.right[1], self.top[0], self.bottom[1])

    @property
    def intersection_rect(self) -> Optional[Rect]:
        r = Rect(self.left[1], self.right[0], self.top[1], self.bottom[0])
        return r if r.is_valid() else None

    def size(self) -> int:
        return (_ordered_pairs(*self.top, *self.bottom)
                * _ordered_pairs(*self.left, *self.right))

    def is_singleton(self) -> bool:
        return all(lo == hi for lo, hi in self)

    def normalized(self) -> Optional["RectSet"]:
        """Same member set with edge ranges clipped to attainable values; None if empty."""
        t0, t1 = self.top
        b0, b1 = self.bottom
        l0, l1 = self.left
        r0, r1 = self.right
        t1 = min(t1, b1)
        b0 = max(b0, t0)
        l1 = min(l1, r1)
        r0 = max(r0, l0)
        if t0 > t1 or b0 > b1 or l0 > l1 or r0 > r1:
            return None
        return RectSet((t0, t1), (l0, l1), (b0, b1), (r0, r1))

    def members(self) -> List[Rect]:
        return [Rect(l, r, t, b)
                for t in range(self.top[0], self.top[1] + 1)
                for l in range(self.left[0], self.left[1] + 1)
                for b in range(max(t, self.bottom[0]), self.bottom[1] + 1)
                for r in range(max(l, self.right[0]), self.right[1] + 1)]


def _ordered_pairs(a0: int, a1: int, b0: int, b1: int) -> int:
    """Number of (a, b) with a in [a0, a1], b in [b0, b1] and a <= b."""
    if a0 > a1 or b0 > b1:
        return 0
    n = 0
    hi = min(a1, b0)
    if hi >= a0:
        n += (hi - a0 + 1) * (b1 - b0 + 1)
    lo = max(a0, b0 + 1)
    hi = min(a1, b1)
    if hi >= lo:
        # sum over a in [lo, hi] of (b1 - a + 1)
        cnt = hi - lo + 1
        n += cnt * (b1 + 1) - (lo + hi) * cnt // 2
    return n


def bisect(rs: RectSet) -> Tuple[RectSet, RectSet]:
    """Split the widest edge range at its midpoint (ties: top, left, bottom, right)."""
    widths = [hi - lo for lo, hi in rs]
    i = max(range(4), key=lambda j: (widths[j], -j))
    if widths[i] == 0:
        raise ValueError("cannot bisect a single rectangle")
    lo, hi = rs[i]
    mid = (lo + hi) // 2
    a = list(rs)
    b = list(rs)
    a[i] = (lo, mid)
    b[i] = (mid + 1, hi)
    return RectSet(*a), RectSet(*b)


def _inside(r: Optional[Rect], p: Pixel) -> bool:
    return r is not None and r.left <= p[0] <= r.right and r.top <= p[1] <= r.bottom


def admissible(rs: RectSet, c) -> Admissibility:
    """Classify a rectangle set against a pair constraint.

    A member violates PairDiffer when it contains both pixels and violates
    PairSame when it contains exactly one of them.
    """
    u, n = rs.union_rect, rs.intersection_rect
    ue, uf = _inside(u, c.e), _inside(u, c.f)
    ne, nf = _inside(n, c.e), _inside(n, c.f)
    if isinstance(c, PairDiffer):
        if ne and nf:
            return Admissibility.NONE
        if not (ue and uf):
            return Admissibility.ALL
        return Admissibility.MIXED
    if isinstance(c, PairSame):
        if (ne and not uf) or (nf and not ue):
            return Admissibility.NONE
        if (ne and nf) or not (ue or uf):
            return Admissibility.ALL
        return Admissibility.MIXED
    raise TypeError(f"admissible() only handles pair constraints, got {type(c).__name__}")


def lower_bound(rs: RectSet, tables: IntegralTables) -> float:
    u = rs.union_rect
    lb = _box(tables.neg, u.top, u.left, u.bottom, u.right)
    n = rs.intersection_rect
    if n is not None:
        lb = lb + _box(tables.pos, n.top, n.left, n.bottom, n.right)
    return float(lb)


# ---------------------------------------------------------------------------
# the search

class _Problem:
    """Tables and constraint data for one pricing call."""

    def __init__(self, weights, constraints, prohibited, rewards, tables):
        w = np.asarray(weights, dtype=np.float64)
        self.height, self.width = w.shape
        overrides = {}
        pairs = []
        banned = set(tuple(r) for r in prohibited)
        for c in constraints:
            if isinstance(c, (PairDiffer, PairSame)):
                pairs.append(c)
            elif isinstance(c, Prohibited):
                banned.add(tuple(c.rect))
            elif isinstance(c, FixedWeights):
                for p in c.pixels:
                    overrides[tuple(p)] = float(c.value)
            else:
                raise TypeError(f"unknown constraint {c!r}")
        if overrides:
            base = w.copy()
            fixed = np.zeros_like(w)
            for (x, y), v in overrides.items():
                base[y - 1, x - 1] = 0.0
                fixed[y - 1, x - 1] = v
            self.tables = build_integrals(base)
            self.fpos = _prefix(np.maximum(fixed, 0.0))
            self.fneg = _prefix(np.minimum(fixed, 0.0))
        else:
            self.tables = tables if tables is not None else build_integrals(w)
            self.fpos = self.fneg = None
        self.pos = self.tables.pos
        self.neg = self.tables.neg
        self.differ = [(c.e, c.f) for c in pairs if isinstance(c, PairDiffer)]
        self.same = [(c.e, c.f) for c in pairs if isinstance(c, PairSame)]
        self.pairs = pairs
        self.banned = banned
        self.rewards = [(tuple(e), tuple(f), float(a)) for e, f, a in rewards if a != 0.0]
        if any(a < 0 for _, _, a in self.rewards):
            raise ValueError("rewards must be nonnegative")

    # bound(U, I) with U == I is the exact value; the same expression serves
    # scalars and index arrays, so both paths round identically
    def bound(self, ut, ul, ub, ur, it, il, ib, ir, has_int=True):
        v = _box(self.neg, ut, ul, ub, ur)
        if has_int is True:
            v = v + _box(self.pos, it, il, ib, ir)
        elif has_int is not False:
            v = v + np.where(has_int, _box(self.pos, it, il, ib, ir), 0.0)
        if self.fpos is not None:
            f = _box(self.fneg, ut, ul, ub, ur)
            if has_int is True:
                f = f + _box(self.fpos, it, il, ib, ir)
            elif has_int is not False:
                f = f + np.where(has_int, _box(self.fpos, it, il, ib, ir), 0.0)
            v = v + f
        for (ex, ey), (fx, fy), amount in self.rewards:
            both = ((ul <= ex) & (ex <= ur) & (ut <= ey) & (ey <= ub)
                    & (ul <= fx) & (fx <= ur) & (ut <= fy) & (fy <= ub))
            v = v - np.where(both, amount, 0.0) if isinstance(both, np.ndarray) else (v - amount if both else v)
        return v

    def set_bound(self, rs: RectSet) -> float:
        (t0, t1), (l0, l1), (b0, b1), (r0, r1) = rs
        has_int = t1 <= b0 and l1 <= r0
        return float(self.bound(t0, l0, b1, r1, t1, l1, b0, r0, has_int))

    def rect_value(self, r: Rect) -> float:
        return float(self.bound(r.top, r.left, r.bottom, r.right, r.top, r.left, r.bottom, r.right))

    def feasible(self, r: Rect) -> bool:
        if tuple(r) in self.banned:
            return False
        for e, f in self.differ:
            if r.contains(e) and r.contains(f):
                return False
        for e, f in self.same:
            if r.contains(e) != r.contains(f):
                return False
        return True

    def enumerate(self, rs: RectSet, skip_pair_checks: bool):
        """All feasible members of ``rs`` as (values, t, l, b, r) arrays."""
        (t0, t1), (l0, l1), (b0, b1), (r0, r1) = rs
        t, l, b, r = np.meshgrid(np.arange(t0, t1 + 1), np.arange(l0, l1 + 1),
                                 np.arange(b0, b1 + 1), np.arange(r0, r1 + 1),
                                 indexing="ij", copy=False)
        t, l, b, r = t.ravel(), l.ravel(), b.ravel(), r.ravel()
        ok = (t <= b) & (l <= r)
        if not skip_pair_checks:
            for (ex, ey), (fx, fy) in self.differ:
                ok &= ~((l <= ex) & (ex <= r) & (t <= ey) & (ey <= b)
                        & (l <= fx) & (fx <= r) & (t <= fy) & (fy <= b))
            for (ex, ey), (fx, fy) in self.same:
                ok &= (((l <= ex) & (ex <= r) & (t <= ey) & (ey <= b))
                       == ((l <= fx) & (fx <= r) & (t <= fy) & (fy <= b)))
        for (bl, br, bt, bb) in self.banned:
            ok &= ~((l == bl) & (r == br) & (t == bt) & (b == bb))
        t, l, b, r = t[ok], l[ok], b[ok], r[ok]
        vals = self.bound(t, l, b, r, t, l, b, r)
        return np.asarray(vals, dtype=np.float64), t, l, b, r


class _KBest:
    """Bounded sorted list of (value, key) entries, keys unique."""

    def __init__(self, capacity: int):
        self.capacity = capacity
        self.items: List[Tuple[float, Tuple[int, int, int, int]]] = []
        self.keys = set()

    def full(self) -> bool:
        return len(self.items) >= self.capacity

    def worst(self):
        return self.items[-1]

    def offer(self, value: float, key) -> None:
        if key in self.keys:
            return
        entry = (value, key)
        if self.full():
            if entry >= self.items[-1]:
                return
            _, old = self.items.pop()
            self.keys.discard(old)
        _bisect.insort(self.items, entry)
        self.keys.add(key)


def solve_pricing(weights, constraints: Sequence = (), capacity: int = DEFAULT_CAPACITY,
                  prohibited: Sequence[Rect] = (), *, mu: float = 0.0,
                  rewards: Sequence = (), naive_threshold: int = DEFAULT_NAIVE_THRESHOLD,
                  tables: Optional[IntegralTables] = None, stats: Optional[dict] = None
                  ) -> List[PricedRect]:
    """Return up to ``capacity`` feasible rectangles of smallest weight sum, ascending.

    ``weights`` is an (H, W) matrix. ``rewards`` holds ``(e, f, amount)``
    triples: rectangles containing both pixels have ``amount`` subtracted
    from their value (duals of "same rectangle" branching rows). ``tables``
    may pass precomputed integrals of ``weights``. Returns an empty list when
    no rectangle satisfies the constraints.
    """
    if capacity < 1:
        raise ValueError("capacity must be >= 1")
    if naive_threshold < 1:
        raise ValueError("naive_threshold must be >= 1")
    prob = _Problem(weights, constraints, prohibited, rewards, tables)
    best = _KBest(capacity)
    expanded = enumerated = 0

    full = Rect(1, prob.width, 1, prob.height)
    if prob.feasible(full):
        best.offer(prob.rect_value(full), full.key())

    root = RectSet.root(prob.width, prob.height)
    heap = [(prob.set_bound(root), (1, 1, 1, 1), 0, root)]
    seq = 1
    while heap:
        lb, lexmin, _, rs = heapq.heappop(heap)
        if best.full() and (lb, lexmin) >= best.worst():
            break
        expanded += 1
        status = [admissible(rs, c) for c in prob.pairs]
        if rs.is_singleton():
            r = Rect(rs.left[0], rs.right[0], rs.top[0], rs.bottom[0])
            if prob.feasible(r):
                best.offer(prob.rect_value(r), r.key())
            continue
        if rs.size() <= naive_threshold:
            vals, t, l, b, r = prob.enumerate(rs, all(s is Admissibility.ALL for s in status))
            enumerated += len(vals)
            if len(vals):
                order = np.lexsort((r, b, l, t, vals))[:capacity + 1]
                for i in order:
                    best.offer(float(vals[i]), (int(t[i]), int(l[i]), int(b[i]), int(r[i])))
            continue
        for child in bisect(rs):
            child = child.normalized()
            if child is None:
                continue
            if any(admissible(child, c) is Admissibility.NONE for c in prob.pairs):
                continue
            clb = prob.set_bound(child)
            cmin = (child.top[0], child.left[0], child.bottom[0], child.right[0])
            if best.full() and (clb, cmin) >= best.worst():
                continue
            heapq.heappush(heap, (clb, cmin, seq, child))
            seq += 1

    if stats is not None:
        stats["expanded"] = stats.get("expanded", 0) + expanded
        stats["enumerated"] = stats.get("enumerated", 0) + enumerated
    out = []
    for value, (t, l, b, r) in best.items:
        out.append(PricedRect(Rect(l, r, t, b), value, value - mu))
    return out
