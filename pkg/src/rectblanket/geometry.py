"""Binary images, rectangles and the area/cost arithmetic shared by every solver.

Coordinates are 1-based and inclusive. ``x`` runs over columns (1..W) and
``y`` over rows (1..H) with the y-axis pointing down, so ``top <= bottom``.
Pixel arrays are stored numpy-style as ``pixels[y - 1, x - 1]``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, List, NamedTuple, Sequence, Tuple

import numpy as np

Pixel = Tuple[int, int]  # (x, y)


class BoundsError(ValueError):
    pass


class BlanketError(ValueError):
    """Raised when a rectangle list is not a blanket (overlap or bad bounds)."""


class Rect(NamedTuple):
    left: int
    right: int
    top: int
    bottom: int

    @property
    def width(self) -> int:
        return self.right - self.left + 1

    @property
    def height(self) -> int:
        return self.bottom - self.top + 1

    @property
    def area(self) -> int:
        return self.width * self.height

    def is_valid(self) -> bool:
        return self.left <= self.right and self.top <= self.bottom

    def contains(self, p: Pixel) -> bool:
        x, y = p
        return self.left <= x <= self.right and self.top <= y <= self.bottom

    def intersects(self, other: "Rect") -> bool:
        return (self.left <= other.right and other.left <= self.right
                and self.top <= other.bottom and other.top <= self.bottom)

    def overlap_area(self, other: "Rect") -> int:
        w = min(self.right, other.right) - max(self.left, other.left) + 1
        h = min(self.bottom, other.bottom) - max(self.top, other.top) + 1
        return w * h if w > 0 and h > 0 else 0

    def key(self) -> Tuple[int, int, int, int]:
        """Sort key used for deterministic tie-breaking: (top, left, bottom, right)."""
        return (self.top, self.left, self.bottom, self.right)

    def pixels(self) -> Iterable[Pixel]:
        for x in range(self.left, self.right + 1):
            for y in range(self.top, self.bottom + 1):
                yield (x, y)

    def as_dict(self) -> dict:
        return {"left": self.left, "top": self.top, "right": self.right, "bottom": self.bottom}


class BinaryImage:
    """Target image: a W x H bit matrix plus its integer integral table.

    Instances are treated as immutable; the pixel array is made read-only.
    """

    def __init__(self, pixels):
        arr = np.array(pixels, dtype=bool)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"expected a non-empty 2-D bit matrix, got shape {arr.shape}")
        arr.setflags(write=False)
        self.pixels = arr
        self.height, self.width = arr.shape
        self.area = int(arr.sum())
        ones = np.zeros((self.height + 1, self.width + 1), dtype=np.int64)
        ones[1:, 1:] = arr.astype(np.int64).cumsum(0).cumsum(1)
        ones.setflags(write=False)
        self._ones = ones

    @classmethod
    def from_rows(cls, rows: Sequence[str]) -> "BinaryImage":
        """Build from strings such as ``["010", "111", "010"]`` (one per row)."""
        return cls([[ch == "1" for ch in row.strip()] for row in rows])

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.width, self.height)

    def bit(self, x: int, y: int) -> bool:
        return bool(self.pixels[y - 1, x - 1])

    def full_rect(self) -> Rect:
        return Rect(1, self.width, 1, self.height)

    def in_bounds(self, r: Rect) -> bool:
        return 1 <= r.left <= r.right <= self.width and 1 <= r.top <= r.bottom <= self.height

    def check_rect(self, r: Rect) -> None:
        if not self.in_bounds(r):
            raise BoundsError(f"{r} lies outside the {self.width}x{self.height} image")

    def ones_in(self, r: Rect) -> int:
        s = self._ones
        return int(s[r.bottom, r.right] - s[r.top - 1, r.right]
                   - s[r.bottom, r.left - 1] + s[r.top - 1, r.left - 1])

    def zeros_in(self, r: Rect) -> int:
        return r.area - self.ones_in(r)

    def pixel_index(self, p: Pixel) -> int:
        """Row-major (y outer) index of a pixel into ``pixels.ravel()``."""
        x, y = p
        return (y - 1) * self.width + (x - 1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BinaryImage):
            return NotImplemented
        return self.pixels.shape == other.pixels.shape and bool((self.pixels == other.pixels).all())

    def __hash__(self) -> int:
        return hash((self.pixels.shape, self.pixels.tobytes()))

    def __repr__(self) -> str:
        return f"BinaryImage({self.width}x{self.height}, area={self.area})"

    def to_rows(self) -> List[str]:
        return ["".join("1" if b else "0" for b in row) for row in self.pixels]


def rect_cost(image: BinaryImage, r: Rect) -> int:
    """Cost c(r) = area(r) - 2 * (ones inside r); negative means r helps."""
    image.check_rect(r)
    return r.area - 2 * image.ones_in(r)


@dataclass
class Blanket:
    rects: List[Rect] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rects)

    def __iter__(self):
        return iter(self.rects)

    def coverage(self, width: int, height: int) -> np.ndarray:
        """Per-pixel count of covering rectangles, shape (H, W)."""
        cov = np.zeros((height, width), dtype=np.int64)
        for r in self.rects:
            cov[r.top - 1:r.bottom, r.left - 1:r.right] += 1
        return cov


@dataclass
class ValidationReport:
    overlaps: List[Tuple[int, int]] = field(default_factory=list)
    out_of_bounds: List[int] = field(default_factory=list)
    cardinality_excess: int = 0

    @property
    def ok(self) -> bool:
        return not self.overlaps and not self.out_of_bounds and self.cardinality_excess == 0

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        parts = []
        if self.overlaps:
            parts.append(f"overlapping pairs {self.overlaps}")
        if self.out_of_bounds:
            parts.append(f"out-of-bounds rectangles {self.out_of_bounds}")
        if self.cardinality_excess:
            parts.append(f"{self.cardinality_excess} rectangle(s) over budget")
        return "; ".join(parts) or "valid"


def validate_blanket(b, k: int, image: BinaryImage | None = None) -> ValidationReport:
    """Report overlapping pairs (by list index) and a budget violation."""
    rects = list(b)
    report = ValidationReport()
    if image is not None:
        report.out_of_bounds = [i for i, r in enumerate(rects) if not image.in_bounds(r)]
    for i in range(len(rects)):
        for j in range(i + 1, len(rects)):
            if rects[i].intersects(rects[j]):
                report.overlaps.append((i, j))
    report.cardinality_excess = max(0, len(rects) - k)
    return report


def blanket_objective(image: BinaryImage, b) -> int:
    """Mismatch area |I| + sum of c(r): pixels in exactly one of image and blanket."""
    rects = list(b)
    for r in rects:
        image.check_rect(r)
    report = validate_blanket(rects, len(rects))
    if report.overlaps:
        raise BlanketError(f"not a blanket: {report.describe()}")
    return image.area + sum(r.area - 2 * image.ones_in(r) for r in rects)


def symmetric_difference(image: BinaryImage, b) -> int:
    """Pixel-scan mismatch count; works for any rectangle list, overlapping or not."""
    covered = Blanket(list(b)).coverage(image.width, image.height) > 0
    return int((covered ^ image.pixels).sum())


@dataclass(frozen=True)
class IntegralTables:
    """Zero-padded prefix sums of the positive and negative parts of a weight matrix.

    ``pos[y, x]`` is the sum of ``max(w, 0)`` over rows < y and columns < x,
    likewise ``neg`` for ``min(w, 0)``. Shape is (H + 1, W + 1).
    """

    pos: np.ndarray
    neg: np.ndarray

    @property
    def width(self) -> int:
        return self.pos.shape[1] - 1

    @property
    def height(self) -> int:
        return self.pos.shape[0] - 1

    def pos_box(self, r: Rect) -> float:
        return _box(self.pos, r.top, r.left, r.bottom, r.right)

    def neg_box(self, r: Rect) -> float:
        return _box(self.neg, r.top, r.left, r.bottom, r.right)

    def box(self, r: Rect) -> float:
        return _box(self.pos, r.top, r.left, r.bottom, r.right) + _box(self.neg, r.top, r.left, r.bottom, r.right)


def _box(s, t, l, b, r):
    # Works elementwise on numpy index arrays too; keep the operation order fixed so
    # scalar and vectorised evaluations round identically.
    return s[b, r] - s[t - 1, r] - s[b, l - 1] + s[t - 1, l - 1]


def _prefix(a: np.ndarray) -> np.ndarray:
    out = np.zeros((a.shape[0] + 1, a.shape[1] + 1), dtype=np.float64)
    out[1:, 1:] = a.cumsum(0).cumsum(1)
    out.setflags(write=False)
    return out


def build_integrals(weights) -> IntegralTables:
    w = np.asarray(weights, dtype=np.float64)
    if w.ndim != 2:
        raise ValueError("weights must be a 2-D (H, W) matrix")
    return IntegralTables(_prefix(np.maximum(w, 0.0)), _prefix(np.minimum(w, 0.0)))


def image_weights(image: BinaryImage, duals=None) -> np.ndarray:
    """Pricing weights 1 - 2*I - pi, shape (H, W); ``duals`` are the pixel-row duals."""
    w = 1.0 - 2.0 * image.pixels.astype(np.float64)
    if duals is not None:
        w = w - np.asarray(duals, dtype=np.float64).reshape(image.height, image.width)
    return w
