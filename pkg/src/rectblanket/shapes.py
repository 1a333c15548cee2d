"""Synthetic benchmark shapes."""
from __future__ import annotations

import numpy as np

from .geometry import BinaryImage

KINDS = ("solid", "plus", "frame", "staircase", "disconnected", "random")


def gen_shape(kind: str, W: int, H: int, seed: int = 0, density: float = 0.5) -> BinaryImage:
    if W < 1 or H < 1:
        raise ValueError("width and height must be >= 1")
    ys, xs = np.mgrid[1:H + 1, 1:W + 1]
    if kind == "solid":
        px = np.ones((H, W), dtype=bool)
    elif kind == "plus":
        tw, th = max(1, W // 3), max(1, H // 3)
        x0, y0 = (W - tw) // 2 + 1, (H - th) // 2 + 1
        px = ((xs >= x0) & (xs < x0 + tw)) | ((ys >= y0) & (ys < y0 + th))
    elif kind == "frame":
        px = (xs == 1) | (xs == W) | (ys == 1) | (ys == H)
    elif kind == "staircase":
        px = xs <= (ys * W + H - 1) // H
    elif kind == "disconnected":
        if W >= 3:
            px = xs != (W + 1) // 2
        elif H >= 3:
            px = ys != (H + 1) // 2
        else:
            raise ValueError("a disconnected shape needs W >= 3 or H >= 3")
    elif kind == "random":
        if not 0.0 <= density <= 1.0:
            raise ValueError("density must lie in [0, 1]")
        px = np.random.default_rng(seed).random((H, W)) < density
    else:
        raise ValueError(f"unknown shape kind {kind!r}; choose from {', '.join(KINDS)}")
    return BinaryImage(px)
