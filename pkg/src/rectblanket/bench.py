"""Benchmark grid: every (instance, k, method) cell, with percentage deviation from bp."""
from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from .geometry import BinaryImage
from .pbm import load_pbm
from .runner import run_method
from .shapes import gen_shape

DEFAULT_KS = (3, 5, 10, 15, 20)


class BenchError(ValueError):
    pass


@dataclass
class RunRecord:
    instance: str
    width: int
    height: int
    area: int
    k: int
    method: str
    objective: int
    lower_bound: Optional[float]
    status: str
    wall_seconds: float
    nodes: Optional[int]
    columns: Optional[int]
    pd: str = ""


def builtin_suite() -> List[Tuple[str, BinaryImage]]:
    specs = [("solid", 6, 4), ("plus", 9, 9), ("staircase", 8, 6), ("frame", 8, 8),
             ("disconnected", 9, 5)]
    suite = [(f"{kind}-{w}x{h}", gen_shape(kind, w, h)) for kind, w, h in specs]
    suite += [(f"random-10x10-s{s}", gen_shape("random", 10, 10, seed=s, density=0.5)) for s in (1, 2, 3)]
    return suite


def load_suite(path) -> List[Tuple[str, BinaryImage]]:
    files = sorted(Path(path).glob("*.pbm"))
    if not files:
        raise BenchError(f"no .pbm files in {path}")
    return [(f.stem, load_pbm(f.read_bytes())) for f in files]


def percentage_deviation(z_h: int, z_bp: int) -> str:
    """100 (z_H - z_BP) / z_BP, or the raw heuristic value in parentheses when z_BP = 0."""
    if z_bp == 0:
        return f"({z_h})"
    return f"{100.0 * (z_h - z_bp) / z_bp:.2f}"


def _cell(args):
    name, image, k, method, opts = args
    sol = run_method(image, k, method, **opts)
    return RunRecord(name, image.width, image.height, image.area, k, method, int(sol.objective),
                     sol.lower_bound, sol.status.value, float(sol.stats.get("wall_time", 0.0)),
                     sol.stats.get("nodes"), sol.stats.get("columns"))


def run_bench(suite: Sequence[Tuple[str, BinaryImage]], ks: Sequence[int] = DEFAULT_KS,
              methods: Sequence[str] = ("bp", "sf", "fast", "csa"), time_limit: float = 3600.0,
              jobs: int = 1, with_pd: bool = True, **opts) -> List[RunRecord]:
    if not methods:
        raise BenchError("method list is empty")
    if with_pd and "bp" not in methods:
        raise BenchError("percentage deviation needs bp rows; add bp to the methods or disable PD")
    cells = [(name, image, k, m, dict(opts, time_limit=time_limit))
             for name, image in suite for k in ks for m in methods]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_cell, cells))  # map keeps submission order
    else:
        rows = [_cell(c) for c in cells]
    if with_pd:
        ref = {(r.instance, r.k): r.objective for r in rows if r.method == "bp"}
        for r in rows:
            if r.method != "bp":
                r.pd = percentage_deviation(r.objective, ref[(r.instance, r.k)])
    return rows


def records_csv(rows: Sequence[RunRecord]) -> str:
    buf = io.StringIO()
    fields = list(RunRecord.__dataclass_fields__)
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for r in rows:
        d = asdict(r)
        d["wall_seconds"] = f"{r.wall_seconds:.6f}"
        w.writerow(d)
    return buf.getvalue()
