"""JSON, SVG and CSV renderings of a solve."""
from __future__ import annotations

import csv
import io
import json
import math
from xml.sax.saxutils import escape

from .geometry import BinaryImage
from .solution import BlanketSolution

TIMING_KEYS = {"lp_time", "pricing_time", "wall_time"}
TRACE_FIELDS = ["node", "depth", "iteration", "z_rlpm", "lb", "lb_iter", "added", "misprice",
                "alpha", "duality_gap", "max_dual", "stop"]


def _clean(v):
    if isinstance(v, float):
        return v if math.isfinite(v) else None
    if isinstance(v, dict):
        return {str(k): _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    if hasattr(v, "item"):  # numpy scalars
        return _clean(v.item())
    return v


def solution_record(sol: BlanketSolution, image: BinaryImage, k: int, timings: bool = False) -> dict:
    stats = {key: v for key, v in sol.stats.items() if timings or key not in TIMING_KEYS}
    return {
        "width": image.width,
        "height": image.height,
        "area": image.area,
        "k": k,
        "method": sol.method,
        "status": sol.status.value,
        "objective": int(sol.objective),
        "lower_bound": _clean(sol.lower_bound),
        "rects": [r.as_dict() for r in sol.rects],
        "stats": _clean(stats),
    }


def to_json(sol: BlanketSolution, image: BinaryImage, k: int, timings: bool = False) -> str:
    return json.dumps(solution_record(sol, image, k, timings), indent=2) + "\n"


def to_svg(sol: BlanketSolution, image: BinaryImage, scale: int = 10) -> str:
    """Image pixels as one gray path, each blanket rectangle as a stroked <rect>."""
    W, H = image.width, image.height
    runs = []
    for y, row in enumerate(image.pixels):
        x = 0
        while x < W:
            if row[x]:
                x0 = x
                while x < W and row[x]:
                    x += 1
                runs.append(f"M{x0 * scale},{y * scale}h{(x - x0) * scale}v{scale}h{-(x - x0) * scale}z")
            else:
                x += 1
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W * scale}" '
        f'height="{H * scale}" viewBox="0 0 {W * scale} {H * scale}">',
        f'<title>{escape(sol.method)} k-blanket, mismatch {int(sol.objective)}</title>',
        f'<path fill="#b0b0b0" d="{"".join(runs)}"/>',
    ]
    for r in sol.rects:
        out.append(f'<rect x="{(r.left - 1) * scale}" y="{(r.top - 1) * scale}" '
                   f'width="{r.width * scale}" height="{r.height * scale}" '
                   'fill="none" stroke="#d01c1c" stroke-width="2"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def trace_csv(trace) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=TRACE_FIELDS, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for row in trace:
        w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
    return buf.getvalue()
