"""Approximate binary images with at most K disjoint axis-aligned rectangles."""
from .bnp import SolverConfig, solve
from .geometry import BinaryImage, Blanket, Rect, blanket_objective, rect_cost, validate_blanket
from .heuristics import CsaConfig, FastConfig, SfConfig, csa_solve, fast_solve, sf_solve
from .oracle import exact_solve
from .pbm import dump_pbm, load_pbm
from .runner import run_method
from .shapes import gen_shape
from .solution import BlanketSolution, Status

__all__ = [
    "BinaryImage", "Blanket", "BlanketSolution", "CsaConfig", "FastConfig", "Rect", "SfConfig",
    "SolverConfig", "Status", "blanket_objective", "csa_solve", "dump_pbm", "exact_solve",
    "fast_solve", "gen_shape", "load_pbm", "rect_cost", "run_method", "sf_solve", "solve",
    "validate_blanket",
]
