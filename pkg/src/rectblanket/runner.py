"""One entry point for every solver, shared by the command line and the benchmark."""
from __future__ import annotations

import time

from . import bnp
from .geometry import BinaryImage, Blanket
from .heuristics import CsaConfig, FastConfig, SfConfig, csa_solve, fast_solve, sf_solve
from .solution import BlanketSolution, Status

METHODS = ("bp", "sf", "fast", "csa")


def run_method(image: BinaryImage, k: int, method: str, *, rule: int = 2, alpha: float = 0.8,
               rho: int = 3, tau: float = 0.5, seed: int = 0, time_limit: float = 3600.0,
               capacity: int = 10, naive_threshold: int = 256) -> BlanketSolution:
    if k < 0:
        raise ValueError("k must be >= 0")
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")
    t0 = time.perf_counter()
    if method == "bp":
        cfg = bnp.SolverConfig(k=k, rule=rule, alpha=alpha, capacity=capacity,
                               naive_threshold=naive_threshold, time_limit=time_limit)
        sol = bnp.solve(image, cfg)
    elif method == "csa":
        sol = csa_solve(image, k, CsaConfig(seed=seed))
    elif k == 0:  # the empty blanket is the only choice
        sol = BlanketSolution(Blanket([]), image.area, status=Status.FEASIBLE, method=method)
    elif method == "sf":
        sol = sf_solve(image, k, SfConfig(rho=rho))
    else:
        sol = fast_solve(image, k, FastConfig(tau=tau))
    sol.stats.setdefault("wall_time", time.perf_counter() - t0)
    return sol
