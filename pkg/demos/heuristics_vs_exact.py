"""Compare the three heuristics with the exact optimum on a few shapes.

Run: python demos/heuristics_vs_exact.py
"""
from rectblanket import CsaConfig, SolverConfig, csa_solve, fast_solve, gen_shape, sf_solve, solve
from rectblanket.bench import percentage_deviation

shapes = [("staircase", 12, 8), ("frame", 10, 10), ("random", 12, 12)]
k = 5
print(f"{'shape':<16} {'bp':>4} {'sf':>8} {'fast':>8} {'csa':>8}")
for kind, w, h in shapes:
    image = gen_shape(kind, w, h, seed=2)
    z = solve(image, SolverConfig(k=k)).objective
    cells = []
    for sol in (sf_solve(image, k), fast_solve(image, k), csa_solve(image, k, CsaConfig(seed=1))):
        cells.append(percentage_deviation(sol.objective, z))
    print(f"{kind + f' {w}x{h}':<16} {z:4d} " + " ".join(f"{c:>8}" for c in cells))
print("\nheuristic columns are % deviation from bp; '(z)' holds the raw mismatch when bp reaches 0")
