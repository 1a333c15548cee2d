"""Column generation at the root of a random image: master value vs best bound.

The master objective only falls; the Lagrangean bound climbs towards it and
column generation stops once the rounded-up bound meets the master value.
Rows marked '*' were priced with smoothed duals that produced nothing
(a misprice); the next round falls back to the raw duals.

Run: python demos/convergence.py
"""
from rectblanket import SolverConfig, gen_shape, solve

image = gen_shape("random", 10, 10, seed=4, density=0.55)
sol = solve(image, SolverConfig(k=4))

print(f"{'it':>3} {'z_rlpm':>9} {'best lb':>9} {'added':>5}")
for row in sol.trace:
    if row["node"] != 0:
        break
    mark = "*" if row["misprice"] else " "
    print(f"{row['iteration']:3d} {row['z_rlpm']:9.3f} {row['lb']:9.3f} {row['added']:5d} {mark} {row['stop']}")
print(f"\noptimal mismatch {sol.objective} after {sol.stats['nodes']} node(s)")
