"""How the optimal blanket of a plus sign changes as the budget grows.

Run: python demos/plus_ladder.py
"""
from rectblanket import SolverConfig, gen_shape, solve

image = gen_shape("plus", 9, 9)
print("\n".join(image.to_rows()))
print()

for k in range(1, 5):
    sol = solve(image, SolverConfig(k=k))
    print(f"k={k}: mismatch {sol.objective:3d}  ({sol.status.value}, "
          f"{sol.stats['nodes']} nodes, {sol.stats['columns']} columns)")
    for r in sol.rects:
        print(f"    x {r.left}..{r.right}  y {r.top}..{r.bottom}")
