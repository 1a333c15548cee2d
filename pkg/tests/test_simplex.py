import numpy as np
import pytest
from scipy.optimize import linprog

from rectblanket import simplex


def _slack_lp(rng, m, n):
    A = np.hstack([rng.integers(0, 2, (m, n)).astype(float), np.eye(m)])
    c = np.concatenate([rng.uniform(-3, 1, n), np.zeros(m)])
    b = rng.integers(1, 4, m).astype(float)
    return A, b, c


@pytest.mark.parametrize("seed", range(20))
def test_matches_highs(seed):
    rng = np.random.default_rng(seed)
    m, n = rng.integers(2, 12), rng.integers(2, 25)
    A, b, c = _slack_lp(rng, m, n)
    res = simplex.solve(A, b, c, list(range(n, n + m)))
    ref = linprog(c, A_eq=A, b_eq=b, bounds=(0, None), method="highs")
    assert res.objective == pytest.approx(ref.fun, abs=1e-8)
    assert res.dual_objective == pytest.approx(res.objective, abs=1e-8)
    assert np.allclose(A @ res.x, b) and res.x.min() >= 0
    # dual feasibility: reduced costs nonnegative
    assert (c - res.y @ A).min() >= -1e-9


def test_warm_start_same_optimum():
    rng = np.random.default_rng(7)
    A, b, c = _slack_lp(rng, 8, 20)
    cold = simplex.solve(A, b, c, list(range(20, 28)))
    warm = simplex.solve(A, b, c, cold.basis)
    assert warm.pivots == 0
    assert warm.objective == pytest.approx(cold.objective, abs=1e-9)


def test_errors():
    A = np.array([[1.0, -1.0]])
    with pytest.raises(simplex.SimplexError, match="unbounded"):
        simplex.solve(A, np.array([1.0]), np.array([0.0, -1.0]), [0])
    with pytest.raises(simplex.SimplexError, match="singular"):
        simplex.solve(np.zeros((1, 2)), np.array([1.0]), np.zeros(2), [0])
    with pytest.raises(simplex.SimplexError, match="infeasible"):
        simplex.solve(np.array([[1.0, 1.0]]), np.array([-1.0]), np.zeros(2), [0])
