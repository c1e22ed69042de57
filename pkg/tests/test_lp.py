import numpy as np
import pytest
from scipy.optimize import linprog

from mlevidence import InfeasibleError, LinearProgram, solve_lp
from mlevidence.errors import UnboundedError


def test_textbook_max():
    # max 3x + 5y  s.t. x <= 4, 2y <= 12, 3x + 2y <= 18  ->  36 at (2, 6)
    lp = LinearProgram([3, 5], [[1, 0], [0, 2], [3, 2]], [4, 12, 18])
    res = solve_lp(lp, "max")
    assert res.value == pytest.approx(36)
    assert res.x == pytest.approx([2, 6])


def test_equality_and_negative_rhs():
    # min x + y  s.t. x - y = -1, x + y >= 3  ->  x=1, y=2
    lp = LinearProgram([1, 1], [[-1, -1]], [-3], [[1, -1]], [-1])
    res = solve_lp(lp)
    assert res.value == pytest.approx(3)
    assert res.x == pytest.approx([1, 2])


def test_simplex_vertex():
    lp = LinearProgram([0.2, 0.9, 0.4], A_eq=[[1, 1, 1]], b_eq=[1])
    assert solve_lp(lp, "max").x == pytest.approx([0, 1, 0])
    assert solve_lp(lp, "min").x == pytest.approx([1, 0, 0])


def test_redundant_equalities():
    lp = LinearProgram([1, 2, 3], A_eq=[[1, 1, 1], [2, 2, 2], [1, 0, 0]], b_eq=[1, 2, 0.25])
    res = solve_lp(lp, "min")
    assert res.value == pytest.approx(0.25 + 2 * 0.75)


def test_infeasible():
    with pytest.raises(InfeasibleError):
        solve_lp(LinearProgram([1, 1], [[1, 1]], [1], [[1, 1]], [2]))


def test_unbounded():
    with pytest.raises(UnboundedError):
        solve_lp(LinearProgram([1, 0], [[-1, 1]], [1]), "max")


def test_bad_sense_and_shapes():
    with pytest.raises(ValueError, match="sense"):
        solve_lp(LinearProgram([1]), "up")
    with pytest.raises(ValueError, match="shape"):
        LinearProgram([1, 1], [[1, 1, 1]], [1])


def test_degenerate_cycling_example():
    # Beale's example cycles under the textbook largest-coefficient rule
    c = [-0.75, 150, -0.02, 6]
    A = [[0.25, -60, -0.04, 9], [0.5, -90, -0.02, 3], [0, 0, 1, 0]]
    res = solve_lp(LinearProgram(c, A, [0, 0, 1]))
    assert res.value == pytest.approx(-0.05)


def random_lp(rng):
    n = int(rng.integers(2, 9))
    m = int(rng.integers(1, 7))
    x0 = rng.dirichlet(np.ones(n))
    A_ub = rng.normal(size=(m, n))
    b_ub = A_ub @ x0 + rng.uniform(0, 0.5, m)
    A_eq = np.vstack([np.ones(n), rng.integers(0, 2, size=(int(rng.integers(0, 3)), n))])
    b_eq = A_eq @ x0
    return LinearProgram(rng.normal(size=n), A_ub, b_ub, A_eq, b_eq)


def test_agrees_with_highs(rng):
    for _ in range(300):
        lp = random_lp(rng)
        for sense, sign in (("min", 1), ("max", -1)):
            ref = linprog(sign * lp.objective, lp.A_ub, lp.b_ub, lp.A_eq, lp.b_eq, method="highs")
            assert ref.status == 0
            res = solve_lp(lp, sense)
            assert res.value == pytest.approx(sign * ref.fun, abs=1e-8)
            assert res.x.min() >= -1e-9
            assert lp.A_ub @ res.x == pytest.approx(np.minimum(lp.A_ub @ res.x, lp.b_ub), abs=1e-8)
            assert lp.A_eq @ res.x == pytest.approx(lp.b_eq, abs=1e-8)


def test_deterministic(rng):
    lp = random_lp(rng)
    first = solve_lp(lp, "max")
    for _ in range(5):
        again = solve_lp(lp, "max")
        assert np.array_equal(first.x, again.x)
        assert first.pivots == again.pivots
