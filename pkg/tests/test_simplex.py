from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from torusfill.simplex import INFEASIBLE, OPTIMAL, UNBOUNDED, Tableau, solve_lp


def test_small_lp():
    # min -x - y  s.t.  x + 2y + s = 4,  3x + y + t = 6
    cols = [{0: 1, 1: 3}, {0: 2, 1: 1}, {0: 1}, {1: 1}]
    res = solve_lp(cols, [4, 6], [-1, -1, 0, 0])
    assert res.status == OPTIMAL
    assert res.value == Fraction(-14, 5)
    assert res.x[:2] == [Fraction(8, 5), Fraction(6, 5)]


def test_infeasible_and_unbounded():
    assert solve_lp([{0: 1}], [-1], [1]).status == INFEASIBLE
    assert solve_lp([{0: 1}, {0: -1}], [0], [-1, 0]).status == UNBOUNDED


def test_upper_bounds_and_flips():
    # min -x1 - x2 with x1 + x2 + s = 10, x1 <= 3, x2 <= 4
    res = solve_lp([{0: 1}, {0: 1}, {0: 1}], [10], [-1, -1, 0], upper={0: 3, 1: 4})
    assert res.status == OPTIMAL and res.value == -7


def test_degenerate_start_terminates():
    # degenerate start in the style of Beale's cycling example
    q = Fraction
    cols = [{0: 1}, {1: 1}, {2: 1},
            {0: q(1, 4), 1: q(1, 2)}, {0: -8, 1: -12}, {0: -1, 1: q(-1, 2), 2: 1}, {0: 9, 1: 3}]
    res = solve_lp(cols, [0, 0, 1], [0, 0, 0, q(-3, 4), 20, q(-1, 2), 6])
    assert res.status == OPTIMAL and res.value == q(-5, 4)


def test_incremental_rows_and_columns_match_one_shot():
    t = Tableau()
    t.add_row(3)
    t.add_column({0: 1}, 2)
    t.add_column({0: 1}, 1)
    assert t.solve() == OPTIMAL and t.objective() == 3
    r = t.add_row(0)
    t.add_column({r: 1, 0: 0}, 0)
    j = t.add_column({r: -1}, 0, hi=5)
    t.set_bounds(j, 1, 5)
    assert t.solve() == OPTIMAL
    assert t.primal()[j] == 1


@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=1, max_size=3),
       st.lists(st.integers(0, 3), min_size=3, max_size=3))
def test_duality_on_random_l1_problems(rows, xs):
    # min |x|_1 s.t. A x = A x0; the duals certify optimality
    b = [sum(a * x for a, x in zip(r, xs)) for r in rows]
    cols = []
    for j in range(3):
        col = {i: r[j] for i, r in enumerate(rows) if r[j]}
        cols += [col, {i: -v for i, v in col.items()}]
    res = solve_lp(cols, b, [1] * 6)
    assert res.status == OPTIMAL
    assert res.value <= sum(xs)
    assert sum(y * v for y, v in zip(res.y, b)) == res.value
    for col in cols:
        assert sum(res.y[i] * v for i, v in col.items()) <= 1
