import csv

import pytest
from hypothesis import given
from hypothesis import strategies as st

from strategies import sl2
from torusfill.mcg import (SHEAR, T0, T0_PRIME, Anosov, FareyTriangle, Periodic, ReducibleTwist,
                           Sl2Matrix, act, classify, flip, flip_distance_bfs, flip_distance_fast,
                           flip_path_between, fv_positive, neighbours, spine_growth_table,
                           write_growth_csv)

CAT = Sl2Matrix(2, 1, 1, 1)


def matrix(rows) -> Sl2Matrix:
    (a, b), (c, d) = rows
    return Sl2Matrix(a, b, c, d)


@st.composite
def triangles(draw):
    return act(matrix(draw(sl2())), T0)


# -- matrices -----------------------------------------------------------------------

def test_matrix_basics():
    assert Sl2Matrix.parse("2, 1,1,1") == CAT
    assert str(CAT) == "2,1,1,1"
    assert CAT @ CAT.inverse() == Sl2Matrix.identity()
    assert SHEAR ** 3 == Sl2Matrix(1, 3, 0, 1)
    assert SHEAR ** -2 == Sl2Matrix(1, -2, 0, 1)
    with pytest.raises(ValueError):
        Sl2Matrix(1, 1, 1, 1)
    with pytest.raises(ValueError):
        Sl2Matrix.parse("1,2,3")


def test_classify_examples():
    assert classify(SHEAR) == ReducibleTwist()
    assert classify(Sl2Matrix(0, -1, 1, 0)) == Periodic(4)
    assert classify(CAT) == Anosov()
    assert classify(Sl2Matrix.identity()) == Periodic(1)
    assert classify(Sl2Matrix(-1, 0, 0, -1)) == Periodic(2)
    assert classify(Sl2Matrix(0, -1, 1, -1)) == Periodic(3)
    assert classify(Sl2Matrix(1, -1, 1, 0)) == Periodic(6)
    assert classify(Sl2Matrix(-1, 5, 0, -1)) == ReducibleTwist()


def test_fv_positive_examples():
    assert not any(fv_positive(Sl2Matrix(1, n, 0, 1)) for n in range(1, 6))
    assert fv_positive(CAT)
    assert not fv_positive(Sl2Matrix.identity())


@given(sl2())
def test_classification_matches_trace(rows):
    A = matrix(rows)
    kind = classify(A)
    t = abs(A.trace)
    if isinstance(kind, Periodic):
        assert t < 2 or A in (Sl2Matrix.identity(), Sl2Matrix(-1, 0, 0, -1))
        assert kind.order in (1, 2, 3, 4, 6) and A ** kind.order == Sl2Matrix.identity()
    elif isinstance(kind, ReducibleTwist):
        assert t == 2
    else:
        assert t > 2


# -- Farey triangles --------------------------------------------------------------------

def test_triangle_validation():
    assert FareyTriangle.of((0, 1), (-1, 0), (1, 1)) == T0
    with pytest.raises(ValueError):
        FareyTriangle.of((1, 0), (1, 0), (1, 1))
    with pytest.raises(ValueError):
        FareyTriangle.of((1, 0), (1, 2), (0, 1))
    with pytest.raises(IndexError):
        flip(T0, 3)


def test_act_and_flip_examples():
    assert act(SHEAR, T0) == FareyTriangle.of((1, 0), (1, 1), (2, 1))
    assert flip(T0, T0.index((0, 1))) == FareyTriangle.of((1, 0), (2, 1), (1, 1))
    assert flip(T0, T0.index((1, 1))) == T0_PRIME


@given(triangles(), st.integers(0, 2))
def test_flip_is_involution(t, j):
    s = flip(t, j)
    assert s != t
    assert flip(s, j) == t and flip(s, j).slopes == t.slopes


@given(triangles(), st.lists(st.integers(0, 2), max_size=8))
def test_flips_preserve_unimodularity(t, moves):
    for j in moves:
        t = flip(t, j)  # the constructor re-checks the Farey invariant


# -- distances --------------------------------------------------------------------------

def test_bfs_examples():
    assert flip_distance_bfs(T0, T0) == 0
    for t in neighbours(T0):
        assert flip_distance_bfs(T0, t) == 1
    assert flip_distance_bfs(T0, act(SHEAR, T0)) == 1
    assert flip_distance_bfs(T0, act(CAT ** 20, T0), cap=6) is None


@pytest.mark.parametrize("A", [SHEAR, CAT])
def test_fast_matches_bfs_along_powers(A):
    for i in range(1, 20):
        t = act(A ** i, T0)
        fast = flip_distance_fast(T0, t)
        bfs = flip_distance_bfs(T0, t, cap=18)
        if fast <= 18:
            assert bfs == fast
        else:
            assert bfs is None


def test_shear_distances_grow_linearly():
    d = [flip_distance_fast(T0, act(SHEAR ** n, T0)) for n in range(1, 30)]
    assert d == list(range(1, 30))


@given(triangles(), triangles())
def test_fast_matches_bfs_random(t0, t1):
    fast = flip_distance_fast(t0, t1)
    if fast <= 10:
        assert flip_distance_bfs(t0, t1, cap=10) == fast
    assert flip_distance_fast(t1, t0) == fast
    assert flip_distance_fast(t0, t0) == 0


@given(triangles(), triangles(), sl2())
def test_distance_is_equivariant(t0, t1, rows):
    A = matrix(rows)
    assert flip_distance_fast(act(A, t0), act(A, t1)) == flip_distance_fast(t0, t1)


@given(sl2(), st.integers(1, 8), st.integers(1, 8))
def test_distance_subadditive_in_powers(rows, i, j):
    A = matrix(rows)

    def d(n):
        return flip_distance_fast(T0, act(A ** n, T0))

    assert d(i + j) <= d(i) + d(j)


@given(triangles(), triangles())
def test_path_between_is_a_geodesic(t0, t1):
    moves = flip_path_between(t0, t1)
    assert len(moves) == flip_distance_fast(t0, t1)
    t = t0
    for j in moves:
        t = flip(t, j)
    assert t == t1


# -- growth tables ------------------------------------------------------------------------

def test_growth_tables(tmp_path):
    rows = spine_growth_table(SHEAR, 20)
    assert min(r.ratio for r in rows) > 0
    cat = spine_growth_table(CAT, 15)
    last = [r.ratio for r in cat[-5:]]
    assert max(last) <= 1.2 * min(last)
    assert all(r.spine_proxy == 2 * r.distance for r in cat)
    path = tmp_path / "g.csv"
    write_growth_csv(cat, path, {"matrix": "2,1,1,1"})
    body = [l for l in path.read_text().splitlines() if not l.startswith("#")]
    table = list(csv.DictReader(body))
    assert len(table) == 15 and table[0] == {"i": "1", "distance": "2", "ratio_num": "2",
                                             "ratio_den": "1", "spine_proxy": "4"}


def test_growth_rejects_periodic():
    with pytest.raises(ValueError):
        spine_growth_table(Sl2Matrix(0, -1, 1, 0), 5)
