"""Hypothesis strategies for straight chains and affine torus maps."""
from fractions import Fraction

from hypothesis import strategies as st

from torusfill.chains import AffineTorusMap, Chain

coords = st.builds(Fraction, st.integers(-6, 6), st.sampled_from([1, 2, 3]))


def points(m):
    return st.tuples(*[coords] * m)


def vertex_tuples(m, d):
    return st.lists(points(m), min_size=d + 1, max_size=d + 1)


def chains(m, d, max_terms=5):
    terms = st.lists(st.tuples(st.integers(-3, 3), vertex_tuples(m, d)), max_size=max_terms)
    return terms.map(lambda ts: Chain.from_terms(m, d, ts))


@st.composite
def chains_any(draw, max_m=2, max_d=3):
    m = draw(st.integers(1, max_m))
    d = draw(st.integers(0, max_d))
    return draw(chains(m, d))


def integer_maps(m, n):
    matrix = st.lists(st.lists(st.integers(-3, 3), min_size=m, max_size=m),
                      min_size=n, max_size=n)
    return st.builds(lambda M, t: AffineTorusMap(M, t), matrix, points(n))


@st.composite
def sl2(draw):
    """Random products of the generators of ``SL(2, Z)``."""
    gens = [((1, 1), (0, 1)), ((1, 0), (1, 1)), ((0, -1), (1, 0))]
    word = draw(st.lists(st.sampled_from(range(3)), max_size=6))
    M = ((1, 0), (0, 1))
    for g in word:
        G = gens[g]
        M = tuple(tuple(sum(M[i][k] * G[k][j] for k in range(2)) for j in range(2))
                  for i in range(2))
    return M
