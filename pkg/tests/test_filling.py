import random
from fractions import Fraction

import pytest

from torusfill.chains import Chain, boundary, canonicalize, l1_norm
from torusfill.constructions import make_a, make_b, make_c
from torusfill.filling import (BudgetExhausted, FillingCertificate, ModelInfeasible,
                               NotRepresentable, UniverseTooLarge, build_model, fill_int,
                               fill_real, oracle_fill_int, verify_certificate)

H = Fraction(1, 2)


@pytest.fixture(scope="module")
def torus_model():
    return build_model(2, 2, 2, 2)


def random_boundary(model, rng, n_terms=3, max_coeff=2):
    cols = rng.sample(range(len(model.columns)), min(n_terms, len(model.columns)))
    x = {j: rng.choice([-max_coeff, -1, 1, max_coeff]) for j in cols}
    w = model.chain(x)
    return boundary(w), l1_norm(w)


# -- models ----------------------------------------------------------------------------

def test_small_circle_model():
    model = build_model(1, 1, 1, 2)
    box = {canonicalize([0, v]) for v in (0, 1, 2)}
    rows = {model.row_simplex(i) for i in range(len(model.rows))}
    assert box <= rows
    cols = [model.column_simplex(j) for j in range(len(model.columns))]
    assert all(s.vertices[0] == (0,) and all(0 <= p[0] <= 2 for p in s.vertices) for s in cols)
    assert len(cols) == 9
    assert cols == sorted(cols)


def test_every_face_is_a_row():
    model = build_model(2, 1, 2, 1)
    for j in range(len(model.columns)):
        for _, face in model.column_simplex(j).faces():
            assert model.key_of(face) in model.row_index


def test_boundary_matrix_column():
    model = build_model(1, 1, 1, 2)
    j = model.column_index(canonicalize([0, 1, 2]))
    col = dict(model.B[j])
    want = model.vector(Chain.from_terms(1, 1, [(1, [1, 2]), (-1, [0, 2]), (1, [0, 1])]))
    assert col == want


def test_torus_model_contains_named_chains(torus_model):
    for z in (make_a(), make_b(), make_c()):
        for s, _ in z.items():
            assert torus_model.key_of(s) in torus_model.row_index
    assert torus_model.vector(make_a() - make_c())


def test_universe_cap():
    with pytest.raises(UniverseTooLarge):
        build_model(2, 2, 2, 2, max_universe=1000)
    with pytest.raises(ValueError):
        build_model(1, 1, 0, 1)


def test_not_representable():
    model = build_model(1, 1, 1, 2)
    with pytest.raises(NotRepresentable):
        fill_real(model, Chain.simplex([0, H]))


# -- LP and ILP -------------------------------------------------------------------------

def test_zero_chain():
    model = build_model(1, 1, 1, 2)
    zero = Chain.zero(1, 1)
    for cert in (fill_real(model, zero), fill_int(model, zero)):
        assert cert.value == 0 and not cert.witness
    c = make_c()
    assert fill_int(build_model(2, 2, 1, 1), c - c).value == 0


def test_boundary_of_one_simplex():
    model = build_model(1, 1, 1, 2)
    w = Chain.simplex([0, 1, 2])
    real = fill_real(model, boundary(w))
    assert real.value <= 1
    integral = fill_int(model, boundary(w))
    assert integral.value == 1
    assert integral.witness == w or boundary(integral.witness) == boundary(w)


def test_non_boundary_cycle_is_infeasible():
    model = build_model(1, 1, 1, 3)
    loop = Chain.simplex([0, 1])
    with pytest.raises(ModelInfeasible) as err:
        fill_real(model, loop)
    # the Farkas ray separates z from the column space
    y = err.value.farkas
    assert y is not None
    with pytest.raises(ModelInfeasible):
        fill_int(model, loop)


def test_torus_targets(torus_model):
    for z in (make_a() - make_c(), make_c() - make_b()):
        real = fill_real(torus_model, z)
        integral = fill_int(torus_model, z)
        assert real.value <= integral.value == 3
        assert oracle_fill_int(torus_model, z, 4) == integral.value
        verify_certificate(torus_model, z, real)
        verify_certificate(torus_model, z, integral)


def test_node_cap():
    model = build_model(1, 1, 1, 3)
    z, _ = random_boundary(model, random.Random(4))
    with pytest.raises(BudgetExhausted):
        fill_int(model, z, node_cap=0)


@pytest.mark.parametrize("params", [(1, 1, 1, 3), (1, 1, 2, 2), (2, 1, 1, 1), (1, 2, 1, 2)])
def test_int_matches_oracle_on_random_boundaries(params):
    model = build_model(*params)
    rng = random.Random(hash(params) & 0xffff)
    for _ in range(6):
        z, budget = random_boundary(model, rng)
        real = fill_real(model, z)
        integral = fill_int(model, z)
        assert real.value <= integral.value <= budget
        assert oracle_fill_int(model, z, budget) == integral.value
        assert boundary(integral.witness) == z and integral.witness.is_integral()


def test_values_deterministic():
    model = build_model(1, 1, 2, 2)
    z, _ = random_boundary(model, random.Random(7))
    assert len({fill_int(model, z).value for _ in range(3)}) == 1


def test_monotone_in_model():
    rng = random.Random(11)
    small = build_model(1, 1, 1, 2)
    bigger = [build_model(1, 1, 1, 3), build_model(1, 1, 2, 2), build_model(1, 1, 2, 3)]
    for _ in range(4):
        z, _ = random_boundary(small, rng)
        base_i, base_r = fill_int(small, z).value, fill_real(small, z).value
        for m in bigger:
            assert fill_int(m, z).value <= base_i
            assert fill_real(m, z).value <= base_r


# -- certificates ------------------------------------------------------------------------

def test_certificate_round_trip_and_tamper(torus_model):
    z = make_a() - make_c()
    cert = fill_real(torus_model, z)
    again = FillingCertificate.from_dict(cert.to_dict(torus_model))
    verify_certificate(torus_model, z, again)
    sparse = FillingCertificate.from_dict(cert.to_dict())
    assert sparse.dual == cert.dual

    bad_dual = FillingCertificate(cert.value, cert.witness, {i: 2 * v for i, v in cert.dual.items()},
                                  "real", cert.lp_value)
    with pytest.raises(AssertionError):
        verify_certificate(torus_model, z, bad_dual)
    bad_witness = FillingCertificate(cert.value, -cert.witness, cert.dual, "real", cert.lp_value)
    with pytest.raises(AssertionError):
        verify_certificate(torus_model, z, bad_witness)
    bad_value = FillingCertificate(cert.value + 1, cert.witness, cert.dual, "real", cert.lp_value)
    with pytest.raises(AssertionError):
        verify_certificate(torus_model, z, bad_value)


# -- oracle ------------------------------------------------------------------------------

def test_oracle_zero_and_h0_generator():
    model = build_model(1, 0, 1, 2)
    assert oracle_fill_int(model, Chain.zero(1, 0), 5) == 0
    assert oracle_fill_int(model, Chain.simplex([0]), 6) is None
    with pytest.raises(ModelInfeasible):
        fill_real(model, Chain.simplex([0]))


def test_oracle_budget():
    model = build_model(1, 1, 1, 3)
    z = boundary(Chain.simplex([0, 1, 2]) + Chain.simplex([0, 2, 3]))
    assert oracle_fill_int(model, z, 0) is None
    assert oracle_fill_int(model, z, 2) == fill_int(model, z).value


def test_oracle_column_cap():
    model = build_model(1, 1, 1, 3)
    with pytest.raises(UniverseTooLarge):
        oracle_fill_int(model, Chain.zero(1, 1), 1, max_columns=3)
