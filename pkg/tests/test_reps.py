import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_hom_D_count
from tjk.algebra import AlgebraElement, XPolynomial, idempotent_f, x_power, y_power
from tjk.reps import (GammaRep, ModuleVector, RepError, act_element, act_x, act_y, build_Lp, build_S1_power,
                      direct_sum, find_isomorphism, hom_basis_D, hom_dim_D, lf_dim, lf_dim_closed, psi_morphism,
                      random_invertible, random_rep, rep_from_json, rep_to_json, stats, vec_add, vec_scale,
                      vec_sub, xi_extract)
from tjk.scalars import ExactMatrix, FieldCtx, inverse

Q = FieldCtx.rationals()
F2 = FieldCtx.prime(2)
F5 = FieldCtx.prime(5)


# -- construction -------------------------------------------------------------


def test_validate_rejects_singular_loop():
    with pytest.raises(RepError):
        GammaRep.make(Q, 1, 2, [[1, 0]], [[1, 2], [2, 4]])
    with pytest.raises(ValueError):
        GammaRep.make(Q, 1, 2, [[1, 0, 0]], [[1, 0], [0, 1]])
    with pytest.raises(RepError):
        GammaRep(Q, 1, 2, ExactMatrix(Q, 2, 1), ExactMatrix.identity(Q, 2))
    r = GammaRep.make(Q, 2, 0)
    assert stats(r) == (2, 0, 2)


def test_build_Lp_examples():
    assert build_Lp(XPolynomial(Q, [-1, 1])) == GammaRep.make(Q, 0, 1, None, [[1]])
    # x^2 is a unit in the quotient, so L_{x^2} vanishes
    assert build_Lp(XPolynomial(Q, [0, 0, 1])) == GammaRep.make(Q, 0, 0)
    assert build_Lp(XPolynomial(Q, [1, 1, 1])).F.tolist() == [[0, -1], [1, -1]]
    # only the x-free part matters, and scaling is irrelevant
    assert build_Lp(XPolynomial(Q, [0, 2, 2, 2])) == build_Lp(XPolynomial(Q, [1, 1, 1]))
    with pytest.raises(RepError):
        build_Lp(XPolynomial(Q))


def test_direct_sum_and_stats():
    a = GammaRep.make(Q, 2, 1, [[1], [0]], [[3]])
    b = build_S1_power(Q, 2)
    s = direct_sum(a, b)
    assert (s.dim_u, s.dim_v) == (4, 1)
    assert stats(a) == (2, 1, 1)
    assert stats(s) == (4, 1, 3)
    with pytest.raises(RepError):
        build_S1_power(Q, -1)


# -- the realized module ------------------------------------------------------


@pytest.mark.parametrize("ctx", [Q, F5])
def test_defining_relations(ctx):
    rng = random.Random(2)
    f1 = idempotent_f(ctx, 1)
    for _ in range(20):
        rep = random_rep(ctx, rng, max_dim=3)
        m = ModuleVector.random(rep, rng)
        assert act_x(rep, act_y(rep, m)) == m
        assert act_y(rep, act_x(rep, m)) == vec_sub(rep, m, act_element(rep, f1, m))


def test_f1_on_the_v_block():
    rep = GammaRep.make(Q, 2, 2, [[1, 2], [0, 1]], [[0, 1], [1, 1]])
    v = (1, 3)
    m = ModuleVector({}, v)
    EFv = rep.E.apply(rep.F.apply(list(v)))
    expect = ModuleVector({(0, k): -c for k, c in enumerate(EFv)}, (0, 0))
    assert act_element(rep, idempotent_f(Q, 1), m) == expect


@pytest.mark.parametrize("ctx", [Q, F5])
def test_algebra_action_is_multiplicative(ctx):
    rng = random.Random(4)
    for _ in range(20):
        rep = random_rep(ctx, rng, max_dim=3)
        a = AlgebraElement.random(ctx, rng, max_deg=3, max_terms=3)
        b = AlgebraElement.random(ctx, rng, max_deg=3, max_terms=3)
        m = ModuleVector.random(rep, rng)
        assert act_element(rep, a * b, m) == act_element(rep, a, act_element(rep, b, m))
        assert act_element(rep, a + b, m) == vec_add(rep, act_element(rep, a, m), act_element(rep, b, m))
        for k in range(4):
            assert act_element(rep, x_power(ctx, k) * y_power(ctx, k), m) == m


def test_socle_part_is_killed_by_x_eventually():
    rep = build_S1_power(Q, 2)
    m = ModuleVector({(3, 0): 1, (1, 1): 2}, ())
    for _ in range(4):
        m = act_x(rep, m)
    assert m.is_zero()


def test_vector_shape_checked():
    rep = GammaRep.make(Q, 1, 1, [[1]], [[1]])
    with pytest.raises(IndexError):
        act_x(rep, ModuleVector({}, (1, 2)))
    with pytest.raises(IndexError):
        act_y(rep, ModuleVector({(0, 3): 1}, (1,)))


@pytest.mark.parametrize("ctx", [Q, F5])
def test_psi_is_functorial(ctx):
    rng = random.Random(8)
    checked = 0
    for _ in range(30):
        a = random_rep(ctx, rng, max_dim=2)
        b = random_rep(ctx, rng, max_dim=2)
        basis = hom_basis_D(a, b)
        if not basis:
            continue
        phi = basis[rng.randrange(len(basis))]
        m = ModuleVector.random(a, rng)
        for op_a, op_b in ((act_x, act_x), (act_y, act_y)):
            assert psi_morphism(phi, op_a(a, m)) == op_b(b, psi_morphism(phi, m))
        c = ctx.random(rng)
        assert psi_morphism(phi, vec_scale(a, c, m)) == vec_scale(b, c, psi_morphism(phi, m))
        checked += 1
    assert checked > 5


# -- morphisms ----------------------------------------------------------------


def _f2_lists(rep):
    return rep.E.tolist() or [[] for _ in range(rep.dim_u)], rep.F.tolist()


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_hom_dim_matches_enumeration_f2(seed):
    rng = random.Random(seed)
    a = random_rep(F2, rng, max_dim=2, e_density=0.6)
    b = random_rep(F2, rng, max_dim=2, e_density=0.6)
    Ea, Fa = _f2_lists(a)
    Eb, Fb = _f2_lists(b)
    assert 2 ** hom_dim_D(a, b) == brute_hom_D_count(Ea, Fa, Eb, Fb, 2)


def test_hom_examples():
    one = build_Lp(XPolynomial(Q, [-1, 1]))
    two = build_Lp(XPolynomial(Q, [-2, 1]))
    assert hom_dim_D(one, one) == 1
    assert hom_dim_D(one, two) == 0
    assert hom_dim_D(build_S1_power(Q, 2), build_S1_power(Q, 3)) == 6
    # the unique map S_1 -> (1, 1, E=[1], F=[1]) needs phi_u E = E phi_v
    a = GammaRep.make(Q, 1, 1, [[1]], [[1]])
    assert hom_dim_D(build_S1_power(Q, 1), a) == 1
    assert hom_dim_D(a, build_S1_power(Q, 1)) == 0
    assert hom_dim_D(GammaRep.make(Q, 0, 0), a) == 0


@pytest.mark.parametrize("ctx", [Q, F5])
def test_hom_dim_is_iso_invariant(ctx):
    rng = random.Random(6)
    for _ in range(15):
        a = random_rep(ctx, rng, max_dim=3)
        b = random_rep(ctx, rng, max_dim=3)
        U = random_invertible(ctx, rng, a.dim_u)
        V = random_invertible(ctx, rng, a.dim_v)
        conj = GammaRep(ctx, a.dim_u, a.dim_v, U @ a.E @ inverse(V), V @ a.F @ inverse(V))
        assert hom_dim_D(conj, b) == hom_dim_D(a, b)
        assert hom_dim_D(b, conj) == hom_dim_D(b, a)
        phi = find_isomorphism(a, conj, rng)
        assert phi is not None
        assert phi[0] @ a.E == conj.E @ phi[1]
        assert phi[1] @ a.F == conj.F @ phi[1]


def test_find_isomorphism_negative():
    a = GammaRep.make(F5, 1, 1, [[1]], [[2]])
    b = GammaRep.make(F5, 1, 1, [[0]], [[2]])
    c = GammaRep.make(F5, 1, 1, [[1]], [[3]])
    assert find_isomorphism(a, b) is None
    assert find_isomorphism(a, c) is None
    assert find_isomorphism(a, GammaRep.make(F5, 1, 1, [[4]], [[2]])) is not None


@pytest.mark.parametrize("ctx", [Q, F5])
def test_d_is_additive(ctx):
    rng = random.Random(12)
    for _ in range(20):
        a = random_rep(ctx, rng, e_density=0.5)
        b = random_rep(ctx, rng, e_density=0.5)
        assert stats(direct_sum(a, b))[2] == stats(a)[2] + stats(b)[2]


# -- locally finite part --------------------------------------------------------


def test_lf_examples():
    assert lf_dim(build_Lp(XPolynomial(Q, [1, 1, 1]))) == 2
    assert lf_dim(build_S1_power(Q, 3)) == 0
    # v is sent into IM by E, and F fixes it, so no nonzero lf vector
    assert lf_dim(GammaRep.make(Q, 1, 1, [[1]], [[1]])) == 0
    # E F^h vanishes on (1, -1) for all h when F swaps and E sums
    rep = GammaRep.make(Q, 1, 2, [[1, 1]], [[0, 1], [1, 0]])
    assert lf_dim_closed(rep) == 1 == lf_dim(rep)


@pytest.mark.parametrize("ctx", [Q, F5])
def test_lf_window_matches_closed_form(ctx):
    rng = random.Random(21)
    for _ in range(12):
        rep = random_rep(ctx, rng, max_dim=3, e_density=0.4)
        assert lf_dim(rep) == lf_dim_closed(rep) <= rep.dim_v


# -- round trip -----------------------------------------------------------------


@pytest.mark.parametrize("ctx", [Q, F5])
def test_xi_psi_round_trip(ctx):
    rng = random.Random(31)
    for _ in range(20):
        rep = random_rep(ctx, rng, max_dim=3)
        back = xi_extract(rep)
        assert stats(back) == stats(rep)
        assert find_isomorphism(rep, back, rng) is not None


def test_xi_on_pure_pieces():
    assert xi_extract(build_S1_power(Q, 2)) == build_S1_power(Q, 2)
    L = build_Lp(XPolynomial(Q, [2, 0, 1]))
    assert xi_extract(L) == L


def test_json_round_trip():
    rng = random.Random(41)
    for ctx in (Q, F5):
        for _ in range(10):
            rep = random_rep(ctx, rng)
            data = rep_to_json(rep)
            assert rep_from_json(data) == rep
            assert rep_from_json(json.dumps(data)) == rep


def test_json_nested_and_errors():
    rep = rep_from_json({"field": "Q", "dim_u": 1, "dim_v": 2, "E": [["1/2", "0"]], "F": [["0", "1"], ["1", "0"]]})
    assert rep.E.tolist() == [[Q.parse_scalar("1/2"), 0]]
    with pytest.raises(RepError):
        rep_from_json({"field": "Q", "dim_u": 1, "dim_v": 1, "E": ["1", "2"], "F": ["1"]})
    with pytest.raises(RepError):
        rep_from_json({"field": "Q", "dim_u": 0, "dim_v": 1, "F": ["0"]})
    with pytest.raises(RepError):
        rep_from_json({"dim_u": 0, "dim_v": 0})
    with pytest.raises(RepError):
        rep_from_json({"field": "Q", "dim_v": 0})
    with pytest.raises(RepError):
        rep_from_json({"field": "Fp:5", "dim_u": 0, "dim_v": 0}, ctx=Q)
    with pytest.raises(ValueError):
        rep_from_json({"field": "Q", "dim_u": 0, "dim_v": 1, "F": ["x"]})
    assert rep_from_json({"dim_u": 0, "dim_v": 1, "F": ["3"]}, ctx=F5).F.tolist() == [[3]]
    assert ExactMatrix(Q, 0, 0) == rep_from_json({"field": "Q", "dim_u": 0, "dim_v": 0}).F
