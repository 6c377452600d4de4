import random

import pytest
from hypothesis import given, strategies as st

from localduality._rational import Q, ONE
from localduality.coinner import construct_chi, build_duality
from localduality.hochschild import (AInftyAlgebra, HochschildCochain, WindowError, add,
                                     hochschild_differential, c_differential, cup_product,
                                     a_degree, c_degree, normalize, is_normalized, connes_delta,
                                     dual_cobimodule, transported_structure,
                                     transport_product, TransportedStructure, CochainWindow,
                                     restrict_arity, bv_check)
from localduality.minimal_model import square_zero_residual
from localduality.simplicial import default_fundamental_class
from conftest import complex_, coalgebra


def point_alg(A=7):
    return AInftyAlgebra(coalgebra("point", A + 1), A)


def classical_coefficient(n):
    """Hochschild differential of Q on the cochain 1 of arity n, by the bar formula."""
    return 1 + sum((-1) ** i for i in range(1, n + 1)) + (-1) ** (n + 1)


@pytest.mark.parametrize("n", range(0, 7))
def test_point_against_classical_bar_complex(n):
    alg = point_alg()
    a = 0
    want = classical_coefficient(n)
    got_a = hochschild_differential(alg, {(a, (a,) * n): ONE})
    got_c = c_differential(alg, {(a,) * (n + 1): ONE})
    for got in (got_a, got_c):
        if want == 0:
            assert got == {}
        else:
            assert len(got) == 1 and abs(next(iter(got.values()))) == abs(want)
    assert set(got_a) <= {(a, (a,) * (n + 1))}


def random_a(alg, rng, arity, terms=3):
    n = len(alg.K)
    return {(rng.randrange(n), tuple(rng.randrange(n) for _ in range(rng.randint(0, arity)))):
            Q(rng.randint(-3, 3) or 1) for _ in range(terms)}


def random_c(alg, rng, arity, terms=3):
    n = len(alg.K)
    return {tuple(rng.randrange(n) for _ in range(rng.randint(1, arity + 1))):
            Q(rng.randint(-3, 3) or 1) for _ in range(terms)}


def homogeneous_a(alg, rng, arity):
    while True:
        x = random_a(alg, rng, arity, 1)
        if x:
            return x


ALGS = {}


def alg_for(name, A=3, coproduct="strict-aw"):
    key = (name, A, coproduct)
    if key not in ALGS:
        ALGS[key] = AInftyAlgebra(coalgebra(name, A + 1, coproduct), A)
    return ALGS[key]


@given(st.integers(0, 10 ** 6), st.sampled_from(["circle", "sphere"]),
       st.sampled_from(["strict-aw", "symmetrized"]))
def test_differentials_square_to_zero(seed, name, coproduct):
    alg = alg_for(name, 3, coproduct)
    rng = random.Random(seed)
    x = random_a(alg, rng, 2)
    assert not hochschild_differential(alg, hochschild_differential(alg, x))
    y = random_c(alg, rng, 2)
    assert not c_differential(alg, c_differential(alg, y))


@given(st.integers(0, 10 ** 6), st.sampled_from(["circle", "sphere"]))
def test_cup_product_leibniz(seed, name):
    alg = alg_for(name, 3, "symmetrized")
    rng = random.Random(seed)
    p, q = homogeneous_a(alg, rng, 1), homogeneous_a(alg, rng, 1)
    dp = a_degree(alg, next(iter(p)))
    lhs = hochschild_differential(alg, cup_product(alg, p, q))
    rhs = add(cup_product(alg, hochschild_differential(alg, p), q),
              cup_product(alg, p, hochschild_differential(alg, q)), coeffs=[ONE, Q((-1) ** dp)])
    assert lhs == rhs


@given(st.integers(0, 10 ** 6))
def test_differential_raises_degree(seed):
    alg = alg_for("sphere", 3)
    rng = random.Random(seed)
    x = homogeneous_a(alg, rng, 2)
    d = a_degree(alg, next(iter(x)))
    assert {a_degree(alg, k) for k in hochschild_differential(alg, x)} <= {d + 1}
    w = next(iter(random_c(alg, rng, 2, 1)))
    assert {c_degree(alg, k) for k in c_differential(alg, {w: ONE})} <= {c_degree(alg, w) + 1}


@given(st.integers(0, 10 ** 6), st.sampled_from(["circle", "sphere"]))
def test_normalization_is_a_chain_projection(seed, name):
    alg = alg_for(name, 3)
    rng = random.Random(seed)
    x = random_c(alg, rng, 2)
    nx = normalize(alg, x)
    assert is_normalized(alg, nx)
    assert normalize(alg, c_differential(alg, nx)) == c_differential(alg, nx)
    assert normalize(alg, c_differential(alg, x)) == c_differential(alg, nx)


@given(st.integers(0, 10 ** 6), st.sampled_from(["circle", "sphere"]))
def test_connes_operator(seed, name):
    alg = alg_for(name, 3)
    rng = random.Random(seed)
    x = normalize(alg, random_c(alg, rng, 3))
    assert not connes_delta(alg, connes_delta(alg, x))
    y = normalize(alg, random_c(alg, rng, 2))
    anti = add(c_differential(alg, connes_delta(alg, y)), connes_delta(alg, c_differential(alg, y)))
    assert not restrict_arity(anti, 2)


def test_connes_on_arity_zero_is_zero():
    alg = alg_for("circle", 3)
    assert connes_delta(alg, {(0,): ONE}) == {}
    assert connes_delta(alg, {}) == {}


@pytest.mark.parametrize("name", ["circle", "sphere"])
def test_dual_cobimodule_square_zero(name):
    D = coalgebra(name, 4)
    K = D.K
    M = dual_cobimodule(D, K.dimension, 2)
    assert not square_zero_residual(M)


def test_counit_is_strict_for_strict_aw():
    assert alg_for("circle", 3).counit_defects() == []
    assert not alg_for("circle", 3).relation_residual().residuals


def test_cochain_wrapper():
    alg = alg_for("circle", 3)
    x = HochschildCochain(alg, {(0, (1, 2)): ONE})
    assert x.arities == [2] and x.degrees == [a_degree(alg, (0, (1, 2)))]
    assert x.differential().values == "A"
    y = HochschildCochain(alg, {(2, 0): ONE}, values="C")
    assert y.serialize()["terms"][0]["value"] == "sigma"
    with pytest.raises(WindowError):
        HochschildCochain(alg, {(0, (1, 1, 1, 1)): ONE})
    with pytest.raises(ValueError):
        HochschildCochain(alg, {}, values="B")


def test_window_classes_are_cocycles():
    alg = alg_for("circle", 4)
    W = CochainWindow(alg, 4)
    for d in (-1, 0):
        for z in W.classes(d):
            assert W.is_exact(c_differential(alg, z), d + 1) or not c_differential(alg, z)
            assert not W.is_exact(z, d)


def transported(name, A, coproduct="strict-aw"):
    K = complex_(name)
    D = coalgebra(name, A + 2, coproduct)
    F = build_duality(construct_chi(K, D, A), default_fundamental_class(K))
    return transported_structure(K, D, F, A)[0]


def test_transport_product_requires_quasi_inverse():
    T = transported("point", 3)
    bare = TransportedStructure(T.alg, T.F, None, T.shift)
    with pytest.raises(ValueError):
        transport_product(bare, {(0,): ONE}, {(0,): ONE})


def test_point_report_is_vacuous_pass():
    rep = bv_check(transported("point", 4), samples=5)
    assert rep.ok
    assert rep.nontrivial["delta not exact"] == 0


def test_window_arity_must_be_below_truncation():
    with pytest.raises(WindowError):
        bv_check(transported("point", 3), arity=3)


def test_circle_small_report():
    rep = bv_check(transported("circle", 3), arity=2, samples=6, seed=1, random_cochains=10)
    assert rep.ok, rep.text()


def test_sphere_report():
    rep = bv_check(transported("sphere", 2), window=(-3, 1), arity=1, samples=8,
                   random_cochains=10)
    assert rep.ok, rep.text()
    assert sum(rep.classes.values()) > 0
