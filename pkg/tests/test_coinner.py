import random

import pytest
from hypothesis import given, strategies as st

from localduality._rational import Q, ONE, add_into
from localduality.coinner import (construct_chi, build_duality, verify_duality, chain_map_residual,
                                  compare_to_reference, reference_rows, translate_table,
                                  table_word, cyclic_exact, induced_iso_ranks)
from localduality.simplicial import default_fundamental_class
from localduality.tensor import cyclic_differential, rotate_tau, sub_elements
from conftest import complex_, coalgebra


def chi_for(name, N, coproduct="strict-aw", mode="canonical"):
    return construct_chi(complex_(name), coalgebra(name, N, coproduct), mode=mode)


@pytest.mark.parametrize("name,N", [("point", 6), ("interval", 6), ("circle", 6), ("sphere", 4)])
@pytest.mark.parametrize("coproduct", ["strict-aw", "symmetrized"])
def test_chi_is_local_chain_map(name, N, coproduct):
    chi = chi_for(name, N, coproduct)
    D = coalgebra(name, N, coproduct)
    for c in range(len(chi.K)):
        assert not chain_map_residual(chi, D, c)
    assert chi.locality()
    # lowest component is the diagonal
    for c in range(len(chi.K)):
        low = {w: v for (w, p), v in chi.values.get(c, {}).items() if len(w) == 2}
        assert low == {w: v for w, v in D.component(2, c).items()}


@pytest.mark.parametrize("name", ["point", "interval", "circle"])
def test_sparse_mode_reproduces_reference_table(name):
    N = 6
    chi = chi_for(name, N, mode="sparse")
    res = compare_to_reference(chi, coalgebra(name, N), name)
    assert all(r["match"] for r in res.values())


def test_canonical_mode_differs_by_exact_terms():
    chi = chi_for("interval", 4)
    res = compare_to_reference(chi, coalgebra("interval", 4), "interval")
    assert not res["sigma"]["match"] and res["sigma"]["exact_difference"]


def test_perturbed_table_is_detected():
    K = complex_("interval")
    D = coalgebra("interval", 4)
    chi = chi_for("interval", 4, mode="sparse")
    el = chi.values[K.index["sigma"]]
    # a closed but non-exact change: drop the lowest term
    bad = dict(el)
    key = table_word(K, (), "sigma", (), "a")
    del bad[key]
    diff = sub_elements(el, bad)
    assert cyclic_exact(D, diff, K.closure_indices(K.index["sigma"]), 3) is None


def test_translate_table_signs():
    K = complex_("interval")
    rows = reference_rows("interval", 2)["sigma"]
    el = translate_table(K, rows)
    s, a, b = K.index["sigma"], K.index["a"], K.index["b"]
    assert el[((s, a, s), 1)] == -1     # tensor degree one picks up a sign
    assert el[((a, s), 0)] == 1
    assert el[((s, s, b), 1)] == 1


@pytest.mark.parametrize("name,N", [("point", 6), ("circle", 6), ("sphere", 4)])
def test_duality_checks_pass(name, N):
    K = complex_(name)
    D = coalgebra(name, N)
    F = build_duality(chi_for(name, N), default_fundamental_class(K))
    rep = verify_duality(F, D)
    assert rep.ok, rep.as_dict()
    assert rotate_tau(K, F.element) == F.element
    assert not cyclic_differential(D, F.element, max_degree=F.max_degree)
    assert F.shift == K.dimension
    assert rep.warnings == []


def test_point_duality_is_a_tensor_a():
    K = complex_("point")
    F = build_duality(chi_for("point", 6), default_fundamental_class(K))
    assert F.element == {((0, 0), 0): ONE}


def test_circle_lowest_component_pairs_homology():
    K = complex_("circle")
    F = build_duality(chi_for("circle", 4), default_fundamental_class(K))
    ranks = induced_iso_ranks(K, F.lowest, F.shift)
    assert all(r == s == t for r, s, t in ranks.values())
    assert ranks[0][0] == 1 and ranks[1][0] == 1


def test_non_cycle_rejected():
    K = complex_("circle")
    with pytest.raises(ValueError):
        build_duality(chi_for("circle", 4), {K.index["sigma"]: ONE})


@given(st.integers(0, 10 ** 6))
def test_corrupted_duality_fails_symmetry(seed):
    K = complex_("circle")
    D = coalgebra("circle", 4)
    F = build_duality(chi_for("circle", 4), default_fundamental_class(K))
    rng = random.Random(seed)
    key = rng.choice(sorted(F.element))
    F.element = dict(F.element)
    add_into(F.element, key, Q(rng.choice([-2, -1, 1, 3])))
    rep = verify_duality(F, D)
    assert not rep.checks["symmetric"]["pass"]
    assert not rep.ok


def test_overflow_warning():
    K = complex_("circle")
    D = coalgebra("circle", 3)
    chi = construct_chi(K, D, max_degree=4)
    rep = verify_duality(build_duality(chi, default_fundamental_class(K)), D)
    assert any("truncation-overflow" in w for w in rep.warnings)
    assert chi.dropped.count > 0


def test_symmetrized_sphere_duality():
    K = complex_("sphere")
    D = coalgebra("sphere", 4, "symmetrized")
    F = build_duality(construct_chi(K, D), default_fundamental_class(K))
    assert verify_duality(F, D).ok
