"""The eight acceptance criteria, one test each.

Each test records a single PASS/FAIL line (printed and repeated in the
terminal summary) and asserts its own runtime budget.
"""
import random

import pytest

from localduality._rational import ONE, HALF, add_into
from localduality.ainfty import construct_local_coalgebra, verify_square_zero
from localduality.coinner import (construct_chi, build_duality, verify_duality, chain_map_residual,
                                  compare_to_reference, reference_rows, translate_table,
                                  cyclic_exact)
from localduality.hochschild import transported_structure, bv_check
from localduality.lie import (construct_local_lie, verify_lie_square_zero, lie_locality,
                              bernoulli_report)
from localduality.minimal_model import (decompose_cobimodule, validate_decomposition,
                                        random_cobimodule, random_quasi_isomorphism,
                                        quasi_inverse, chain_map_residual as map_residual,
                                        square_zero_residual, truncated_homology,
                                        induces_identity)
from localduality.simplicial import default_fundamental_class
from localduality.tensor import sub_elements
from localduality.cli import run_corpus, dumps
from conftest import complex_, coalgebra


def golden(name, N):
    """Sparse chi against the reference table; fallback is exactness of the difference."""
    K = complex_(name)
    D = construct_local_coalgebra(K, N, "strict-aw")   # uncached, so the timing is honest
    chi = construct_chi(K, D, mode="sparse")
    res = compare_to_reference(chi, D, name)
    for cid, r in res.items():
        assert r["match"] or r.get("exact_difference"), (cid, r)
    return K, D, chi, res


def test_criterion_1_point_golden(criterion):
    criterion.label = "1 point: chi(a) = a(x)a, higher components zero"
    K, D, chi, res = golden("point", 6)
    assert chi.values[K.index["a"]] == {((0, 0), 0): ONE}
    assert res["a"]["match"]
    assert criterion.elapsed() < 1


def test_criterion_2_interval_golden(criterion):
    criterion.label = "2 interval: two families, N=6, termwise"
    K, D, chi, res = golden("interval", 6)
    ref = translate_table(K, reference_rows("interval", 5)["sigma"])
    assert len(ref) == 12
    assert chi.values[K.index["sigma"]] == ref
    assert criterion.elapsed() < 10


def test_criterion_3_circle_golden(criterion):
    criterion.label = "3 circle: F0 = chi(sigma) + chi(tau), four families, N=6"
    K, D, chi, res = golden("circle", 6)
    F = build_duality(chi, default_fundamental_class(K))
    rows = reference_rows("circle", 5)
    want = {}
    for cid in ("sigma", "tau"):
        for k, v in translate_table(K, rows[cid]).items():
            add_into(want, k, v)
    diff = sub_elements(F.element, want)
    assert not diff or cyclic_exact(D, diff, list(range(len(K))), 5) is not None
    assert all(r["match"] for r in res.values())
    assert criterion.elapsed() < 30


@pytest.mark.slow
@pytest.mark.parametrize("name", ["sphere", "torus"])
def test_criterion_4_structural(criterion, name):
    criterion.label = "4 %s: D^2=0, chi chain map, closed, symmetric, quasi-iso (N=4)" % name
    K = complex_(name)
    D = coalgebra(name, 4)
    assert verify_square_zero(D).ok
    chi = construct_chi(K, D)
    for c in range(len(K)):
        assert not chain_map_residual(chi, D, c)
    assert chi.locality()
    rep = verify_duality(build_duality(chi, default_fundamental_class(K)), D)
    for key in ("closed", "symmetric", "quasi-iso", "mu-cycle"):
        assert rep.checks[key]["pass"], (key, rep.checks[key])
    ranks = rep.checks["quasi-iso"]["ranks"]
    assert all(len(set(v)) == 1 for v in ranks.values())
    assert criterion.elapsed() < 300


def test_criterion_5_minimal_models(criterion):
    criterion.label = "5 minimal models: 100 decompositions, 20 quasi-inverses"
    rng = random.Random(20240501)
    D = coalgebra("interval", 4)
    for _ in range(100):
        M = random_cobimodule(D, rng, rng.randint(1, 3))
        assert not square_zero_residual(M)
        checks = validate_decomposition(decompose_cobimodule(M))
        assert all(checks.values()), checks
    for _ in range(20):
        Ms, Mt, F = random_quasi_isomorphism(D, rng, rng.randint(1, 3))
        G = quasi_inverse(F, Ms, Mt)
        assert not map_residual(G, Mt, Ms)
        assert induces_identity(truncated_homology(Ms), Ms, lambda el: G(F(el)))
    assert criterion.elapsed() < 120


@pytest.mark.slow
def test_criterion_6_circle_bv(criterion):
    criterion.label = "6 circle BV identities, arity <= 3, degrees -2..2, 20 triples"
    K = complex_("circle")
    D = coalgebra("circle", 6)
    F = build_duality(construct_chi(K, D, 4), default_fundamental_class(K))
    T, _ = transported_structure(K, D, F, 4)
    rep = bv_check(T, (-2, 2), 3, 20, 0)
    assert rep.samples >= 20
    assert rep.ok, rep.text()
    assert criterion.elapsed() < 300


def test_criterion_7_lie(criterion):
    criterion.label = "7 interval Lie model: square zero, local, vertex identity, report"
    S = construct_local_lie(complex_("interval"), 6)
    assert verify_lie_square_zero(S) == {}
    assert lie_locality(S)
    L = S.algebra
    for v in ("a", "b"):
        c = S.K.index[v]
        total = dict(S.component(2, c))
        for w, x in L.bracket(L.generator(c), L.generator(c)).items():
            add_into(total, w, HALF * x)
        assert total == {} and not S.component(1, c)
    rows = bernoulli_report(S).as_dict()["rows"]
    assert rows and all({"alpha", "beta", "pred_alpha", "pred_beta"} <= set(r) for r in rows)
    assert criterion.elapsed() < 60


@pytest.mark.slow
def test_criterion_8_determinism(criterion):
    criterion.label = "8 two corpus runs serialize byte-identically"
    first = {n: dumps(d) for n, d in run_corpus().items()}
    second = {n: dumps(d) for n, d in run_corpus().items()}
    assert first == second
    assert all('"pass": true' in s for s in first.values())
