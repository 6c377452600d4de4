import pytest
import sympy
from hypothesis import given, strategies as st

from localduality._rational import Q, HALF, add_into
from localduality.lie import (is_lyndon, lyndon_words, standard_factorization, FreeLie,
                              construct_local_lie, verify_lie_square_zero, lie_locality,
                              bernoulli_numbers, bernoulli_report, is_lie_element)
from conftest import complex_


def witt(k, n):
    return sum(sympy.mobius(d) * k ** (n // d) for d in sympy.divisors(n)) // n


@pytest.mark.parametrize("k,n", [(2, 1), (2, 4), (2, 6), (3, 3), (3, 5)])
def test_lyndon_counts_match_witt(k, n):
    words = list(lyndon_words(list(range(k)), n))
    assert len(words) == witt(k, n)
    assert all(is_lyndon(w) for w in words)


@given(st.lists(st.integers(0, 2), min_size=2, max_size=7))
def test_standard_factorization(w):
    w = tuple(w)
    if not is_lyndon(w):
        return
    u, v = standard_factorization(w)
    assert u + v == w and is_lyndon(u) and is_lyndon(v) and u < v


def elements(L, n_cells):
    gen = st.lists(st.integers(0, n_cells - 1), min_size=1, max_size=2)
    return gen.map(lambda cs: _right_normed(L, cs))


def _right_normed(L, cs):
    cur = L.generator(cs[-1])
    for c in reversed(cs[:-1]):
        cur = L.bracket(L.generator(c), cur)
    return cur


def homogeneous_degree(L, x):
    degs = {L.word_degree(w) for w in x}
    return degs.pop() if len(degs) == 1 else None


K_circle = complex_("circle")
L_circle = FreeLie(K_circle)


@given(elements(L_circle, 4), elements(L_circle, 4), elements(L_circle, 4))
def test_graded_antisymmetry_and_jacobi(x, y, z):
    L = L_circle
    dx, dy, dz = (homogeneous_degree(L, e) for e in (x, y, z))
    if None in (dx, dy, dz):
        return
    xy, yx = L.bracket(x, y), L.bracket(y, x)
    s = -1 if (dx * dy) % 2 == 0 else 1
    assert xy == {w: s * v for w, v in yx.items()}
    # graded Jacobi: (-1)^{|x||z|}[x,[y,z]] + cyclic = 0
    total = {}
    for (a, da), (b, db), (c, dc) in [((x, dx), (y, dy), (z, dz)), ((y, dy), (z, dz), (x, dx)),
                                      ((z, dz), (x, dx), (y, dy))]:
        sign = -1 if (da * dc) % 2 else 1
        for w, v in L.bracket(a, L.bracket(b, c)).items():
            add_into(total, w, sign * v)
    assert total == {}


def test_odd_square_is_in_the_basis():
    K = complex_("interval")
    L = FreeLie(K)
    a = K.index["a"]
    sq = L.bracket(L.generator(a), L.generator(a))
    assert sq
    assert is_lie_element(construct_local_lie(K, 2), sq, [a], 2)


@pytest.fixture(scope="module")
def interval_lie():
    return construct_local_lie(complex_("interval"), 6)


def test_interval_lie_square_zero_and_local(interval_lie):
    assert verify_lie_square_zero(interval_lie) == {}
    assert lie_locality(interval_lie)


def test_vertex_identity(interval_lie):
    S = interval_lie
    L = S.algebra
    for v in ("a", "b"):
        c = S.K.index[v]
        half_sq = {w: HALF * x for w, x in L.bracket(L.generator(c), L.generator(c)).items()}
        total = dict(S.component(2, c))
        for w, x in half_sq.items():
            add_into(total, w, x)
        assert total == {}
        assert not S.component(1, c)


def test_components_are_lie_elements(interval_lie):
    S = interval_lie
    e = S.K.index["sigma"]
    gens = S.K.closure_indices(e)
    for k in range(1, 7):
        val = S.component(k, e)
        if val:
            assert is_lie_element(S, val, gens, k)


def test_bernoulli_numbers_against_sympy():
    B = bernoulli_numbers(12)
    assert B[1] == Q(-1, 2)
    for n in range(13):
        if n != 1:
            ref = sympy.bernoulli(n)
            assert B[n] == Q(int(ref.p), int(ref.q))


def test_bernoulli_report_has_both_columns(interval_lie):
    rep = bernoulli_report(interval_lie)
    d = rep.as_dict()
    assert len(d["rows"]) == 6
    assert {"alpha", "beta", "pred_alpha", "pred_beta"} <= set(d["rows"][0])
    assert d["square_zero"] is True
    assert "B_1 = -1/2" in rep.text()


def test_circle_lie_model():
    S = construct_local_lie(complex_("circle"), 4)
    assert verify_lie_square_zero(S) == {} and lie_locality(S)
