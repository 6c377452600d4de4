import random

import pytest
from hypothesis import given, strategies as st

from localduality._rational import ONE
from localduality.exact_linalg import RationalMatrix
from localduality.minimal_model import (Cobimodule, CobimoduleMap, DecompositionError,
                                        decompose_cobimodule, validate_decomposition,
                                        quasi_inverse, chain_map_residual, square_zero_residual,
                                        truncated_homology, induces_identity, identity_map,
                                        linear_map, trivial_module, contractible_pair,
                                        cobimodule_from_coalgebra, random_cobimodule,
                                        random_quasi_isomorphism, conjugate, random_isomorphism,
                                        invert_map)
from conftest import coalgebra


def D_interval():
    return coalgebra("interval", 4)


def test_already_minimal():
    M = trivial_module(D_interval(), [0, 1, 1], 3)
    dec = decompose_cobimodule(M)
    assert dec.p_index == [0, 1, 2] and not dec.x_index and not dec.y_index
    assert dec.phi.equals(identity_map(3, 3))
    assert all(validate_decomposition(dec).values())


def test_contractible_pair():
    M = contractible_pair(D_interval(), 1, 3)
    dec = decompose_cobimodule(M)
    assert dec.p_index == [] and len(dec.x_index) == len(dec.y_index) == 1
    assert all(validate_decomposition(dec).values())


def test_interval_over_itself_has_point_homology():
    D = D_interval()
    dec = decompose_cobimodule(cobimodule_from_coalgebra(D, 3), 3)
    assert len(dec.p_index) == 1
    assert dec.minimal.degrees == [-1]
    assert all(validate_decomposition(dec).values())


def test_square_zero_violation_rejected():
    D = D_interval()
    M = Cobimodule(D, [0, -1, -2], {0: {((), 1, ()): ONE}, 1: {((), 2, ()): ONE}}, 2)
    assert square_zero_residual(M)
    with pytest.raises(DecompositionError):
        decompose_cobimodule(M)


@given(st.integers(0, 10 ** 6))
def test_random_decompositions(seed):
    rng = random.Random(seed)
    D = D_interval()
    M = random_cobimodule(D, rng, rng.randint(1, 3))
    assert not square_zero_residual(M)
    dec = decompose_cobimodule(M)
    checks = validate_decomposition(dec)
    assert all(checks.values()), checks
    # the minimal part carries the homology of the linear part
    d = M.linear_part()
    from localduality.exact_linalg import rank
    assert len(dec.p_index) == M.dim - 2 * rank(d)


@given(st.integers(0, 10 ** 6))
def test_random_isomorphism_inverts(seed):
    rng = random.Random(seed)
    D = D_interval()
    M = random_cobimodule(D, rng, 2)
    phi = random_isomorphism(M, rng)
    assert phi.compose(invert_map(phi)).equals(identity_map(M.dim, 2))


def test_identity_quasi_inverse():
    D = D_interval()
    M = random_cobimodule(D, random.Random(3), 2)
    G = quasi_inverse(identity_map(M.dim, 2), M, M)
    H = truncated_homology(M)
    assert induces_identity(H, M, lambda el: G(el))
    assert not chain_map_residual(G, M, M)


def test_strict_linear_quasi_inverse():
    D = D_interval()
    M = trivial_module(D, [0, 0], 2)
    A = RationalMatrix.from_dense([[2, 1], [1, 1]])
    F = linear_map(A, 2)
    G = quasi_inverse(F, M, M)
    assert (G.linear_part() @ A) == RationalMatrix.identity(2)
    assert all(len(w[0]) + len(w[2]) == 0 for img in G.comps.values() for w in img)


@given(st.integers(0, 10 ** 6))
def test_random_quasi_inverse(seed):
    rng = random.Random(seed)
    D = D_interval()
    Ms, Mt, F = random_quasi_isomorphism(D, rng, rng.randint(1, 2))
    assert not chain_map_residual(F, Ms, Mt)
    G = quasi_inverse(F, Ms, Mt)
    assert not chain_map_residual(G, Mt, Ms)
    assert induces_identity(truncated_homology(Ms), Ms, lambda el: G(F(el)))
    assert induces_identity(truncated_homology(Mt), Mt, lambda el: F(G(el)))


def test_non_quasi_isomorphism_rejected():
    D = D_interval()
    M1 = trivial_module(D, [0], 2)
    M2 = trivial_module(D, [0, 0], 2)
    F = CobimoduleMap({0: {((), 0, ()): ONE}}, 1, 2, 2)
    with pytest.raises(DecompositionError):
        quasi_inverse(F, M1, M2)


def test_circle_duality_quasi_inverse():
    from localduality.hochschild import transported_structure
    from localduality.coinner import construct_chi, build_duality
    from localduality.simplicial import default_fundamental_class
    from conftest import complex_
    K = complex_("circle")
    D = coalgebra("circle", 5)
    F = build_duality(construct_chi(K, D, 3), default_fundamental_class(K))
    T, (Md, Mc, Fm) = transported_structure(K, D, F, 3)
    assert not chain_map_residual(Fm, Md, Mc)
    assert not chain_map_residual(T.G, Mc, Md)
    assert induces_identity(truncated_homology(Md), Md, lambda el: T.G(Fm(el)))


def test_conjugation_preserves_square_zero():
    D = D_interval()
    rng = random.Random(11)
    M = cobimodule_from_coalgebra(D, 2)
    phi = random_isomorphism(M, rng)
    M2 = conjugate(M, phi)
    assert not square_zero_residual(M2)
    assert not chain_map_residual(phi, M, M2)
