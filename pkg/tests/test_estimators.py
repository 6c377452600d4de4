import random

import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from localduality import (LocalCoalgebra, DualityStructure, CobimoduleDecomposition,
                          LocalLieModel, HochschildBV, InputError)
from localduality._rational import ONE
from localduality.minimal_model import random_cobimodule
from conftest import coalgebra


def test_params_round_trip_and_clone():
    est = DualityStructure(truncation=4, mode="sparse")
    assert est.get_params()["truncation"] == 4
    est.set_params(coproduct="symmetrized")
    twin = clone(est)
    assert twin.get_params() == est.get_params() and twin is not est


@pytest.mark.parametrize("cls", [LocalCoalgebra, DualityStructure, LocalLieModel, HochschildBV])
def test_transform_before_fit(cls):
    with pytest.raises(NotFittedError):
        cls().transform([{}])


def test_local_coalgebra_transform():
    est = LocalCoalgebra(truncation=3).fit("interval")
    assert est.square_zero_ and est.trace_
    (img,) = est.transform([{"sigma": 1}])
    # the linear part of D is minus the boundary
    assert img[("a",)] == 1 and img[("b",)] == -1


def test_duality_on_circle():
    est = DualityStructure(truncation=4, max_tensor_degree=3).fit("circle")
    assert est.report_.ok
    (img,) = est.transform([{"a": 1}])
    assert img


def test_bad_hyperparameters():
    with pytest.raises(InputError):
        LocalCoalgebra(truncation=1).fit("point")
    with pytest.raises(InputError):
        LocalCoalgebra(coproduct="cubical").fit("point")
    with pytest.raises(InputError):
        DualityStructure(mode="dense").fit("point")
    with pytest.raises(InputError):
        LocalCoalgebra().fit("no-such-file.json")


def test_decomposition_estimator():
    M = random_cobimodule(coalgebra("interval", 4), random.Random(3), 2)
    est = CobimoduleDecomposition().fit(M)
    assert all(est.checks_.values())
    assert est.minimal_dim_ == len(est.decomposition_.p_index)
    assert est.transform([{}]) == [{}]
    with pytest.raises(InputError):
        CobimoduleDecomposition().fit("interval")


def test_lie_model_estimator():
    est = LocalLieModel(truncation=5).fit("interval")
    assert est.square_zero_
    rep = est.bernoulli()
    assert rep.shape_ok and all(r["match"] for r in rep.rows)


def test_hochschild_estimator_on_point():
    est = HochschildBV(arity_max=3, samples=3).fit("point")
    assert est.report_.ok and est.counit_defects_ == []
    assert est.transform([{(0,): ONE}]) == [{}]
