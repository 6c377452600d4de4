import json

import pytest

from localduality.validation import (InputError, FIXTURES, fixture_path, check_complex,
                                     check_truncation, check_coproduct, check_chain, parse_mu,
                                     parse_window)


@pytest.mark.parametrize("name", FIXTURES)
def test_fixture_names_and_paths(name):
    assert check_complex(name).name
    assert check_complex(fixture_path(name)).name == check_complex(name).name


def test_json_string_and_document():
    doc = {"simplices": [["x", "y"]]}
    assert len(check_complex(doc)) == 3
    assert len(check_complex(json.dumps(doc))) == 3


@pytest.mark.parametrize("bad", ["missing.json", '{"simplices": 3}', {"simplices": [["a", "a"]]}])
def test_bad_complexes(bad):
    with pytest.raises(InputError):
        check_complex(bad)


def test_unknown_fixture():
    with pytest.raises(InputError):
        fixture_path("klein")


@pytest.mark.parametrize("N", [0, 1, True, 2.5, "3"])
def test_bad_truncation(N):
    with pytest.raises(InputError):
        check_truncation(N)


def test_truncation_and_coproduct_ok():
    assert check_truncation(2) == 2
    assert check_coproduct("symmetrized") == "symmetrized"
    with pytest.raises(InputError):
        check_coproduct("diagonal")


def test_mu_parsing():
    K = check_complex("circle")
    mu = parse_mu(K, "sigma=1, tau=1/1")
    assert mu == check_chain(K, {"sigma": 1, "tau": 1})
    assert parse_mu(K, None) is None
    for bad in ["sigma", "omega=1", "sigma=x", "sigma=1/0", ","]:
        with pytest.raises(InputError):
            parse_mu(K, bad)
    with pytest.raises(InputError):
        check_chain(K, {"omega": 1})


def test_window_parsing():
    assert parse_window("-2:2") == (-2, 2)
    assert parse_window((0, 1)) == (0, 1)
    assert parse_window(None) == (-2, 2)
    for bad in ["3", "a:b", "2:1"]:
        with pytest.raises(InputError):
            parse_window(bad)
