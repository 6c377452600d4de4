"""Input checks shared by the estimators and the command line."""
import os
from importlib import resources

from ._rational import as_q
from .ainfty import COPRODUCTS
from .simplicial import SimplicialComplex, ComplexError, load_complex, chain_element


class InputError(ValueError):
    """Raised for malformed user input (bad files, flags or parameters)."""


FIXTURES = ("point", "interval", "circle", "sphere", "torus")


def fixture_path(name):
    """Path of a shipped fixture by name."""
    if name not in FIXTURES:
        raise InputError("unknown fixture %r" % (name,))
    return str(resources.files("localduality.fixtures").joinpath(name + ".json"))


def check_complex(X):
    """Accept a complex, a path, a fixture name, a JSON string or a parsed document."""
    if isinstance(X, SimplicialComplex):
        return X
    if isinstance(X, (str, os.PathLike)) and not str(X).lstrip().startswith("{"):
        if not os.path.exists(X):
            if str(X) in FIXTURES:
                X = fixture_path(str(X))
            else:
                raise InputError("no such file: %s" % X)
    try:
        return load_complex(X)
    except ComplexError as exc:
        raise InputError(str(exc)) from exc
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise InputError("cannot read complex: %s" % exc) from exc


def check_truncation(N, minimum=2, name="truncation"):
    if isinstance(N, bool) or not isinstance(N, int):
        raise InputError("%s must be an integer, got %r" % (name, N))
    if N < minimum:
        raise InputError("%s must be at least %d, got %d" % (name, minimum, N))
    return N


def check_coproduct(mode):
    if mode not in COPRODUCTS:
        raise InputError("coproduct must be one of %s, got %r" % (", ".join(COPRODUCTS), mode))
    return mode


def check_chain(K, chain):
    """Sparse chain from ``{cell id or vertex list: coefficient}``."""
    try:
        return chain_element(K, chain)
    except (KeyError, ComplexError, ValueError, ZeroDivisionError) as exc:
        raise InputError("bad chain: %s" % exc) from exc


def parse_mu(K, text):
    """``"sigma=1,tau=1"`` (cell ids with rational coefficients) to a chain."""
    if text is None:
        return None
    terms = {}
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise InputError("mu entries look like id=coeff, got %r" % part)
        key, val = part.split("=", 1)
        key = key.strip()
        if key not in K.index:
            raise InputError("mu refers to unknown cell %r" % key)
        try:
            terms[key] = as_q(val.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError("bad coefficient %r in mu" % val) from exc
    if not terms:
        raise InputError("mu is empty")
    return check_chain(K, terms)


def parse_window(text):
    """``"lo:hi"`` to an inclusive degree range."""
    if text is None:
        return (-2, 2)
    if isinstance(text, (tuple, list)) and len(text) == 2:
        lo, hi = text
    else:
        try:
            lo, hi = (int(t) for t in str(text).split(":"))
        except ValueError as exc:
            raise InputError("window looks like lo:hi, got %r" % (text,)) from exc
    if lo > hi:
        raise InputError("empty degree window %r" % (text,))
    return (int(lo), int(hi))
