"""Exact rational scalars.

All coefficients in the package are ``gmpy2.mpq`` values.  ``Fraction`` inputs
are accepted everywhere a scalar is expected and converted on entry.
"""
from fractions import Fraction

import gmpy2

Q = gmpy2.mpq
ZERO = Q(0)
ONE = Q(1)
HALF = Q(1, 2)


def as_q(x):
    """Convert int, Fraction, mpq or a ``"p/q"`` string to ``mpq``."""
    if isinstance(x, str):
        x = x.strip()
        if "/" in x:
            p, q = x.split("/")
            return Q(int(p), int(q))
        return Q(int(x))
    if isinstance(x, Fraction):
        return Q(x.numerator, x.denominator)
    if isinstance(x, float):
        raise TypeError("floating point coefficients are not accepted")
    return Q(x)


def fmt_q(x):
    x = Q(x)
    if x.denominator == 1:
        return str(x.numerator)
    return "%d/%d" % (x.numerator, x.denominator)


def add_into(target, key, coeff):
    """``target[key] += coeff`` keeping the dict free of zeros."""
    if not coeff:
        return
    v = target.get(key)
    if v is None:
        target[key] = coeff
    else:
        v = v + coeff
        if v:
            target[key] = v
        else:
            del target[key]


def scale(vec, c):
    if not c:
        return {}
    return {k: v * c for k, v in vec.items()}


def combine(*pairs):
    """Linear combination ``sum(c * vec)`` of sparse dict vectors."""
    out = {}
    for c, vec in pairs:
        if not c:
            continue
        for k, v in vec.items():
            add_into(out, k, c * v)
    return out
