"""Local A-infinity structures on free graded Lie algebras of cells.

Generators are the cells, in degree ``dim - 1``.  Lie elements are stored by
their image in the tensor algebra, ``{word: mpq}``, with the graded
commutator ``[x, y] = xy - (-1)^{|x||y|} yx``.  Normal forms and the inner
product come from the Lyndon basis: standard bracketings of Lyndon words,
plus the squares ``[w, w]`` of odd Lyndon words, which are nonzero in the
graded setting.

The construction mirrors the coalgebra one: ``delta_1`` is the boundary,
``delta_2`` comes from the diagonal, and each higher ``delta_k`` on a cell is
the minimal-norm solution of ``[delta_1, rho] = -error`` in the free Lie
algebra of the cell's closure.
"""
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial

from ._rational import Q, ONE, HALF, ZERO, add_into, fmt_q
from .exact_linalg import (RationalMatrix, CoordinateSystem, canonical_solve_sparse,
                           NoSolution)
from .simplicial import aw_coproduct
from .tensor import NotExact


# ---------------------------------------------------------------------------
# Lyndon words

def is_lyndon(w):
    n = len(w)
    if n == 0:
        return False
    return all(w < w[i:] + w[:i] for i in range(1, n))


def lyndon_words(alphabet, n):
    """Lyndon words of length ``n`` over the sorted ``alphabet`` (Duval)."""
    alphabet = sorted(alphabet)
    k = len(alphabet)
    if k == 0:
        return []
    out = []
    w = [-1]
    while w:
        w[-1] += 1
        m = len(w)
        if m == n:
            out.append(tuple(alphabet[i] for i in w))
        while len(w) < n:
            w.append(w[len(w) - m])
        while w and w[-1] == k - 1:
            w.pop()
    return out


def standard_factorization(w):
    """``w = u v`` with ``v`` the longest proper Lyndon suffix."""
    for i in range(1, len(w)):
        if is_lyndon(w[i:]):
            return w[:i], w[i:]
    raise ValueError("word of length one has no factorization")


class FreeLie:
    """Arithmetic in the free graded Lie algebra on cells of a complex."""

    def __init__(self, K):
        self.K = K
        self.degree = [d - 1 for d in K.dims]
        self._basis = {}
        self._coords = {}

    def word_degree(self, w):
        return sum(self.degree[x] for x in w)

    def generator(self, c):
        return {(c,): ONE}

    def bracket(self, x, y):
        out = {}
        deg = self.word_degree
        for u, a in x.items():
            du = deg(u)
            for v, b in y.items():
                ab = a * b
                add_into(out, u + v, ab)
                if (du * deg(v)) % 2:
                    add_into(out, v + u, ab)
                else:
                    add_into(out, v + u, -ab)
        return out

    def ad_power(self, e, x, i):
        """``ad_e^i (x)`` as a right-normed bracket."""
        cur = x
        for _ in range(i):
            cur = self.bracket(e, cur)
        return cur

    def bracketing(self, w):
        """Standard bracketing of a Lyndon word."""
        return dict(self._bracketing(tuple(w)))

    @lru_cache(maxsize=None)
    def _bracketing_cached(self, w):
        if len(w) == 1:
            return ((w, ONE),)
        u, v = standard_factorization(w)
        return tuple(self.bracket(self.bracketing(u), self.bracketing(v)).items())

    def _bracketing(self, w):
        return self._bracketing_cached(w)

    def basis(self, generators, n):
        """Lyndon basis of bracket length ``n`` on the given generators.

        Returns ``[(label, expansion)]``; labels are Lyndon words or
        ``("sq", w)`` for squares of odd Lyndon words.
        """
        key = (tuple(sorted(generators)), n)
        got = self._basis.get(key)
        if got is None:
            got = [(w, self.bracketing(w)) for w in lyndon_words(generators, n)]
            if n % 2 == 0:
                for w in lyndon_words(generators, n // 2):
                    if self.word_degree(w) % 2:
                        b = self.bracketing(w)
                        got.append((("sq", w), self.bracket(b, b)))
            self._basis[key] = got
        return got

    def coordinates(self, generators, n, x):
        key = (tuple(sorted(generators)), n)
        cs = self._coords.get(key)
        if cs is None:
            cs = self._coords[key] = CoordinateSystem([e for _, e in self.basis(generators, n)])
        return cs.coordinates(x)

    def spanning_brackets(self, generators, n):
        """All right-normed brackets of length ``n``; they span ``L_n``."""
        out = []
        for w in itertools.product(sorted(generators), repeat=n):
            cur = self.generator(w[-1])
            for c in reversed(w[:-1]):
                cur = self.bracket(self.generator(c), cur)
            if cur:
                out.append(cur)
        return out

    def apply_derivation(self, delta, x, lengths=None):
        """Extend ``delta`` (generator -> Lie element, odd) as a derivation."""
        out = {}
        deg = self.degree
        for w, c in x.items():
            sgn = 1
            for i, g in enumerate(w):
                for k, img in delta.items():
                    if lengths is not None and k not in lengths:
                        continue
                    val = img.get(g)
                    if not val:
                        continue
                    head, tail = w[:i], w[i + 1:]
                    for u, v in val.items():
                        add_into(out, head + u + tail, c * v if sgn > 0 else -(c * v))
                if deg[g] % 2:
                    sgn = -sgn
        return out


def lie_diagonal(K):
    """``delta_2(c) = -1/2 sum (-1)^{dim x} [x, y]`` over diagonal terms ``x (x) y``."""
    L = FreeLie(K)
    aw = aw_coproduct(K)
    out = {}
    for c, terms in aw.items():
        val = {}
        for (x, y), v in terms.items():
            s = -v * HALF if K.dims[x] % 2 == 0 else v * HALF
            for w, u in L.bracket(L.generator(x), L.generator(y)).items():
                add_into(val, w, s * u)
        if val:
            out[c] = val
    return out


@dataclass
class LieStructure:
    K: object
    algebra: FreeLie
    components: dict
    truncation: int
    trace: list = field(default_factory=list)

    def component(self, k, cell):
        return self.components.get(k, {}).get(cell, {})


def _square_error(L, delta, cell, k):
    """Length-``k`` part of ``delta o delta`` on ``cell`` (all known components)."""
    out = {}
    for j in range(1, k + 1):
        i = k - j + 1
        inner = delta.get(j, {}).get(cell)
        if not inner or i not in delta:
            continue
        for w, v in L.apply_derivation({i: delta[i]}, inner).items():
            add_into(out, w, v)
    return out


def construct_local_lie(K, truncation=6):
    """Components ``delta_1 .. delta_N`` with ``[delta, delta] = 0`` up to length ``N``."""
    L = FreeLie(K)
    delta = {1: {c: {(f,): v for f, v in K.boundary(c).items()} for c in range(len(K))
                 if K.boundary(c)},
             2: lie_diagonal(K)}
    for c in range(len(K)):
        if _square_error(L, delta, c, 2):
            raise NotExact("boundary and diagonal do not commute on %s" % K.cells[c].id)
    order = sorted(range(len(K)), key=lambda c: (K.dims[c], c))
    trace = []
    for k in range(3, truncation + 1):
        delta[k] = {}
        for c in order:
            err = _square_error(L, delta, c, k)
            if not err:
                continue
            if K.dims[c] == 0:
                raise NotExact("error term does not vanish on vertex %s" % K.cells[c].id)
            gens = K.closure_indices(c)
            basis = L.basis(gens, k)
            cols = []
            for _, e in basis:
                img = L.apply_derivation({1: delta[1]}, e)
                cols.append(L.coordinates(gens, k, img) if img else {})
            A = RationalMatrix.from_columns(len(basis), cols)
            rhs = {i: -v for i, v in L.coordinates(gens, k, err).items()}
            try:
                x = canonical_solve_sparse(A, rhs)
            except NoSolution:
                raise NotExact("Lie error term is not exact on %s" % K.cells[c].id)
            rho = {}
            for i, v in x.items():
                for w, u in basis[i][1].items():
                    add_into(rho, w, v * u)
            if rho:
                delta[k][c] = rho
            trace.append({"length": k, "cell": K.cells[c].id, "basis": len(basis),
                          "terms": len(x)})
    return LieStructure(K, L, delta, truncation, trace)


def verify_lie_square_zero(S, truncation=None):
    """Residuals of ``delta o delta`` by output length; empty dict means zero."""
    N = S.truncation if truncation is None else truncation
    bad = {}
    for c in range(len(S.K)):
        for k in range(1, N + 1):
            r = _square_error(S.algebra, S.components, c, k)
            if r:
                bad[(k, c)] = r
    return bad


def lie_locality(S):
    for comp in S.components.values():
        for c, val in comp.items():
            cl = set(S.K.closure_indices(c))
            if any(g not in cl for w in val for g in w):
                return False
    return True


def is_lie_element(S, x, generators, n):
    try:
        S.algebra.coordinates(generators, n, x)
        return True
    except NoSolution:
        return False


# ---------------------------------------------------------------------------
# Bernoulli comparison

def bernoulli_numbers(n):
    """``B_0 .. B_n`` with ``B_1 = -1/2``."""
    B = [Fraction(1)]
    for m in range(1, n + 1):
        s = sum(Fraction(factorial(m + 1), factorial(k) * factorial(m + 1 - k)) * B[k]
                for k in range(m))
        B.append(-s / (m + 1))
    return [Q(b.numerator, b.denominator) for b in B]


@dataclass
class BernoulliReport:
    rows: list
    square_zero: bool
    shape_ok: bool
    header: str = ("CONJECTURE-CHECK: coefficients of ad_e^i(a) and ad_e^i(b) in the "
                   "canonical delta(e) on the interval, against B_i/i! with B_1 = -1/2")

    def as_dict(self):
        return {"header": self.header, "square_zero": self.square_zero,
                "shape_ok": self.shape_ok,
                "rows": [{k: (fmt_q(v) if not isinstance(v, (int, bool, str)) else v)
                          for k, v in r.items()} for r in self.rows]}

    def text(self):
        lines = [self.header,
                 "%3s  %12s  %12s  %12s  %12s  %6s" % ("i", "alpha_i", "pred(a)",
                                                      "beta_i", "pred(b)", "match")]
        for r in self.rows:
            lines.append("%3d  %12s  %12s  %12s  %12s  %6s" % (
                r["i"], fmt_q(r["alpha"]), fmt_q(r["pred_alpha"]), fmt_q(r["beta"]),
                fmt_q(r["pred_beta"]), "yes" if r["match"] else "no"))
        lines.append("square-zero: %s" % ("exact" if self.square_zero else "FAILED"))
        return "\n".join(lines)


def bernoulli_report(S, edge="sigma", start="a", end="b"):
    """Decompose ``delta(e)`` along ``ad_e^i a`` and ``ad_e^i b`` per length."""
    K = S.K
    L = S.algebra
    e, a, b = K.index[edge], K.index[start], K.index[end]
    B = bernoulli_numbers(S.truncation)
    rows = []
    shape_ok = True
    for i in range(0, S.truncation):
        val = S.component(i + 1, e)
        va = L.ad_power(L.generator(e), L.generator(a), i)
        vb = L.ad_power(L.generator(e), L.generator(b), i)
        vecs = [v for v in (va, vb)]
        alpha = beta = ZERO
        if val:
            idx = [n for n, v in enumerate(vecs) if v]
            try:
                cs = CoordinateSystem([vecs[n] for n in idx])
                co = cs.coordinates(val)
                for pos, n in enumerate(idx):
                    if n == 0:
                        alpha = co.get(pos, ZERO)
                    else:
                        beta = co.get(pos, ZERO)
            except NoSolution:
                shape_ok = False
        pred_b = B[i] / factorial(i) + (1 if i == 1 else 0)
        pred_a = -B[i] / factorial(i)
        rows.append({"i": i, "alpha": alpha, "beta": beta, "pred_alpha": pred_a,
                     "pred_beta": pred_b, "match": alpha == pred_a and beta == pred_b})
    return BernoulliReport(rows, not verify_lie_square_zero(S), shape_ok)
