"""Minimal models of A-infinity cobimodules and inverses of quasi-isomorphisms.

A cobimodule ``M`` over an A-infinity coalgebra ``(C, D)`` is stored by the
values of its differential on the basis of ``M``: ``comps[m]`` is a sparse
dict of words ``(left, m', right)`` with ``left``/``right`` tuples of cells.
The differential acts on ``B^M C`` as a derivation over ``D``.  Cobimodule
maps act at the module slot only and have degree zero, so they carry no
signs.

Everything is truncated at ``N`` coalgebra letters; words with more letters
form a subcomplex, so the truncation is a quotient and all identities are
checked exactly below it.
"""
import itertools
from dataclasses import dataclass, field

from ._rational import Q, ZERO, ONE, add_into
from .exact_linalg import (RationalMatrix, hodge_split, inverse, canonical_solve_sparse,
                           NoSolution, homology_of_complex, image_basis_sparse, span_rank)


class DecompositionError(ArithmeticError):
    pass


def _letters(word):
    return len(word[0]) + len(word[2])


@dataclass
class Cobimodule:
    """``D^M`` given on generators; ``degrees[m]`` is the degree of basis element ``m``."""
    D: object
    degrees: list
    comps: dict
    truncation: int

    @property
    def dim(self):
        return len(self.degrees)

    def parity(self, m):
        return self.degrees[m] % 2

    def component(self, m, i, j):
        return {w: v for w, v in self.comps.get(m, {}).items()
                if len(w[0]) == i and len(w[2]) == j}

    def linear_part(self):
        """Matrix of ``D^M_{0,0}`` on ``M``."""
        ent = {}
        for m, img in self.comps.items():
            for (l, m2, r), v in img.items():
                if not l and not r:
                    ent[(m2, m)] = ent.get((m2, m), ZERO) + v
        return RationalMatrix(self.dim, self.dim, {k: v for k, v in ent.items() if v})

    def word_degree(self, word):
        l, m, r = word
        dims = self.D.K.dims
        return sum(dims[c] - 1 for c in l) + self.degrees[m] + sum(dims[c] - 1 for c in r)


def apply_differential(M, element, max_letters=None):
    """``D^M`` on ``B^M C`` with Koszul signs; drops words beyond ``max_letters``."""
    N = M.truncation if max_letters is None else max_letters
    parity = M.D.K.parity
    comps = M.D.components
    out = {}
    for (l, m, r), c in element.items():
        base = len(l) + len(r)
        sgn = 1
        for i, x in enumerate(l):
            for k, comp in comps.items():
                if base + k - 1 > N:
                    continue
                for u, v in comp.get(x, {}).items():
                    add_into(out, (l[:i] + u + l[i + 1:], m, r), c * v if sgn > 0 else -(c * v))
            if parity[x]:
                sgn = -sgn
        for (l2, m2, r2), v in M.comps.get(m, {}).items():
            if base + len(l2) + len(r2) > N:
                continue
            add_into(out, (l + l2, m2, r2 + r), c * v if sgn > 0 else -(c * v))
        if M.parity(m):
            sgn = -sgn
        for i, x in enumerate(r):
            for k, comp in comps.items():
                if base + k - 1 > N:
                    continue
                for u, v in comp.get(x, {}).items():
                    add_into(out, (l, m, r[:i] + u + r[i + 1:]), c * v if sgn > 0 else -(c * v))
            if parity[x]:
                sgn = -sgn
    return out


def square_zero_residual(M):
    bad = {}
    for m in range(M.dim):
        once = apply_differential(M, {((), m, ()): ONE})
        twice = apply_differential(M, once)
        if twice:
            bad[m] = twice
    return bad


# ---------------------------------------------------------------------------
# Cobimodule maps

@dataclass
class CobimoduleMap:
    """Degree-zero map ``B^M C -> B^M' C`` given by its values on ``M``."""
    comps: dict
    source_dim: int
    target_dim: int
    truncation: int

    def __call__(self, element, max_letters=None):
        N = self.truncation if max_letters is None else max_letters
        out = {}
        for (l, m, r), c in element.items():
            base = len(l) + len(r)
            for (l2, m2, r2), v in self.comps.get(m, {}).items():
                if base + len(l2) + len(r2) <= N:
                    add_into(out, (l + l2, m2, r2 + r), c * v)
        return out

    def component(self, m, i, j):
        return {w: v for w, v in self.comps.get(m, {}).items()
                if len(w[0]) == i and len(w[2]) == j}

    def linear_part(self):
        ent = {}
        for m, img in self.comps.items():
            for (l, m2, r), v in img.items():
                if not l and not r:
                    ent[(m2, m)] = ent.get((m2, m), ZERO) + v
        return RationalMatrix(self.target_dim, self.source_dim,
                              {k: v for k, v in ent.items() if v})

    def compose(self, other):
        """``self o other``."""
        comps = {m: self(other.comps.get(m, {})) for m in range(other.source_dim)}
        return CobimoduleMap({m: v for m, v in comps.items() if v}, other.source_dim,
                             self.target_dim, min(self.truncation, other.truncation))

    def equals(self, other):
        ms = set(self.comps) | set(other.comps)
        return all(self.comps.get(m, {}) == other.comps.get(m, {}) for m in ms)


def identity_map(dim, N):
    return CobimoduleMap({m: {((), m, ()): ONE} for m in range(dim)}, dim, dim, N)


def linear_map(A, N):
    """Map with only a ``(0,0)`` component given by the matrix ``A``."""
    comps = {}
    for (i, j), v in A.entries.items():
        comps.setdefault(j, {})[((), i, ())] = v
    return CobimoduleMap(comps, A.cols, A.rows, N)


def invert_map(F):
    """Inverse of a map with invertible linear part, by recursion on letters."""
    N = F.truncation
    L = F.linear_part()
    Linv = inverse(L)
    Linv_map = linear_map(Linv, N)
    # F = L (id + h) with h = L^{-1} (F - L) raising the letter count
    h = Linv_map.compose(F)
    for m, img in h.comps.items():
        add_into(img, ((), m, ()), -ONE)
    h = CobimoduleMap({m: v for m, v in h.comps.items() if v}, F.source_dim, F.source_dim, N)
    # (id + h)^{-1} = sum (-h)^k, finite below the truncation
    total = identity_map(F.source_dim, N)
    term = identity_map(F.source_dim, N)
    for _ in range(N):
        term = h.compose(term)
        term = CobimoduleMap({m: {w: -v for w, v in img.items()}
                              for m, img in term.comps.items()}, F.source_dim,
                             F.source_dim, N)
        if not term.comps:
            break
        for m, img in term.comps.items():
            tgt = total.comps.setdefault(m, {})
            for w, v in img.items():
                add_into(tgt, w, v)
    return total.compose(Linv_map)


def conjugate(M, phi, phi_inv=None):
    """The cobimodule ``phi D^M phi^{-1}`` on the target of ``phi``."""
    if phi_inv is None:
        phi_inv = invert_map(phi)
    comps = {}
    for m in range(phi.target_dim):
        x = phi_inv.comps.get(m, {})
        y = phi(apply_differential(M, x))
        if y:
            comps[m] = y
    degrees = [None] * phi.target_dim
    for m in range(M.dim):
        for (l, m2, r), v in phi.comps.get(m, {}).items():
            if not l and not r:
                degrees[m2] = M.degrees[m]
    if any(d is None for d in degrees):
        raise DecompositionError("target degrees not determined by the linear part")
    return Cobimodule(M.D, degrees, comps, M.truncation)


def chain_map_residual(F, Msrc, Mtgt):
    """``D' F - F D`` on generators of the source."""
    bad = {}
    for m in range(Msrc.dim):
        g = {((), m, ()): ONE}
        lhs = apply_differential(Mtgt, F(g))
        rhs = F(apply_differential(Msrc, g))
        diff = dict(lhs)
        for w, v in rhs.items():
            add_into(diff, w, -v)
        if diff:
            bad[m] = diff
    return bad


# ---------------------------------------------------------------------------
# Decomposition

@dataclass
class Decomposition:
    source: Cobimodule
    p_index: list
    x_index: list
    y_index: list
    phi: CobimoduleMap
    phi_inv: CobimoduleMap
    transformed: Cobimodule
    levels: list = field(default_factory=list)
    checks: dict = field(default_factory=dict)

    @property
    def minimal(self):
        return restrict(self.transformed, self.p_index)

    @property
    def contractible(self):
        return restrict(self.transformed, self.x_index + self.y_index)


def restrict(M, index):
    """Sub-cobimodule on the given basis elements (renumbered)."""
    pos = {m: i for i, m in enumerate(index)}
    comps = {}
    for m in index:
        img = {}
        for (l, m2, r), v in M.comps.get(m, {}).items():
            if m2 not in pos:
                raise DecompositionError("differential leaves the summand")
            img[(l, pos[m2], r)] = v
        if img:
            comps[pos[m]] = img
    return Cobimodule(M.D, [M.degrees[m] for m in index], comps, M.truncation)


def _hodge_basis(M):
    d = M.linear_part()
    split = hodge_split(d)
    T = split.change_of_basis(M.dim)
    nP, nX = len(split.p_basis), len(split.x_basis)
    idx = list(range(M.dim))
    return T, idx[:nP], idx[nP:nP + nX], idx[nP + nX:]


def _words(K, M, letters, degree):
    """All words with ``letters`` coalgebra letters and the given total degree."""
    cells = range(len(K))
    shifted = [d - 1 for d in K.dims]
    out = []
    for w in itertools.product(cells, repeat=letters):
        base = sum(shifted[x] for x in w)
        for m in range(M.dim):
            if base + M.degrees[m] != degree:
                continue
            for cut in range(letters + 1):
                out.append((w[:cut], m, w[cut:]))
    return out


def _linear_tilde(M, word):
    """``D_1`` on every letter plus ``d_0`` at the module slot."""
    parity = M.D.K.parity
    d1 = M.D.components.get(1, {})
    l, m, r = word
    out = {}
    sgn = 1
    for i, x in enumerate(l):
        for u, v in d1.get(x, {}).items():
            add_into(out, (l[:i] + u + l[i + 1:], m, r), v if sgn > 0 else -v)
        if parity[x]:
            sgn = -sgn
    for (l2, m2, r2), v in M.comps.get(m, {}).items():
        if not l2 and not r2:
            add_into(out, (l, m2, r), v if sgn > 0 else -v)
    if M.parity(m):
        sgn = -sgn
    for i, x in enumerate(r):
        for u, v in d1.get(x, {}).items():
            add_into(out, (l, m, r[:i] + u + r[i + 1:]), v if sgn > 0 else -v)
        if parity[x]:
            sgn = -sgn
    return out


def _solve_linear_tilde(M, rhs, letters, degree):
    words = _words(M.D.K, M, letters, degree)
    cols = [_linear_tilde(M, w) for w in words]
    rows = {}
    for c in cols:
        for k in c:
            rows.setdefault(k, len(rows))
    for k in rhs:
        if k not in rows:
            rows[k] = len(rows)
    A = RationalMatrix.from_columns(len(rows), [{rows[k]: v for k, v in c.items()} for c in cols])
    try:
        x = canonical_solve_sparse(A, {rows[k]: v for k, v in rhs.items()})
    except NoSolution:
        raise DecompositionError("f(p) equation has no solution")
    return {words[i]: v for i, v in x.items()}


def _level_conditions(M, P, X, Y, n):
    """Conditions after level ``n``: vanishing on X, Y and closure on P for 1..n letters."""
    Pset = set(P)
    for m in X + Y:
        if any(1 <= _letters(w) <= n for w in M.comps.get(m, {})):
            return False
    for m in P:
        if any(1 <= _letters(w) <= n and w[1] not in Pset for w in M.comps.get(m, {})):
            return False
    return True


def decompose_cobimodule(M, truncation=None):
    """Split ``M`` into a minimal part and a linear contractible part."""
    N = M.truncation if truncation is None else truncation
    if square_zero_residual(M):
        raise DecompositionError("input differential does not square to zero")
    T, P, X, Y = _hodge_basis(M)
    Tinv = inverse(T)
    phi = linear_map(Tinv, N)
    phi_inv = linear_map(T, N)
    cur = conjugate(M, phi, phi_inv)
    # in the new basis d_0 sends Y[i] to X[i]
    d0 = cur.linear_part()
    for i, (x, y) in enumerate(zip(X, Y)):
        if d0.entries.get((x, y)) != ONE:
            raise DecompositionError("Hodge basis does not pair Y with X")
    d0_inv = {x: y for x, y in zip(X, Y)}
    Pset = set(P)
    levels = [cur]
    for n in range(0, N):
        k = n + 1
        f = {}
        for x in X:
            y = d0_inv[x]
            val = {w: -v for w, v in cur.comps.get(y, {}).items() if _letters(w) == k}
            if val:
                f[x] = val
        for p in P:
            top = {w: v for w, v in cur.comps.get(p, {}).items()
                   if _letters(w) == k and w[1] not in Pset}
            if top:
                sol = _solve_linear_tilde(cur, top, k, cur.degrees[p])
                if sol:
                    f[p] = sol
        if not f:
            levels.append(cur)
            continue
        F = identity_map(cur.dim, N)
        for m, val in f.items():
            for w, v in val.items():
                add_into(F.comps[m], w, v)
        F_inv = invert_map(F)
        cur = conjugate(cur, F, F_inv)
        phi = F.compose(phi)
        phi_inv = phi_inv.compose(F_inv)
        if not _level_conditions(cur, P, X, Y, k):
            raise DecompositionError("level %d conditions fail" % k)
        levels.append(cur)
    dec = Decomposition(M, P, X, Y, phi, phi_inv, cur, levels)
    dec.checks = validate_decomposition(dec)
    return dec


def validate_decomposition(dec):
    cur = dec.transformed
    P, X, Y = dec.p_index, dec.x_index, dec.y_index
    checks = {}
    minimal = restrict(cur, P)
    checks["minimal_linear_zero"] = minimal.linear_part().is_zero()
    contr = restrict(cur, X + Y)
    only_linear = all(_letters(w) == 0 for m in contr.comps for w in contr.comps[m])
    d = contr.linear_part()
    acyclic = (2 * (span_rank(d.col_dicts()) if d.cols else 0) == contr.dim)
    checks["contractible_linear_only"] = only_linear
    checks["contractible_acyclic"] = acyclic
    checks["square_zero"] = not square_zero_residual(cur)
    # phi intertwines the given and the split differential
    checks["intertwines"] = not chain_map_residual(dec.phi, dec.source, cur)
    checks["phi_invertible"] = (dec.phi.compose(dec.phi_inv).equals(identity_map(cur.dim, cur.truncation))
                                and dec.phi_inv.compose(dec.phi).equals(
                                    identity_map(cur.dim, cur.truncation)))
    checks["recompose"] = _recomposes(dec)
    checks["compatible_levels"] = _levels_compatible(dec.levels)
    return checks


def _recomposes(dec):
    """``phi^{-1} (D^P + D^N) phi == D^M`` below the truncation."""
    back = conjugate(dec.transformed, dec.phi_inv, dec.phi)
    ms = set(back.comps) | set(dec.source.comps)
    return all(back.comps.get(m, {}) == dec.source.comps.get(m, {}) for m in ms)


def _levels_compatible(levels):
    for a in range(len(levels)):
        for b in range(a + 1, len(levels)):
            La, Lb = levels[a], levels[b]
            for m in range(La.dim):
                wa = {w: v for w, v in La.comps.get(m, {}).items() if _letters(w) <= a}
                wb = {w: v for w, v in Lb.comps.get(m, {}).items() if _letters(w) <= a}
                if wa != wb:
                    return False
    return True


# ---------------------------------------------------------------------------
# Quasi-inverses

def quasi_inverse(F, Msrc, Mtgt):
    """A cobimodule map ``G : B^M' C -> B^M C`` inverting ``F`` on homology."""
    N = min(F.truncation, Msrc.truncation, Mtgt.truncation)
    d1 = decompose_cobimodule(Msrc, N)
    d2 = decompose_cobimodule(Mtgt, N)
    P1, P2 = d1.p_index, d2.p_index
    if len(P1) != len(P2):
        raise DecompositionError("F is not a quasi-isomorphism: homology dimensions differ")
    incl1 = CobimoduleMap({i: {((), p, ()): ONE} for i, p in enumerate(P1)}, len(P1),
                          Msrc.dim, N)
    pos2 = {p: i for i, p in enumerate(P2)}
    pr2 = CobimoduleMap({p: {((), i, ()): ONE} for p, i in pos2.items()}, Mtgt.dim,
                        len(P2), N)
    Phi = pr2.compose(d2.phi.compose(F.compose(d1.phi_inv.compose(incl1))))
    try:
        rho = invert_map(Phi)
    except NoSolution:
        raise DecompositionError("F_{0,0} does not induce an isomorphism on homology")
    pr1 = CobimoduleMap({i: {((), i, ()): ONE} for i in range(len(P1))}, len(P1), len(P1), N)
    incl_p1 = CobimoduleMap({i: {((), p, ()): ONE} for i, p in enumerate(P1)}, len(P1),
                            Msrc.dim, N)
    G = d1.phi_inv.compose(incl_p1.compose(pr1.compose(rho.compose(pr2.compose(d2.phi)))))
    return G


def truncated_homology(M):
    """Homology of the quotient of ``B^M C`` by words with more than ``N`` letters."""
    K = M.D.K
    N = M.truncation
    by_deg = {}
    for n in range(N + 1):
        for w in itertools.product(range(len(K)), repeat=n):
            for m in range(M.dim):
                for cut in range(n + 1):
                    word = (w[:cut], m, w[cut:])
                    by_deg.setdefault(M.word_degree(word), []).append(word)
    index = {d: {w: i for i, w in enumerate(ws)} for d, ws in by_deg.items()}
    diffs = {}
    for deg, ws in by_deg.items():
        if deg - 1 not in by_deg:
            continue
        tgt = index[deg - 1]
        cols = []
        for w in ws:
            img = apply_differential(M, {w: ONE})
            cols.append({tgt[k]: v for k, v in img.items()})
        diffs[deg] = RationalMatrix.from_columns(len(by_deg[deg - 1]), cols)
    dims = {d: len(ws) for d, ws in by_deg.items()}
    return by_deg, index, diffs, homology_of_complex(diffs, dims)


def induces_identity(H, Msrc, maps):
    """Whether ``maps`` (a composite chain map of ``M``) is the identity on homology."""
    by_deg, index, diffs, hom = H
    for deg, dh in hom.degrees.items():
        if dh.betti == 0:
            continue
        bnd = image_basis_sparse(diffs[deg + 1]) if deg + 1 in diffs else []
        base = span_rank(bnd)
        for h in dh.harmonic_basis:
            el = {by_deg[deg][i]: v for i, v in h.items()}
            img = maps(el)
            diff = dict(img)
            for k, v in el.items():
                add_into(diff, k, -v)
            vec = {}
            for k, v in diff.items():
                if k not in index[deg]:
                    return False
                vec[index[deg][k]] = v
            if vec and span_rank(bnd + [vec]) != base:
                return False
    return True


# ---------------------------------------------------------------------------
# Random generators

def cobimodule_from_coalgebra(D, N):
    """``C`` as a cobimodule over itself: the marked letter runs over each output.

    Words with ``N`` coalgebra letters use ``D_{N+1}``, so ``D`` must be
    truncated at ``N + 1`` or later.
    """
    if D.truncation < N + 1:
        raise ValueError("coalgebra truncation must be at least N + 1")
    K = D.K
    comps = {}
    for c in range(len(K)):
        img = {}
        for k, comp in D.components.items():
            if k - 1 > N:
                continue
            for w, v in comp.get(c, {}).items():
                for t in range(k):
                    add_into(img, (w[:t], w[t], w[t + 1:]), v)
        if img:
            comps[c] = img
    return Cobimodule(D, [d - 1 for d in K.dims], comps, N)


def direct_sum(*mods):
    D = mods[0].D
    N = min(m.truncation for m in mods)
    degrees = []
    comps = {}
    off = 0
    for M in mods:
        for m, img in M.comps.items():
            comps[m + off] = {(l, m2 + off, r): v for (l, m2, r), v in img.items()}
        degrees.extend(M.degrees)
        off += M.dim
    return Cobimodule(D, degrees, comps, N)


def trivial_module(D, degrees, N):
    return Cobimodule(D, list(degrees), {}, N)


def contractible_pair(D, top_degree, N):
    """``Q -> Q`` with the identity as differential, no higher components."""
    return Cobimodule(D, [top_degree, top_degree - 1], {0: {((), 1, ()): ONE}}, N)


def random_isomorphism(M, rng, density=2, max_coeff=2):
    """Random degree-zero unitriangular automorphism of ``B^M C``."""
    N = M.truncation
    K = M.D.K
    comps = {}
    by_deg = {}
    for m, d in enumerate(M.degrees):
        by_deg.setdefault(d, []).append(m)
    for d, ms in by_deg.items():
        order = list(ms)
        rng.shuffle(order)
        for a, m in enumerate(order):
            img = {((), m, ()): ONE}
            for m2 in order[a + 1:]:
                v = rng.randint(-max_coeff, max_coeff)
                if v:
                    img[((), m2, ())] = Q(v)
            comps[m] = img
    for m in range(M.dim):
        for n in range(1, N + 1):
            words = [w for w in _words(K, M, n, M.degrees[m])]
            if not words:
                continue
            for w in rng.sample(words, min(density, len(words))):
                v = rng.randint(-max_coeff, max_coeff)
                if v:
                    add_into(comps[m], w, Q(v))
    return CobimoduleMap(comps, M.dim, M.dim, N)


def random_base(D, rng, N, max_dim=4, allow_coalgebra=True):
    parts = []
    counts = {}

    def room(deg, k=1):
        return counts.get(deg, 0) + k <= max_dim

    def take(deg):
        counts[deg] = counts.get(deg, 0) + 1

    if allow_coalgebra and rng.random() < 0.4:
        C = cobimodule_from_coalgebra(D, N)
        if all(room(d) for d in set(C.degrees)) and \
                all(sum(1 for x in C.degrees if x == d) <= max_dim for d in set(C.degrees)):
            parts.append(C)
            for d in C.degrees:
                take(d)
    for _ in range(rng.randint(0, 2)):
        d = rng.randint(-1, 1)
        if room(d):
            parts.append(trivial_module(D, [d], N))
            take(d)
    for _ in range(rng.randint(0, 2)):
        d = rng.randint(0, 1)
        if room(d) and room(d - 1):
            parts.append(contractible_pair(D, d, N))
            take(d)
            take(d - 1)
    if not parts:
        parts.append(trivial_module(D, [0], N))
    return direct_sum(*parts)


def random_cobimodule(D, rng, N, max_dim=4):
    base = random_base(D, rng, N, max_dim)
    phi = random_isomorphism(base, rng)
    return conjugate(base, phi)


def random_quasi_isomorphism(D, rng, N, max_dim=4):
    """``(M, M', F)`` with ``F`` the identity on a common summand, conjugated."""
    B = random_base(D, rng, N, max_dim=max_dim - 2)
    A1 = contractible_pair(D, rng.randint(0, 1), N)
    A2 = contractible_pair(D, rng.randint(0, 1), N)
    M0 = direct_sum(B, A1)
    M1 = direct_sum(B, A2)
    comps = {m: {((), m, ()): ONE} for m in range(B.dim)}
    F0 = CobimoduleMap(comps, M0.dim, M1.dim, N)
    c1 = random_isomorphism(M0, rng)
    c2 = random_isomorphism(M1, rng)
    c1_inv = invert_map(c1)
    Msrc = conjugate(M0, c1, c1_inv)
    Mtgt = conjugate(M1, c2)
    F = c2.compose(F0.compose(c1_inv))
    return Msrc, Mtgt, F
