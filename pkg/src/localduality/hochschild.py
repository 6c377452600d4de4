"""Truncated Hochschild cochains of the cochain algebra, cup product and Connes operator.

Everything is written on the chain side.  ``A`` is the dual of the
coalgebra ``C``; its operations are the transposes of the ``D_k``.

* A cochain with values in ``A`` of arity ``n`` is stored as a map
  ``C -> C^{(x)n}``, i.e. a sparse dict ``{(cell, word): coeff}``.  The
  Hochschild differential is the commutator ``[D, phi]`` of derivations of
  the tensor algebra.
* A cochain with values in ``C`` of arity ``n`` is a word of length ``n + 1``
  read cyclically; the first letter is the value slot (the mark).  The
  differential applies ``D`` at every letter, the mark following one of the
  outputs of ``D`` at the value slot.

Arity above ``arity_max`` forms a subcomplex (the differentials never lower
arity), so all complexes are the quotients by it.  The Connes operator lowers
arity by one; identities involving it are therefore only evaluated in the
window ``arity <= arity_max - 1``.

Degrees: a cochain ``(cell, word)`` valued in ``A`` has degree
``|cell| - |word| + 1`` (shifted degrees), a cochain valued in ``C`` has
degree ``-1 - |word|``.  Both differentials raise degree by one and the
Connes operator lowers it by one.
"""
import random
from dataclasses import dataclass, field

from ._rational import Q, ONE, add_into, fmt_q
from .exact_linalg import RationalMatrix
from .exact_linalg import Echelon
from .minimal_model import Cobimodule, CobimoduleMap, cobimodule_from_coalgebra
from .tensor import block_parity


class WindowError(ValueError):
    pass


def _add(out, key, v):
    add_into(out, key, v)


def add(*els, coeffs=None):
    coeffs = coeffs or [ONE] * len(els)
    out = {}
    for c, e in zip(coeffs, els):
        if not c:
            continue
        for k, v in e.items():
            add_into(out, k, c * v)
    return out


def scale(el, c):
    return {k: v * c for k, v in el.items()} if c else {}


class AInftyAlgebra:
    """The dual algebra of a local A-infinity coalgebra, with a counit.

    ``counit`` is the augmentation (1 on every vertex); ``base_vertex`` is the
    vertex used to split ``C = R e_0 + ker(counit)`` for normalization.
    """

    def __init__(self, D, arity_max=4):
        self.D = D
        self.K = D.K
        self.arity_max = arity_max
        self.parity = D.K.parity
        self.sdeg = [d - 1 for d in D.K.dims]
        self.vertices = [c for c, d in enumerate(D.K.dims) if d == 0]
        self.base_vertex = self.vertices[0]
        self.counit = {v: ONE for v in self.vertices}
        # reverse index: letter -> [(cell, word, position, coeff)] over all D_k
        self._occurs = {}
        for k, comp in D.components.items():
            for c, terms in comp.items():
                for u, v in terms.items():
                    for i, x in enumerate(u):
                        self._occurs.setdefault(x, []).append((c, u, i, v))

    @property
    def letters(self):
        return range(len(self.K))

    def wdeg(self, word):
        s = self.sdeg
        return sum(s[x] for x in word)

    def wpar(self, word):
        return block_parity(self.parity, word)

    # -- checks on the structure -------------------------------------------

    def relation_residual(self):
        from .ainfty import verify_square_zero
        return verify_square_zero(self.D, min(self.D.truncation, self.arity_max + 1))

    def counit_defects(self):
        """Failures of strict counitality, per cell and arity.

        Strictness means ``counit`` vanishes on ``D_1``, removing one counit
        slot from ``D_2`` gives back the cell, and ``D_k`` (``k >= 3``) has
        no component with a vertex in any slot.
        """
        bad = []
        for c in range(len(self.K)):
            for k, comp in self.D.components.items():
                terms = comp.get(c, {})
                for slot in range(k):
                    red = {}
                    for u, v in terms.items():
                        e = self.counit.get(u[slot])
                        if e:
                            add_into(red, u[:slot] + u[slot + 1:], v * e)
                    if k == 2:
                        want = {(c,): ONE}
                        if slot == 1 and self.K.dims[c] % 2:
                            want = {(c,): -ONE}
                        if red != want:
                            bad.append((self.K.cells[c].id, k, slot))
                    elif red:
                        bad.append((self.K.cells[c].id, k, slot))
        return bad


@dataclass
class HochschildCochain:
    """A truncated cochain with its value module.

    ``values="A"``: terms ``{(cell, word): coeff}``; ``values="C"``: terms
    ``{word: coeff}`` with the value letter first.
    """
    alg: AInftyAlgebra
    terms: dict
    values: str = "A"

    def __post_init__(self):
        if self.values not in ("A", "C"):
            raise ValueError("values must be 'A' or 'C'")
        over = [k for k in self.terms if self.arity_of(k) > self.alg.arity_max]
        if over:
            raise WindowError("cochain has arity above %d" % self.alg.arity_max)

    def arity_of(self, key):
        return len(key[1]) if self.values == "A" else len(key) - 1

    def degree_of(self, key):
        return a_degree(self.alg, key) if self.values == "A" else c_degree(self.alg, key)

    @property
    def arities(self):
        return sorted({self.arity_of(k) for k in self.terms})

    @property
    def degrees(self):
        return sorted({self.degree_of(k) for k in self.terms})

    def differential(self):
        f = hochschild_differential if self.values == "A" else c_differential
        return HochschildCochain(self.alg, f(self.alg, self.terms), self.values)

    def serialize(self):
        ids = [c.id for c in self.alg.K.cells]
        rows = []
        for k, v in sorted(self.terms.items()):
            if self.values == "A":
                rows.append({"input": ids[k[0]], "word": [ids[x] for x in k[1]],
                             "coeff": fmt_q(v)})
            else:
                rows.append({"value": ids[k[0]], "word": [ids[x] for x in k[1:]],
                             "coeff": fmt_q(v)})
        return {"values": self.values, "terms": rows}


# ---------------------------------------------------------------------------
# Cochains valued in A

def a_degree(alg, key):
    c, w = key
    return alg.sdeg[c] - alg.wdeg(w) + 1


def hochschild_differential(alg, phi, arity_max=None):
    """``[D, phi]`` on cochains valued in ``A``, truncated at ``arity_max``."""
    N = alg.arity_max if arity_max is None else arity_max
    parity = alg.parity
    comps = alg.D.components
    out = {}
    for (c, w), val in phi.items():
        par = (parity[c] + alg.wpar(w)) % 2
        # D after phi
        sgn = 1
        for i, x in enumerate(w):
            for k, comp in comps.items():
                if len(w) + k - 1 > N:
                    continue
                for u, v in comp.get(x, {}).items():
                    add_into(out, (c, w[:i] + u + w[i + 1:]), val * v if sgn > 0 else -(val * v))
            if parity[x]:
                sgn = -sgn
        # phi after D, with the commutator sign
        for (c2, u, i, v) in alg._occurs.get(c, ()):
            if len(u) - 1 + len(w) > N:
                continue
            s = -1 if par == 0 else 1
            if par and block_parity(parity, u[:i]):
                s = -s
            add_into(out, (c2, u[:i] + w + u[i + 1:]), val * v if s > 0 else -(val * v))
    return out


def _by_input(phi):
    idx = {}
    for (c, w), v in phi.items():
        idx.setdefault(c, []).append((w, v))
    return idx


def cup_product(alg, phi, psi, arity_max=None):
    """Cup product through ``D_k``, ``k >= 2``.

    ``phi`` and ``psi`` act on two distinct outputs, ``phi`` to the left, with
    Koszul signs and an overall ``(-1)^{|phi|(|psi|+1)}`` (Hochschild
    degrees) so that the differential is a graded derivation.
    """
    N = alg.arity_max if arity_max is None else arity_max
    parity = alg.parity
    P, S = _by_input(phi), _by_input(psi)
    out = {}
    for k, comp in alg.D.components.items():
        if k < 2:
            continue
        for c, terms in comp.items():
            for u, v in terms.items():
                pre = [0]
                for x in u:
                    pre.append(pre[-1] ^ parity[x])
                for i in range(k):
                    if u[i] not in P:
                        continue
                    for j in range(i + 1, k):
                        if u[j] not in S:
                            continue
                        for w1, a in P[u[i]]:
                            pp = (parity[u[i]] + alg.wpar(w1)) % 2
                            for w2, b in S[u[j]]:
                                L = k - 2 + len(w1) + len(w2)
                                if L > N:
                                    continue
                                pq = (parity[u[j]] + alg.wpar(w2)) % 2
                                # Hochschild degrees are derivation parities plus one
                                sgn = (pp * pre[i] + pq * (pre[j] ^ pp) + (pp + 1) * pq) % 2
                                word = u[:i] + w1 + u[i + 1:j] + w2 + u[j + 1:]
                                coeff = v * a * b
                                add_into(out, (c, word), -coeff if sgn else coeff)
    return out


def unit_cochain(alg):
    """The counit as an arity-zero cochain."""
    return {(v, ()): ONE for v in alg.vertices}


# ---------------------------------------------------------------------------
# Cochains valued in C

def c_degree(alg, word):
    return -1 - alg.wdeg(word)


def c_arity(word):
    return len(word) - 1


def c_differential(alg, x, arity_max=None):
    """Cyclic Hochschild differential on cochains valued in ``C``."""
    N = alg.arity_max if arity_max is None else arity_max
    parity = alg.parity
    comps = alg.D.components
    out = {}
    for w, val in x.items():
        sgn = 1
        rest = w[1:]
        prest = alg.wpar(rest)
        for i, y in enumerate(w):
            for k, comp in comps.items():
                if len(w) + k - 2 > N:
                    continue
                for u, v in comp.get(y, {}).items():
                    coeff = val * v if sgn > 0 else -(val * v)
                    if i == 0:
                        pu = 0
                        for t in range(k):
                            # move u[:t] behind everything else
                            tail_par = (alg.wpar(u[t:]) + prest) % 2
                            s = -1 if (pu and tail_par) else 1
                            add_into(out, u[t:] + rest + u[:t], coeff if s > 0 else -coeff)
                            pu ^= parity[u[t]]
                    else:
                        add_into(out, w[:i] + u + w[i + 1:], coeff)
            if parity[y]:
                sgn = -sgn
    return out


def rotate_once(alg, w):
    """``(w0, w1, ..., wn) -> (w1, ..., wn, w0)`` with its Koszul sign."""
    s = -1 if (alg.parity[w[0]] and alg.wpar(w[1:])) else 1
    return s, w[1:] + w[:1]


def normalize(alg, x):
    """Project non-value letters onto the kernel of the counit.

    A vertex ``v`` in a non-value slot becomes ``v - e_0``; ``e_0`` itself
    is killed.  The image is the normalized subcomplex.
    """
    e0 = alg.base_vertex
    out = {}
    for w, val in x.items():
        partial = {(w[0],): val}
        for y in w[1:]:
            nxt = {}
            for u, a in partial.items():
                if y in alg.counit:
                    if y != e0:
                        add_into(nxt, u + (y,), a)
                        add_into(nxt, u + (e0,), -a)
                else:
                    add_into(nxt, u + (y,), a)
            partial = nxt
        for u, a in partial.items():
            add_into(out, u, a)
    return out


def is_normalized(alg, x):
    return normalize(alg, x) == x


def connes_delta(alg, x):
    """Connes operator on normalized cochains valued in ``C``.

    The value letter is evaluated on the counit and the remaining cyclic
    word is summed over all choices of a new value letter.
    """
    out = {}
    for w, val in x.items():
        e = alg.counit.get(w[0])
        if not e or len(w) < 2:
            continue
        cur = w[1:]
        s = 1
        for _ in range(len(cur)):
            add_into(out, cur, val * e if s > 0 else -(val * e))
            r, cur = rotate_once(alg, cur)
            s *= r
    return out


# ---------------------------------------------------------------------------
# The dual cobimodule and transport along F and G

def dual_cobimodule(D, shift, N):
    """``C*`` as a cobimodule over ``C``, compatible with the cyclic differential.

    The dual basis element of a cell ``x`` has degree ``shift - 1 - dim x`` so
    that a co-inner product of total degree ``shift - 2`` is a degree-zero map.
    Its differential is the transpose of ``D`` acting at the last letter of
    a co-inner word, rotated as in the cyclic differential.
    """
    K = D.K
    parity = K.parity
    degrees = [shift - 1 - d for d in K.dims]
    comps = {}
    for x in range(len(K)):
        px = degrees[x] % 2
        for k, comp in D.components.items():
            if k - 1 > N:
                continue
            for u, v in comp.get(x, {}).items():
                for t in range(k):
                    L, c, R = u[t + 1:], u[t], u[:t]
                    pL = block_parity(parity, L)
                    e = (px * (1 + pL) + pL * block_parity(parity, u[:t + 1])) % 2
                    coeff = v if e else -v
                    add_into(comps.setdefault(c, {}), (L, x, R), coeff)
    comps = {c: img for c, img in comps.items() if img}
    return Cobimodule(D, degrees, comps, N)


def coinner_as_map(K, element, N):
    """A co-inner element as a map ``B^{C*} C -> B^C C`` (input = last letter)."""
    comps = {}
    for (w, p), v in element.items():
        if len(w) - 2 > N:
            continue
        add_into(comps.setdefault(w[-1], {}), (w[:p], w[p], w[p + 1:-1]), v)
    return CobimoduleMap({m: img for m, img in comps.items() if img}, len(K), len(K), N)


def transport_to_c(alg, F, phi, arity_max=None):
    """``F#``: cochains valued in ``A`` to cochains valued in ``C``."""
    N = alg.arity_max if arity_max is None else arity_max
    parity = alg.parity
    P = _by_input(phi)
    out = {}
    for (w, p), f in F.items():
        x = w[-1]
        if x not in P:
            continue
        head = w[:-1]
        ph = alg.wpar(head)
        pl = alg.wpar(w[:p])
        for y, a in P[x]:
            L = len(w) - 2 + len(y)
            if L > N:
                continue
            par = (parity[x] + alg.wpar(y)) % 2
            letters = head + y
            s = (par * ph + pl * ((ph + pl + alg.wpar(y)) % 2)) % 2
            coeff = f * a
            add_into(out, letters[p:] + letters[:p], -coeff if s else coeff)
    return out


def transport_to_a(alg, G, x, shift, arity_max=None):
    """``G#``: cochains valued in ``C`` to cochains valued in ``A``.

    ``G`` is a cobimodule map ``B^C C -> B^{C*} C``.  The value letter of the
    cochain is fed to ``G``; the dual letter it returns becomes the input of
    the resulting map.
    """
    N = alg.arity_max if arity_max is None else arity_max
    out = {}
    for w, val in x.items():
        m, y = w[0], w[1:]
        py = alg.wpar(y)
        for (l, xh, r), g in G.comps.get(m, {}).items():
            word = r + y + l
            if len(word) > N:
                continue
            # parity of the dual letter; chosen so that F# G# = (F G)# with the
            # sign of a composite depending only on its own letters
            P = (shift - 1 - alg.K.dims[xh]) % 2
            pl, pr = alg.wpar(l), alg.wpar(r)
            s = (P * (alg.parity[xh] + pr + py) + pl * (pr + py)) % 2
            coeff = val * g
            add_into(out, (xh, word), -coeff if s else coeff)
    return out


# ---------------------------------------------------------------------------
# Truncated complexes and classes

def restrict_arity(x, arity):
    return {w: v for w, v in x.items() if len(w) - 1 <= arity}


class CochainWindow:
    """Normalized cochains valued in ``C`` of arity ``<= arity``, by degree.

    The basis is ``normalize(w)`` over words whose non-value letters avoid the
    base vertex; the coordinates of a normalized cochain are its
    coefficients on those words.  ``classes(degree)`` returns cocycle
    representatives of a cohomology basis of the quotient complex and
    ``is_exact`` tests membership in the image of the differential.
    """

    def __init__(self, alg, arity):
        self.alg = alg
        self.arity = arity
        n = len(alg.K)
        e0 = alg.base_vertex
        by = {}
        for L in range(1, arity + 2):
            for w in _all_words(n, L):
                if e0 not in w[1:]:
                    by.setdefault(c_degree(alg, w), []).append(w)
        self.words = by
        self.index = {d: {w: i for i, w in enumerate(ws)} for d, ws in by.items()}
        self._diff = {}
        self._image = {}
        self._cycles = {}

    def vector(self, x, degree):
        idx = self.index.get(degree, {})
        out = {}
        for w, v in x.items():
            if len(w) - 1 > self.arity or self.alg.base_vertex in w[1:]:
                continue
            if w not in idx:
                raise WindowError("cochain not of degree %d" % degree)
            out[idx[w]] = v
        return out

    def element(self, vec, degree):
        ws = self.words[degree]
        return normalize(self.alg, {ws[i]: v for i, v in vec.items()})

    def differential(self, degree):
        """Matrix of the differential from ``degree`` to ``degree + 1``."""
        got = self._diff.get(degree)
        if got is None:
            cols = []
            for w in self.words.get(degree, []):
                img = c_differential(self.alg, normalize(self.alg, {w: ONE}), self.arity)
                cols.append(self.vector(img, degree + 1))
            got = self._diff[degree] = RationalMatrix.from_columns(
                len(self.words.get(degree + 1, [])), cols)
        return got

    def _image_echelon(self, degree):
        got = self._image.get(degree)
        if got is None:
            got = Echelon()
            if degree - 1 in self.words:
                for col in self.differential(degree - 1).col_dicts():
                    if col:
                        got.add(col)
            self._image[degree] = got
        return got

    def is_exact(self, x, degree):
        vec = self.vector(restrict_arity(x, self.arity), degree)
        if not vec:
            return True
        row, _ = self._image_echelon(degree).reduce(vec)
        return not row

    def classes(self, degree):
        """Sparse cocycles completing the coboundaries to all cocycles."""
        got = self._cycles.get(degree)
        if got is None:
            from .exact_linalg import kernel_basis_sparse
            ech = self._image_echelon(degree)
            base = Echelon()
            for piv, (row, _) in ech.pivots.items():
                base.add(row)
            got = []
            if degree in self.words:
                for z in kernel_basis_sparse(self.differential(degree)):
                    if base.add(z):
                        got.append(self.element(z, degree))
            self._cycles[degree] = got
        return got


def _all_words(n, L):
    import itertools
    return itertools.product(range(n), repeat=L)


# ---------------------------------------------------------------------------
# Transported structure and the BV identities

@dataclass
class TransportedStructure:
    """Product and Connes operator on cochains valued in ``C``.

    ``bv_degree(x) = c_degree(x) + shift`` is the degree of the corresponding
    cochain valued in ``A``; the product has degree zero and the Connes
    operator degree ``-1`` for it.
    """
    alg: AInftyAlgebra
    F: dict
    G: object
    shift: int

    def to_a(self, x):
        return transport_to_a(self.alg, self.G, x, self.shift)

    def to_c(self, phi):
        return transport_to_c(self.alg, self.F, phi)

    def product(self, x, y):
        return normalize(self.alg, self.to_c(cup_product(self.alg, self.to_a(x), self.to_a(y))))

    def unit(self):
        return normalize(self.alg, self.to_c(unit_cochain(self.alg)))

    def delta(self, x):
        return connes_delta(self.alg, x)

    def bv_degree(self, x):
        degs = {c_degree(self.alg, w) for w in x}
        if len(degs) != 1:
            raise WindowError("inhomogeneous cochain")
        return degs.pop() + self.shift


def transport_product(structure, x, y):
    """``F#(G# x  cup  G# y)``, normalized."""
    if structure.G is None:
        raise ValueError("a quasi-inverse is required")
    return structure.product(x, y)


def bv_residual(T, a, b, c):
    """The seven-term expression; a coboundary for a BV algebra."""
    m, D = T.product, T.delta
    da, db = T.bv_degree(a), T.bv_degree(b)
    ab, bc, ac = m(a, b), m(b, c), m(a, c)
    terms = [
        (1, D(m(ab, c))),
        (-1, m(D(ab), c)),
        (-(-1) ** da, m(a, D(bc))),
        (-(-1) ** ((da + 1) * db), m(b, D(ac))),
        (1, m(m(D(a), b), c)),
        ((-1) ** da, m(m(a, D(b)), c)),
        ((-1) ** (da + db), m(ab, D(c))),
    ]
    return add(*[t for _, t in terms], coeffs=[Q(s) for s, _ in terms])


@dataclass
class BVReport:
    checks: dict
    window: dict
    samples: int
    classes: dict = field(default_factory=dict)
    nontrivial: dict = field(default_factory=dict)

    @property
    def ok(self):
        return all(c["pass"] for c in self.checks.values())

    def as_dict(self):
        return {"pass": self.ok, "window": self.window, "samples": self.samples,
                "classes": {str(k): v for k, v in sorted(self.classes.items())},
                "nontrivial": self.nontrivial,
                "checks": self.checks}

    def text(self):
        lines = ["BV identities on arity <= %d, degrees %d..%d: %s" % (
            self.window["arity"], self.window["degrees"][0], self.window["degrees"][1],
            "PASS" if self.ok else "FAIL")]
        lines.append("classes per degree: " + ", ".join(
            "%s:%d" % (k, v) for k, v in sorted(self.classes.items())))
        if self.nontrivial:
            lines.append("sampled triples with " + ", ".join(
                "%s: %d" % kv for kv in self.nontrivial.items()))
        for name, c in self.checks.items():
            extra = ", ".join("%s=%s" % (k, v) for k, v in c.items() if k != "pass")
            lines.append("  %-24s %s  %s" % (name, "ok" if c["pass"] else "FAILED", extra))
        return "\n".join(lines)


def _random_a(alg, rng, arity):
    n = len(alg.K)
    return {(rng.randrange(n), tuple(rng.randrange(n) for _ in range(rng.randint(0, arity)))):
            Q(rng.randint(-3, 3) or 1) for _ in range(3)}


def _random_c(alg, rng, arity):
    n = len(alg.K)
    return {tuple(rng.randrange(n) for _ in range(rng.randint(1, arity + 1))):
            Q(rng.randint(-3, 3) or 1) for _ in range(3)}


def _homogeneous_a(alg, rng, arity):
    n = len(alg.K)
    return {(rng.randrange(n), tuple(rng.randrange(n) for _ in range(rng.randint(0, arity)))): ONE}


def bv_check(T, window=(-2, 2), arity=3, samples=20, seed=0, random_cochains=50):
    """Verify the BV identities for the transported structure ``T``.

    Classes are cocycles of the quotient by arity ``> T.alg.arity_max``;
    identities involving the Connes operator are evaluated on arity
    ``<= arity``, which must be below the truncation.
    """
    alg = T.alg
    if arity > alg.arity_max - 1:
        raise WindowError("window arity %d needs truncation at least %d" % (arity, arity + 1))
    rng = random.Random(seed)
    lo, hi = window
    big = CochainWindow(alg, alg.arity_max)
    small = CochainWindow(alg, arity)
    checks = {}

    def exact(x):
        degs = {c_degree(alg, w) for w in restrict_arity(x, arity)}
        return all(small.is_exact({w: v for w, v in x.items() if c_degree(alg, w) == d}, d)
                   for d in degs)

    bad = sum(bool(c_differential(alg, c_differential(alg, _random_c(alg, rng, arity))))
              for _ in range(random_cochains))
    bad += sum(bool(hochschild_differential(alg, hochschild_differential(
        alg, _random_a(alg, rng, arity)))) for _ in range(random_cochains))
    checks["b^2=0"] = {"pass": bad == 0, "failures": bad, "trials": 2 * random_cochains}

    bad = 0
    for _ in range(random_cochains):
        x = normalize(alg, _random_c(alg, rng, arity + 1))
        bad += bool(connes_delta(alg, connes_delta(alg, x)))
    checks["delta^2=0"] = {"pass": bad == 0, "failures": bad, "trials": random_cochains}

    bad = 0
    for _ in range(random_cochains):
        x = normalize(alg, _random_c(alg, rng, arity))
        r = add(c_differential(alg, connes_delta(alg, x)),
                connes_delta(alg, c_differential(alg, x)))
        bad += bool(restrict_arity(r, arity))
    checks["b delta + delta b=0"] = {"pass": bad == 0, "failures": bad,
                                     "trials": random_cochains}

    bad = 0
    for _ in range(random_cochains):
        p, q = _homogeneous_a(alg, rng, arity), _homogeneous_a(alg, rng, arity)
        dp = a_degree(alg, next(iter(p)))
        lhs = hochschild_differential(alg, cup_product(alg, p, q))
        rhs = add(cup_product(alg, hochschild_differential(alg, p), q),
                  cup_product(alg, p, hochschild_differential(alg, q)),
                  coeffs=[ONE, Q((-1) ** dp)])
        bad += bool(add(lhs, rhs, coeffs=[ONE, -ONE]))
    checks["cup chain map"] = {"pass": bad == 0, "failures": bad, "trials": random_cochains}

    reps = {}
    for d in range(lo, hi + 1):
        reps[d] = big.classes(d)
    pool = [(d, z) for d, zs in reps.items() for z in zs]
    counts = {d: len(zs) for d, zs in reps.items()}
    if not pool:
        checks["classes"] = {"pass": True, "note": "window has no classes"}
        return BVReport(checks, {"arity": arity, "degrees": list(window)}, 0, counts)

    bad = sum(1 for d, z in pool if not big.is_exact(c_differential(alg, z), d + 1)
              and c_differential(alg, z))
    nonzero = sum(1 for d, z in pool if not small.is_exact(z, d) or not big.is_exact(z, d))
    checks["normalized classes"] = {"pass": bad == 0, "cocycle_failures": bad,
                                    "nonzero": nonzero, "total": len(pool)}

    bad = 0
    for d, z in pool:
        back = normalize(alg, T.to_c(T.to_a(z)))
        bad += not exact(add(back, z, coeffs=[ONE, -ONE]))
    checks["transport round trip"] = {"pass": bad == 0, "failures": bad, "trials": len(pool)}

    unit = T.unit()
    bad = 0
    for d, z in pool:
        bad += not exact(add(T.product(unit, z), z, coeffs=[ONE, -ONE]))
        bad += not exact(add(T.product(z, unit), z, coeffs=[ONE, -ONE]))
    checks["unit"] = {"pass": bad == 0, "failures": bad, "trials": 2 * len(pool)}

    triples = [tuple(rng.choice(pool) for _ in range(3)) for _ in range(samples)]
    fails = {"commutative": 0, "associative": 0, "delta^2 on classes": 0, "bv relation": 0}
    live = {"product not exact": 0, "delta not exact": 0, "bv terms nonzero": 0}
    for (da, a), (db, b), (dc, c) in triples:
        sa, sb = T.bv_degree(a), T.bv_degree(b)
        ab = T.product(a, b)
        live["product not exact"] += not exact(ab)
        live["delta not exact"] += not exact(T.delta(a))
        live["bv terms nonzero"] += bool(restrict_arity(T.product(T.delta(ab), c), arity))
        comm = add(ab, T.product(b, a), coeffs=[ONE, -Q((-1) ** (sa * sb))])
        fails["commutative"] += not exact(comm)
        assoc = add(T.product(T.product(a, b), c), T.product(a, T.product(b, c)),
                    coeffs=[ONE, -ONE])
        fails["associative"] += not exact(assoc)
        fails["delta^2 on classes"] += bool(restrict_arity(T.delta(T.delta(a)), arity))
        fails["bv relation"] += not exact(bv_residual(T, a, b, c))
    for name, f in fails.items():
        checks[name] = {"pass": f == 0, "failures": f, "trials": samples}
    rep = BVReport(checks, {"arity": arity, "degrees": list(window)}, samples, counts)
    rep.nontrivial = live
    return rep


def transported_structure(K, D, F, arity_max=4):
    """Algebra, dual cobimodule, ``F`` as a map and its quasi-inverse ``G``."""
    from .minimal_model import quasi_inverse
    alg = AInftyAlgebra(D, arity_max)
    Mc = cobimodule_from_coalgebra(D, arity_max)
    Md = dual_cobimodule(D, F.shift, arity_max)
    Fm = coinner_as_map(K, F.element, arity_max)
    G = quasi_inverse(Fm, Md, Mc)
    return TransportedStructure(alg, F.element, G, F.shift), (Md, Mc, Fm)
