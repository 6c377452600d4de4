"""Words in the suspended tensor coalgebra and operators on them.

Letters are cell indices of a fixed complex.  The shifted degree of a cell of
dimension ``k`` is ``k - 1``; only its parity enters sign computations, so
``parity[c] = (dim c - 1) % 2``.

Three kinds of elements share the same sparse-dict representation
``{key: mpq}``:

* ``BC`` elements, keyed by a tuple of letters;
* co-inner elements of ``B^C_C C``, keyed by ``(letters, p)`` where
  ``letters[p]`` is the first special letter and the last letter is the second
  special letter.  The tensor degree of such a word is ``len(letters) - 2``;
* cobimodule elements (see :mod:`localduality.minimal_model`).

A co-inner word is best thought of as a cyclic word with two labelled marks;
the stored representative is the rotation that puts the second mark last.
Rotations carry the Koszul sign of the moved blocks, and an A-infinity
derivation applied letterwise commutes with rotation, which is what makes the
cyclic differential square to zero.
"""
import itertools
from dataclasses import dataclass, field

from ._rational import Q, ZERO, ONE, add_into, fmt_q, as_q


class TruncationOverflow(UserWarning):
    pass


class NotExact(ArithmeticError):
    """An error term that should be a boundary is not."""


def koszul_sign(moved, over):
    """Sign for moving elements of degrees ``moved`` past ``over``."""
    return -1 if (sum(moved) % 2) * (sum(over) % 2) else 1


def block_parity(parity, letters):
    p = 0
    for c in letters:
        p ^= parity[c]
    return p


@dataclass
class DropCounter:
    """Counts output terms discarded by truncation."""
    count: int = 0
    max_degree: int = -1

    def add(self, degree):
        self.count += 1
        if degree > self.max_degree:
            self.max_degree = degree


# ---------------------------------------------------------------------------
# Degree bookkeeping

def word_degree(K, letters, kind="coinner"):
    """Degree of a word in ``B^C_C C`` (last letter counted with ``1 - k``)."""
    dims = K.dims
    if kind != "coinner":
        raise ValueError("word_degree is defined for co-inner words")
    if len(letters) < 2:
        raise ValueError("co-inner words have at least two letters")
    body = sum(dims[c] - 1 for c in letters[:-1])
    return body + (1 - dims[letters[-1]])


def total_degree(K, letters):
    """Sum of shifted degrees of all letters; invariant under rotation.

    The cyclic differential lowers it by exactly one.
    """
    dims = K.dims
    return sum(dims[c] - 1 for c in letters)


def element_degrees(K, element):
    return {total_degree(K, w) for (w, _p) in element}


# ---------------------------------------------------------------------------
# Derivation families

@dataclass
class DerivationFamily:
    """Components ``D_k : C -> C^{(x)k}`` of an A-infinity coalgebra on ``K``.

    ``components[k][cell]`` is a sparse dict ``{word: coeff}`` with words of
    length ``k``.  ``truncation`` is the largest ``k`` represented.
    ``locality`` records, per component, whether every output letter lies in
    the closure of its input cell.
    """
    K: object
    components: dict
    truncation: int
    coproduct: str = "strict-aw"
    trace: list = field(default_factory=list)

    def component(self, k, cell):
        comp = self.components.get(k)
        if comp is None:
            return {}
        return comp.get(cell, {})

    def arities(self):
        return sorted(k for k, v in self.components.items() if any(v.values()))

    def locality(self):
        cert = {}
        for k, comp in self.components.items():
            ok = True
            for c, terms in comp.items():
                cl = set(self.K.closure_indices(c))
                if any(x not in cl for w in terms for x in w):
                    ok = False
                    break
            cert[k] = ok
        return cert

    def copy(self):
        return DerivationFamily(self.K, {k: {c: dict(t) for c, t in v.items()}
                                         for k, v in self.components.items()},
                                self.truncation, self.coproduct, list(self.trace))


def shifted_coproduct(K, coproduct):
    """Shift an unshifted diagonal to ``sC``: ``x (x) y -> (-1)^{|x|} x (x) y``."""
    dims = K.dims
    out = {}
    for c, terms in coproduct.items():
        t = {}
        for (x, y), v in terms.items():
            add_into(t, (x, y), v if dims[x] % 2 == 0 else -v)
        out[c] = t
    return out


def shifted_boundary(K):
    """``D_1 = -s d s^{-1}`` as a component table."""
    return {i: {(j,): -v for j, v in K.boundary(i).items()} for i in range(len(K))}


def family_from_coproduct(K, coproduct, truncation, mode="strict-aw"):
    comps = {1: shifted_boundary(K), 2: shifted_coproduct(K, coproduct)}
    for k in range(3, truncation + 1):
        comps[k] = {}
    return DerivationFamily(K, comps, truncation, mode)


# ---------------------------------------------------------------------------
# Derivation extension on BC

def extend_to_derivation(component, parity, element, max_length=None, dropped=None):
    """Apply a homogeneous odd component map as a derivation on BC words.

    ``component`` maps a letter to ``{word: coeff}``; ``element`` is a dict of
    BC words.  Koszul sign ``(-1)^{|prefix|}`` for the letters passed over.
    """
    out = {}
    for w, c in element.items():
        sgn = 1
        for i, x in enumerate(w):
            img = component.get(x)
            if img:
                head, tail = w[:i], w[i + 1:]
                for u, v in img.items():
                    nw = head + u + tail
                    if max_length is not None and len(nw) > max_length:
                        if dropped is not None:
                            dropped.add(len(nw))
                        continue
                    add_into(out, nw, c * v if sgn > 0 else -c * v)
            if parity[x]:
                sgn = -sgn
    return out


def apply_derivation(D, element, max_length=None, dropped=None):
    """Apply the full derivation ``D = sum_k D_k`` to BC words."""
    parity = D.K.parity
    out = {}
    for k in sorted(D.components):
        part = extend_to_derivation(D.components[k], parity, element, max_length, dropped)
        for w, v in part.items():
            add_into(out, w, v)
    return out


def square_zero_residual(D, cell, arity):
    """Component of ``D o D`` applied to ``cell`` with output length ``arity``."""
    parity = D.K.parity
    out = {}
    for j in range(1, arity + 1):
        i = arity - j + 1
        if i < 1 or i not in D.components or j not in D.components:
            continue
        inner = D.component(j, cell)
        if not inner:
            continue
        part = extend_to_derivation(D.components[i], parity, inner)
        for w, v in part.items():
            add_into(out, w, v)
    return out


# ---------------------------------------------------------------------------
# Co-inner words

def _rotate(parity, letters, p, cut):
    """Move ``letters[cut:]`` to the front.  Returns (sign, letters, p)."""
    head, tail = letters[:cut], letters[cut:]
    sgn = -1 if block_parity(parity, head) and block_parity(parity, tail) else 1
    np_ = p + len(tail) if p < cut else p - cut
    return sgn, tail + head, np_


def cyclic_differential(D, element, max_degree=None, dropped=None, arities=None):
    """The differential on ``B^C_C C``: apply ``D`` at every letter, cyclically.

    Non-special letters receive ``D_k``; special letters receive ``D_k`` with
    the special mark placed on each output slot in turn.  When the second
    special letter is split, the letters produced after its mark are rotated
    to the front so that the result ends with the second special letter again.
    ``arities`` restricts which ``D_k`` are used (``[1]`` gives the linear part).
    """
    parity = D.K.parity
    out = {}
    ks = sorted(D.components) if arities is None else list(arities)
    for (w, p), c in element.items():
        L = len(w)
        sgn = 1
        for i, x in enumerate(w):
            head, tail = w[:i], w[i + 1:]
            for k in ks:
                img = D.components.get(k, {}).get(x)
                if not img:
                    continue
                newdeg = L - 2 + k - 1
                if max_degree is not None and newdeg > max_degree:
                    if dropped is not None:
                        for _ in img:
                            dropped.add(newdeg)
                    continue
                for u, v in img.items():
                    coeff = c * v if sgn > 0 else -(c * v)
                    if i == L - 1:
                        base = head + u
                        for t in range(k):
                            cut = i + t + 1
                            s2, nw, np_ = _rotate(parity, base, p, cut)
                            add_into(out, (nw, np_), coeff if s2 > 0 else -coeff)
                    elif i == p:
                        nw = head + u + tail
                        for t in range(k):
                            add_into(out, (nw, p + t), coeff)
                    else:
                        nw = head + u + tail
                        add_into(out, (nw, p + k - 1 if i < p else p), coeff)
            if parity[x]:
                sgn = -sgn
    return out


def rotate_tau(K, element):
    """Swap the roles of the two special letters by a half turn.

    ``(X ; Y) -> -(-1)^{|X||Y|} (Y ; X)`` where ``X`` runs up to and including
    the first special letter and ``Y`` is the rest; degrees are shifted.
    The overall minus makes the diagonal of a cocommutative coproduct
    invariant; ``tau`` is an involution commuting with the cyclic differential.
    """
    parity = K.parity
    out = {}
    for (w, p), c in element.items():
        X, Y = w[:p + 1], w[p + 1:]
        flip = block_parity(parity, X) and block_parity(parity, Y)
        add_into(out, (Y + X, len(Y) - 1), c if flip else -c)
    return out


def coinner_from_pairs(pairs):
    """Two-letter co-inner words from a BC element of length-2 words."""
    return {((x, y), 0): v for (x, y), v in pairs.items()}


def truncate(element, max_degree):
    return {k: v for k, v in element.items() if len(k[0]) - 2 <= max_degree}


def degree_component(element, j):
    return {k: v for k, v in element.items() if len(k[0]) - 2 == j}


def add_elements(*elements, coeffs=None):
    out = {}
    coeffs = coeffs or [ONE] * len(elements)
    for c, e in zip(coeffs, elements):
        for k, v in e.items():
            add_into(out, k, c * v)
    return out


def sub_elements(a, b):
    return add_elements(a, b, coeffs=[ONE, -ONE])


# ---------------------------------------------------------------------------
# Hat construction for A-infinity coalgebra morphisms

def apply_morphism(f, parity, element, max_length=None):
    """Apply an algebra map ``BC -> BC'`` given by components ``f[k][cell]``."""
    out = {}
    for w, c in element.items():
        partial = {(): c}
        for x in w:
            nxt = {}
            for u, a in partial.items():
                for k, comp in f.items():
                    img = comp.get(x)
                    if not img:
                        continue
                    if max_length is not None and len(u) + k > max_length:
                        continue
                    for z, b in img.items():
                        add_into(nxt, u + z, a * b)
            partial = nxt
            if not partial:
                break
        for u, a in partial.items():
            if max_length is None or len(u) <= max_length:
                add_into(out, u, a)
    return out


def hat_map(f, parity, element, max_degree=None):
    """``f^`` on co-inner elements: ``f`` applied at every letter at once.

    ``f`` maps a letter to words (components of degree zero).  Both special
    letters are split with the mark ranging over their image, then the word
    is rotated so that it ends with the image of the second special mark.
    """
    out = {}
    for (w, p), c in element.items():
        images = []
        for x in w:
            img = {}
            for comp in f.values():
                for z, b in comp.get(x, {}).items():
                    add_into(img, z, b)
            images.append(list(img.items()))
        L = len(w)
        for choice in itertools.product(*images):
            coeff = c
            letters = ()
            p_choices = None
            s_start = None
            for i, (z, b) in enumerate(choice):
                coeff = coeff * b
                if i == p:
                    p_choices = (len(letters), len(z))
                if i == L - 1:
                    s_start = len(letters)
                letters = letters + z
            if max_degree is not None and len(letters) - 2 > max_degree:
                continue
            p0, plen = p_choices
            zlen = len(letters) - s_start
            for a in range(plen):
                for t in range(zlen):
                    cut = s_start + t + 1
                    s2, nw, np_ = _rotate(parity, letters, p0 + a, cut)
                    add_into(out, (nw, np_), coeff if s2 > 0 else -coeff)
    return out


# ---------------------------------------------------------------------------
# Exact solves for the tensor differential over a simplex closure

class ClosureSolver:
    """Canonical solutions of ``d x = b`` for the letterwise linear differential.

    ``d`` applies a degree-changing letter map ``lin`` (the shifted boundary)
    at every letter with the Koszul sign of the prefix.  Words are restricted
    to letters in one simplex closure.  For a full simplex with ``c``
    vertices the letter Laplacian is ``c (1 - P)`` with ``P`` the projection
    onto the barycentre of the vertices; the tensor Laplacian is therefore
    ``c`` times the number operator counting non-harmonic slots, which is
    inverted exactly.  The minimal-norm solution is ``d^T G b``.

    Keys are either plain letter tuples or ``(letters, tag)`` pairs; ``tag``
    (the special-slot position of a co-inner word) rides along unchanged.
    """

    def __init__(self, K, cell, lin, tagged=False):
        self.K = K
        self.cells = K.closure_indices(cell)
        self.cellset = set(self.cells)
        self.parity = K.parity
        self.lin = {c: lin.get(c, {}) for c in self.cells}
        adj = {c: {} for c in self.cells}
        for c, img in self.lin.items():
            for x, v in img.items():
                add_into(adj[x], c, v)
        self.adj = adj
        self.tagged = tagged
        self.vertices = [c for c in self.cells if K.dims[c] == 0]
        self.nv = len(self.vertices)
        self.fast = self._laplacian_is_scalar()

    def _laplacian_is_scalar(self):
        c = Q(self.nv)
        vs = set(self.vertices)
        for x in self.cells:
            lap = {}
            for y, a in self.lin[x].items():
                for z, b in self.adj[y].items():
                    add_into(lap, z, a * b)
            for y, a in self.adj[x].items():
                for z, b in self.lin[y].items():
                    add_into(lap, z, a * b)
            want = {x: c}
            if x in vs:
                for v in self.vertices:
                    add_into(want, v, -ONE)
            if lap != want:
                return False
        return True

    def _split(self, key):
        if self.tagged:
            return key
        return key, None

    def _join(self, w, tag):
        return (w, tag) if self.tagged else w

    def _apply(self, letter_map, element):
        parity = self.parity
        out = {}
        for key, c in element.items():
            w, tag = self._split(key)
            sgn = 1
            for i, x in enumerate(w):
                img = letter_map[x]
                if img:
                    head, tail = w[:i], w[i + 1:]
                    for y, v in img.items():
                        add_into(out, self._join(head + (y,) + tail, tag),
                                 c * v if sgn > 0 else -(c * v))
                if parity[x]:
                    sgn = -sgn
        return out

    def d(self, element):
        return self._apply(self.lin, element)

    def d_adjoint(self, element):
        return self._apply(self.adj, element)

    def _number_op(self, element):
        out = {}
        inv = ONE / self.nv
        verts = self.vertices
        dims = self.K.dims
        for key, c in element.items():
            w, tag = self._split(key)
            L = len(w)
            add_into(out, key, c * L)
            for i, x in enumerate(w):
                if dims[x] == 0:
                    head, tail = w[:i], w[i + 1:]
                    cc = -c * inv
                    for v in verts:
                        add_into(out, self._join(head + (v,) + tail, tag), cc)
        return out

    def solve(self, b):
        """Minimal-norm ``x`` with ``d x = b``; raises ``NotExact``."""
        if not b:
            return {}
        for key in b:
            w, _ = self._split(key)
            if any(x not in self.cellset for x in w):
                raise ValueError("right-hand side is not local to the closure")
        if not self.fast:
            return self._solve_generic(b)
        by_len = {}
        for key, v in b.items():
            w, _ = self._split(key)
            by_len.setdefault(len(w), {})[key] = v
        x = {}
        for L, part in by_len.items():
            # q(l) = prod_{k=1..L} (1 - l/k);  N^{-1} = -sum_{t>=1} q_t N^{t-1}
            q = [ONE]
            for k in range(1, L + 1):
                nq = q + [ZERO]
                for t in range(len(q)):
                    nq[t + 1] -= q[t] / k
                q = nq
            r = {key: -q[L] * v for key, v in part.items()}
            for t in range(L - 1, 0, -1):
                r = self._number_op(r)
                for key, v in part.items():
                    add_into(r, key, -q[t] * v)
            scale = ONE / self.nv
            g = {key: v * scale for key, v in r.items()}
            for key, v in self.d_adjoint(g).items():
                add_into(x, key, v)
        if self.d(x) != b:
            raise NotExact("right-hand side is not a boundary in the closure")
        return x

    def _candidates(self, L, degree):
        """Words of length ``L`` over the closure with total shifted degree ``degree``."""
        shifted = {c: self.K.dims[c] - 1 for c in self.cells}
        out = []
        for w in itertools.product(self.cells, repeat=L):
            if sum(shifted[x] for x in w) == degree:
                out.append(w)
        return out

    def _sparse_key(self, key):
        # prefer top-dimensional letters away from the special slots
        w, tag = self._split(key)
        top = max(self.K.dims[c] for c in self.cells)
        marks = {tag, len(w) - 1} if self.tagged else set()
        low_plain = sum(1 for i, x in enumerate(w) if i not in marks and self.K.dims[x] < top)
        low_marked = sum(1 for i, x in enumerate(w) if i in marks and self.K.dims[x] < top)
        return (low_plain, low_marked, tag if self.tagged else 0, w)

    def solve_sparse(self, b):
        """A sparse solution of ``d x = b``: elimination biased towards
        words whose lower-dimensional letters sit on the special slots."""
        from .exact_linalg import RationalMatrix, solve_sparse, NoSolution
        if not b:
            return {}
        groups = {}
        for key, v in b.items():
            w, tag = self._split(key)
            deg = sum(self.K.dims[x] - 1 for x in w)
            groups.setdefault((len(w), deg), {})[key] = v
        x = {}
        for (L, deg), part in sorted(groups.items()):
            words = self._candidates(L, deg + 1)
            if self.tagged:
                cand = [(w, p) for w in words for p in range(L - 1)]
            else:
                cand = words
            cand.sort(key=self._sparse_key)
            cols = [self.d({c: ONE}) for c in cand]
            rows = {}
            for c in cols:
                for k in c:
                    rows.setdefault(k, len(rows))
            for k in part:
                rows.setdefault(k, len(rows))
            A = RationalMatrix.from_columns(len(rows), [{rows[k]: v for k, v in c.items()}
                                                        for c in cols])
            try:
                sol = solve_sparse(A, {rows[k]: v for k, v in part.items()})
            except NoSolution:
                raise NotExact("right-hand side is not a boundary in the closure")
            for i, v in sol.items():
                add_into(x, cand[i], v)
        if self.d(x) != b:
            raise NotExact("sparse solve failed to reproduce the right-hand side")
        return x

    def _solve_generic(self, b):
        from .exact_linalg import RationalMatrix, canonical_solve_sparse, NoSolution
        groups = {}
        for key in b:
            w, tag = self._split(key)
            groups.setdefault((len(w), tag), None)
        x = {}
        for (L, tag) in groups:
            rhs_part = {k: v for k, v in b.items()
                        if len(self._split(k)[0]) == L and self._split(k)[1] == tag}
            src_words = [self._join(w, tag) for w in itertools.product(self.cells, repeat=L)]
            src_idx = {w: i for i, w in enumerate(src_words)}
            cols = [self.d({w: ONE}) for w in src_words]
            cols = [{src_idx[k]: v for k, v in col.items()} for col in cols]
            A = RationalMatrix.from_columns(len(src_words), cols)
            try:
                sol = canonical_solve_sparse(A, {src_idx[k]: v for k, v in rhs_part.items()})
            except NoSolution:
                raise NotExact("right-hand side is not a boundary in the closure")
            for i, v in sol.items():
                add_into(x, src_words[i], v)
        return x


# ---------------------------------------------------------------------------
# Serialization

def serialize_coinner(K, element):
    """Deterministically ordered list of co-inner terms."""
    rows = []
    ids = [c.id for c in K.cells]
    for (w, p), v in sorted(element.items(), key=lambda kv: (len(kv[0][0]), kv[0][1], kv[0][0])):
        rows.append({
            "left": [ids[x] for x in w[:p]],
            "special1": ids[w[p]],
            "middle": [ids[x] for x in w[p + 1:-1]],
            "special2": ids[w[-1]],
            "coeff": fmt_q(v),
        })
    return rows


def deserialize_coinner(K, rows):
    idx = K.index
    out = {}
    for r in rows:
        left = tuple(idx[x] for x in r["left"])
        mid = tuple(idx[x] for x in r["middle"])
        w = left + (idx[r["special1"]],) + mid + (idx[r["special2"]],)
        add_into(out, (w, len(left)), as_q(r["coeff"]))
    return out


def coinner_table(K, element):
    """Human-readable rows ``<x1,...,xk, s1 | y1,...,yl, s2> = p/q``."""
    lines = []
    for r in serialize_coinner(K, element):
        left = ",".join(r["left"] + [r["special1"]])
        right = ",".join(r["middle"] + [r["special2"]])
        lines.append("<%s | %s> = %s" % (left, right, r["coeff"]))
    return "\n".join(lines)


def serialize_family(D):
    ids = [c.id for c in D.K.cells]
    comps = {}
    for k in sorted(D.components):
        entries = []
        for cell in sorted(D.components[k]):
            for w, v in sorted(D.components[k][cell].items()):
                entries.append({"cell": ids[cell], "word": [ids[x] for x in w],
                                "coeff": fmt_q(v)})
        comps[str(k)] = entries
    return {"complex": D.K.name, "truncation": D.truncation,
            "coproduct": D.coproduct, "components": comps}


# ---------------------------------------------------------------------------
# Morphisms of tensor coalgebras

def morphism_inverse(f, parity, truncation):
    """Components of ``f^{-1}`` for an algebra map with ``f_1 = id``."""
    letters = set()
    for comp in f.values():
        letters.update(comp)
    g = {1: {c: {(c,): ONE} for c in letters}}
    for k in range(2, truncation + 1):
        g[k] = {}
        for c in letters:
            partial = {}
            for i in range(1, k):
                for w, v in g[i].get(c, {}).items():
                    add_into(partial, w, v)
            img = apply_morphism(f, parity, partial, max_length=k)
            val = {w: -v for w, v in img.items() if len(w) == k}
            if val:
                g[k][c] = val
    return g


def conjugate_family(D, f, truncation=None):
    """The structure ``f D f^{-1}``, for which ``f`` is a strict morphism."""
    N = D.truncation if truncation is None else truncation
    parity = D.K.parity
    g = morphism_inverse(f, parity, N)
    comps = {k: {} for k in range(1, N + 1)}
    for c in range(len(D.K)):
        gc = {}
        for comp in g.values():
            for w, v in comp.get(c, {}).items():
                add_into(gc, w, v)
        dg = apply_derivation(D, gc, max_length=N)
        img = apply_morphism(f, parity, dg, max_length=N)
        for w, v in img.items():
            comps[len(w)].setdefault(c, {})[w] = v
    return DerivationFamily(D.K, comps, N, D.coproduct)
