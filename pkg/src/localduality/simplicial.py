"""Oriented simplicial chain complexes over Q.

Cells are stored in a deterministic global basis order: by dimension, then by
the sorted tuple of vertex labels, then by id.  Complexes are immutable once
built; every algorithm refers to cells by their basis index.

Two ways of giving cells are accepted in the input document:

* a plain list of vertex labels, e.g. ``["a", "b", "c"]``: an ordinary simplex.
  Its orientation is the listed order.  Faces are generated automatically.
* an object ``{"name": "tau", "vertices": ["b", "a"]}``: a named cell.  Named
  cells may share a vertex set with other named cells, which is how the
  two-edge circle is described.  Their faces are looked up by vertex set.
"""
import itertools
import json
import os
from dataclasses import dataclass, field

from ._rational import Q, HALF, add_into, as_q
from .exact_linalg import RationalMatrix, homology_of_complex


class ComplexError(ValueError):
    """Invalid complex description."""


def perm_sign(seq, target):
    """Sign of the permutation taking ``target`` to ``seq``."""
    pos = {v: i for i, v in enumerate(target)}
    p = [pos[v] for v in seq]
    sign = 1
    seen = [False] * len(p)
    for i in range(len(p)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@dataclass(frozen=True)
class Simplex:
    id: str
    vertices: tuple
    named: bool = False

    @property
    def dim(self):
        return len(self.vertices) - 1

    def __post_init__(self):
        if not self.vertices:
            raise ComplexError("empty simplex")
        if len(set(self.vertices)) != len(self.vertices):
            raise ComplexError("duplicate vertex in simplex %r" % (self.vertices,))


def _default_id(vertices):
    if len(vertices) == 1:
        return str(vertices[0])
    return "(" + ",".join(str(v) for v in vertices) + ")"


@dataclass
class SimplicialComplex:
    """Oriented cells with incidence numbers and the Alexander-Whitney order.

    ``cells[i]`` is the ``i``-th basis element.  ``faces[(i, k)]`` gives the
    ``k``-th face of cell ``i`` as ``(face index, incidence sign)``.
    """
    name: str
    cells: list
    faces: dict
    fundamental_class: dict = None
    inclusion: list = None
    _aw_frame: list = field(default=None, repr=False)
    _lookup: dict = field(default=None, repr=False)

    def __post_init__(self):
        self.index = {c.id: i for i, c in enumerate(self.cells)}
        self.dims = [c.dim for c in self.cells]
        # shifted parity of every cell in sC: (dim - 1) mod 2
        self.parity = [(d - 1) % 2 for d in self.dims]
        self._boundary = []
        for i, c in enumerate(self.cells):
            out = {}
            for k in range(c.dim + 1 if c.dim > 0 else 0):
                j, s = self.faces[(i, k)]
                add_into(out, j, Q(s))
            self._boundary.append(out)
        self._closures = {}

    def __len__(self):
        return len(self.cells)

    @property
    def dimension(self):
        return max(self.dims) if self.cells else -1

    def cells_of_dim(self, k):
        return [i for i, d in enumerate(self.dims) if d == k]

    def boundary(self, i):
        """Boundary of cell ``i`` as ``{face index: sign}``."""
        return self._boundary[i]

    def boundary_matrix(self, k):
        """Matrix of ``C_k -> C_{k-1}`` in the basis ordering of each degree."""
        src = self.cells_of_dim(k)
        tgt = self.cells_of_dim(k - 1)
        pos = {j: r for r, j in enumerate(tgt)}
        ent = {}
        for c, i in enumerate(src):
            for j, v in self._boundary[i].items():
                ent[(pos[j], c)] = v
        return RationalMatrix(len(tgt), len(src), ent)

    def chain_differentials(self):
        return {k: self.boundary_matrix(k) for k in range(1, self.dimension + 1)}

    def chain_dims(self):
        return {k: len(self.cells_of_dim(k)) for k in range(0, self.dimension + 1)}

    def closure_indices(self, i):
        """Sorted indices of the cell ``i`` and all its iterated faces."""
        got = self._closures.get(i)
        if got is None:
            todo = [i]
            seen = {i}
            while todo:
                c = todo.pop()
                for j in self._boundary_support(c):
                    if j not in seen:
                        seen.add(j)
                        todo.append(j)
            got = tuple(sorted(seen))
            self._closures[i] = got
        return got

    def _boundary_support(self, i):
        d = self.dims[i]
        if d == 0:
            return ()
        return tuple(self.faces[(i, k)][0] for k in range(d + 1))

    def vertex_cells(self, i):
        return [j for j in self.closure_indices(i) if self.dims[j] == 0]

    def aw_frame(self, i):
        """``(sign, ordered vertices)`` with cell ``i`` = sign * [ordered vertices]."""
        return self._aw_frame[i]

    def lookup(self, vertices):
        """Cell index and sign for an ordered vertex tuple (a face of some cell)."""
        key = frozenset(vertices)
        hits = self._lookup.get(key)
        if not hits:
            raise ComplexError("no cell with vertices %r" % (vertices,))
        if len(hits) > 1:
            raise ComplexError("ambiguous face %r: several cells share its vertices"
                               % (vertices,))
        j = hits[0]
        return j, perm_sign(tuple(vertices), self.cells[j].vertices)

    def to_document(self):
        top = []
        for c in self.cells:
            top.append({"name": c.id, "vertices": list(c.vertices)} if c.named
                       else list(c.vertices))
        doc = {"name": self.name, "simplices": top}
        return doc


# ---------------------------------------------------------------------------
# Loading

def _read_source(source):
    if isinstance(source, dict):
        return source
    if isinstance(source, (bytes, bytearray)):
        source = source.decode()
    if isinstance(source, os.PathLike) or (isinstance(source, str)
                                           and not source.lstrip().startswith("{")):
        with open(source) as fh:
            return json.load(fh)
    if isinstance(source, str):
        return json.loads(source)
    raise ComplexError("unsupported source type %r" % type(source))


def _sort_key(cell):
    return (cell.dim, tuple(sorted(map(str, cell.vertices))), cell.id)


def load_complex(source):
    """Build the full complex (all faces generated) from a structured document."""
    doc = _read_source(source)
    entries = doc.get("simplices") if isinstance(doc, dict) else None
    if not entries:
        raise ComplexError("document lists no simplices")
    name = str(doc.get("name", "complex"))

    named = []
    plain = {}
    for e in entries:
        if isinstance(e, dict):
            verts = tuple(str(v) for v in e["vertices"])
            s = Simplex(str(e["name"]), verts, named=True)
            named.append(s)
        else:
            verts = tuple(str(v) for v in e)
            s = Simplex(_default_id(verts), verts)
            key = frozenset(verts)
            old = plain.get(key)
            if old is not None and old.vertices != verts:
                if perm_sign(verts, old.vertices) != 1:
                    raise ComplexError(
                        "simplex %r listed twice with conflicting orientation; "
                        "use named cells for parallel simplices" % (verts,))
                continue
            plain[key] = s

    # generate faces of plain simplices (sorted orientation unless listed)
    for s in list(plain.values()):
        for r in range(1, len(s.vertices)):
            for sub in itertools.combinations(sorted(s.vertices), r):
                key = frozenset(sub)
                if key not in plain:
                    plain[key] = Simplex(_default_id(sub), sub)
    # faces of named cells: vertices always; higher faces must already exist
    for s in named:
        for v in s.vertices:
            key = frozenset((v,))
            if key not in plain:
                plain[key] = Simplex(v, (v,))

    cells = list(plain.values()) + named
    ids = [c.id for c in cells]
    if len(set(ids)) != len(ids):
        raise ComplexError("duplicate cell ids")
    cells.sort(key=_sort_key)
    lookup = {}
    for i, c in enumerate(cells):
        lookup.setdefault(frozenset(c.vertices), []).append(i)

    def find(verts):
        hits = lookup.get(frozenset(verts), [])
        plain_hits = [j for j in hits if not cells[j].named]
        use = plain_hits or hits
        if len(use) != 1:
            raise ComplexError("face %r of a named cell is missing or ambiguous"
                               % (verts,))
        j = use[0]
        return j, perm_sign(tuple(verts), cells[j].vertices)

    faces = {}
    frames = []
    for i, c in enumerate(cells):
        for k in range(c.dim + 1 if c.dim > 0 else 0):
            sub = c.vertices[:k] + c.vertices[k + 1:]
            j, s = find(sub)
            faces[(i, k)] = (j, (-1) ** k * s)
        if c.named:
            frames.append((1, c.vertices))
        else:
            srt = tuple(sorted(c.vertices))
            frames.append((perm_sign(c.vertices, srt), srt))

    K = SimplicialComplex(name, cells, faces)
    K._aw_frame = frames
    K._lookup = {k: [j for j in v if not cells[j].named] or v for k, v in lookup.items()}
    _check_d_squared(K)

    fc = doc.get("fundamental_class")
    if fc:
        mu = {}
        for term in fc:
            verts = tuple(str(v) for v in term["simplex"]) if "simplex" in term else None
            if "cell" in term:
                j, s = K.index[str(term["cell"])], 1
            else:
                j, s = K.lookup(verts)
            add_into(mu, j, s * as_q(term.get("coeff", 1)))
        K.fundamental_class = mu
    return K


def _check_d_squared(K):
    for i in range(len(K)):
        acc = {}
        for j, a in K.boundary(i).items():
            for l, b in K.boundary(j).items():
                add_into(acc, l, a * b)
        if acc:
            raise ComplexError("boundary does not square to zero at %s" % K.cells[i].id)


# ---------------------------------------------------------------------------
# Operations

def boundary_map(K):
    """The boundary as a component table ``{cell: {(face,): coeff}}``."""
    return {i: {(j,): v for j, v in K.boundary(i).items()} for i in range(len(K))}


def closure(K, s):
    """Subcomplex generated by the closure of ``s`` (index, id or Simplex)."""
    i = _resolve(K, s)
    idx = K.closure_indices(i)
    local = {g: n for n, g in enumerate(idx)}
    cells = [K.cells[g] for g in idx]
    faces = {}
    for g in idx:
        for k in range(K.dims[g] + 1 if K.dims[g] > 0 else 0):
            j, sgn = K.faces[(g, k)]
            faces[(local[g], k)] = (local[j], sgn)
    sub = SimplicialComplex("closure(%s)" % K.cells[i].id, cells, faces,
                            inclusion=list(idx))
    sub._aw_frame = [K._aw_frame[g] for g in idx]
    lk = {}
    for n, c in enumerate(cells):
        lk.setdefault(frozenset(c.vertices), []).append(n)
    sub._lookup = {k: [j for j in v if not cells[j].named] or v for k, v in lk.items()}
    return sub


def _resolve(K, s):
    if isinstance(s, Simplex):
        s = s.id
    if isinstance(s, str):
        if s not in K.index:
            raise ComplexError("simplex %r not in complex" % s)
        return K.index[s]
    if isinstance(s, int) and not isinstance(s, bool) and 0 <= s < len(K):
        return s
    raise ComplexError("closure_is_contractible/closure take a single simplex, got %r" % (s,))


def homology(K):
    return homology_of_complex(K.chain_differentials(), K.chain_dims())


def closure_is_contractible(K, s):
    sub = closure(K, s)
    h = homology(sub)
    b = h.betti
    return b.get(0) == 1 and all(v == 0 for k, v in b.items() if k > 0)


def aw_coproduct(K):
    """Alexander-Whitney diagonal ``{cell: {(front, back): coeff}}`` (unshifted).

    For cell ``sign * [v_0, ..., v_n]`` the value is
    ``sign * sum_{i=0..n} [v_0..v_i] (x) [v_i..v_n]``.
    """
    out = {}
    for i in range(len(K)):
        sign, frame = K.aw_frame(i)
        terms = {}
        n = len(frame) - 1
        for k in range(n + 1):
            front, back = frame[:k + 1], frame[k:]
            jf, sf = _face_of(K, i, front)
            jb, sb = _face_of(K, i, back)
            add_into(terms, (jf, jb), Q(sign * sf * sb))
        out[i] = terms
    return out


def _face_of(K, i, verts):
    if len(verts) == len(K.cells[i].vertices):
        return i, perm_sign(verts, K.cells[i].vertices)
    return K.lookup(verts)


def twist(K, coproduct):
    """Koszul twist ``x (x) y -> (-1)^{|x||y|} y (x) x`` in unshifted degrees."""
    dims = K.dims
    out = {}
    for i, terms in coproduct.items():
        t = {}
        for (x, y), c in terms.items():
            add_into(t, (y, x), c if (dims[x] * dims[y]) % 2 == 0 else -c)
        out[i] = t
    return out


def symmetrize_coproduct(K, coproduct):
    """``(Delta + tw o Delta) / 2``: a cocommutative local chain map."""
    tw = twist(K, coproduct)
    out = {}
    for i in coproduct:
        t = {}
        for k, v in coproduct[i].items():
            add_into(t, k, v * HALF)
        for k, v in tw[i].items():
            add_into(t, k, v * HALF)
        out[i] = t
    return out


def chain_element(K, terms):
    """Sparse chain ``{cell index: mpq}`` from ids/indices and coefficients."""
    out = {}
    for s, c in dict(terms).items():
        add_into(out, _resolve(K, s), as_q(c))
    return out


def chain_boundary(K, chain):
    out = {}
    for i, c in chain.items():
        for j, v in K.boundary(i).items():
            add_into(out, j, c * v)
    return out


def default_fundamental_class(K):
    """The fixture's fundamental class, or the unique top-degree cycle."""
    if K.fundamental_class:
        return dict(K.fundamental_class)
    from .exact_linalg import kernel_basis_sparse
    d = K.dimension
    top = K.cells_of_dim(d)
    if d == 0:
        ker = [{0: Q(1)}] if len(top) == 1 else []
    else:
        ker = kernel_basis_sparse(K.boundary_matrix(d))
    if len(ker) != 1:
        raise ComplexError("no unique top-dimensional cycle; pass mu explicitly")
    v = ker[0]
    first = v[min(v)]
    return {top[r]: c / first for r, c in v.items()}
