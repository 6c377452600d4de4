"""Co-inner products from a local A-infinity coalgebra and a fundamental cycle.

``construct_chi`` builds a chain map ``chi : (C, -d) -> (B^C_C C, cyclic D)``
whose lowest component is the binary diagonal.  Pushing a cycle ``mu``
through it and symmetrizing under the half-turn gives a closed symmetric
co-inner product; its lowest component is the cap-product pairing.
"""
from dataclasses import dataclass, field

from ._rational import Q, ONE, HALF, add_into, fmt_q
from .exact_linalg import RationalMatrix, homology_of_complex, image_basis_sparse, span_rank
from .simplicial import chain_boundary
from .tensor import (cyclic_differential, rotate_tau, coinner_from_pairs, shifted_boundary,
                     DropCounter, NotExact, sub_elements, truncate,
                     serialize_coinner, coinner_table, total_degree)
from .ainfty import solver_cache


@dataclass
class ChiMap:
    K: object
    values: dict
    max_degree: int
    dropped: DropCounter = field(default_factory=DropCounter)

    def __call__(self, chain):
        out = {}
        for c, a in chain.items():
            for k, v in self.values.get(c, {}).items():
                add_into(out, k, a * v)
        return out

    def component(self, cell, j):
        return {k: v for k, v in self.values.get(cell, {}).items() if len(k[0]) - 2 == j}

    def locality(self):
        for c, el in self.values.items():
            cl = set(self.K.closure_indices(c))
            if any(x not in cl for (w, _p) in el for x in w):
                return False
        return True


def _boundary_image(chi, K, c, j=None):
    out = {}
    for f, s in K.boundary(c).items():
        for key, v in chi.values.get(f, {}).items():
            if j is None or len(key[0]) - 2 == j:
                add_into(out, key, s * v)
    return out


def construct_chi(K, D, max_degree=None, mode="canonical"):
    """Chain map ``chi`` with ``chi(boundary c) = cyclicD(chi(c))`` up to ``max_degree``.

    Tensor degree ``j`` of a co-inner word is its number of letters minus two;
    by default ``j <= N - 1`` for a structure truncated at ``N``.
    ``mode="sparse"`` replaces the minimal-norm correction by a sparse one
    found by biased elimination.
    """
    if mode not in ("canonical", "sparse"):
        raise ValueError("unknown solve mode %r" % (mode,))
    J = D.truncation - 1 if max_degree is None else max_degree
    dropped = DropCounter()
    values = {c: coinner_from_pairs(D.component(2, c)) for c in range(len(K))}
    chi = ChiMap(K, values, J, dropped)
    lin = {c: {w[0]: v for w, v in img.items()} for c, img in shifted_boundary(K).items()}
    solvers = solver_cache(K, lin, tagged=True)
    order = sorted(range(len(K)), key=lambda c: (K.dims[c], c))
    higher = [k for k in sorted(D.components) if k >= 2]
    for j in range(1, J + 1):
        for c in order:
            # error in degree j from the components already fixed
            cur = values[c]
            lhs = _boundary_image(chi, K, c, j)
            rhs = {}
            part = cyclic_differential(D, cur, max_degree=j, arities=higher)
            for key, v in part.items():
                if len(key[0]) - 2 == j:
                    add_into(rhs, key, v)
            err = sub_elements(lhs, rhs)
            if not err:
                continue
            if K.dims[c] == 0:
                raise NotExact("chi error does not vanish on vertex %s" % K.cells[c].id)
            solver = solvers(c)
            x = solver.solve(err) if mode == "canonical" else solver.solve_sparse(err)
            for key, v in x.items():
                add_into(cur, key, v)
    # record what a further degree would have needed
    for c in order:
        cyclic_differential(D, values[c], max_degree=J, dropped=dropped)
    return chi


def chain_map_residual(chi, D, cell, max_degree=None):
    """``chi(boundary cell) - cyclicD(chi(cell))`` in degrees ``<= max_degree``."""
    J = chi.max_degree if max_degree is None else max_degree
    lhs = truncate(_boundary_image(chi, chi.K, cell), J)
    rhs = cyclic_differential(D, chi.values.get(cell, {}), max_degree=J)
    return sub_elements(lhs, rhs)


@dataclass
class DualityElement:
    K: object
    element: dict
    lowest: dict
    max_degree: int
    mu: dict
    shift: int
    flags: dict = field(default_factory=dict)

    def components(self):
        """``{(k, l): terms}`` split by letters before/after the first special."""
        out = {}
        for (w, p), v in self.element.items():
            out.setdefault((p, len(w) - p - 2), {})[(w, p)] = v
        return out

    def serialize(self):
        return {"complex": self.K.name, "shift": self.shift, "max_degree": self.max_degree,
                "mu": {self.K.cells[c].id: fmt_q(v) for c, v in sorted(self.mu.items())},
                "terms": serialize_coinner(self.K, self.element)}

    def table(self):
        return coinner_table(self.K, self.element)


def build_duality(chi, mu, shift=None):
    """``F = (chi(mu) + tau chi(mu)) / 2`` for a cycle ``mu``."""
    K = chi.K
    if chain_boundary(K, mu):
        raise ValueError("mu is not a cycle")
    F0 = chi(mu)
    F = {}
    for k, v in F0.items():
        add_into(F, k, v * HALF)
    for k, v in rotate_tau(K, F0).items():
        add_into(F, k, v * HALF)
    low = {k: v for k, v in F.items() if len(k[0]) == 2}
    if shift is None:
        dims = {K.dims[c] for c in mu}
        shift = dims.pop() if len(dims) == 1 else 0
    return DualityElement(K, F, low, chi.max_degree, dict(mu), shift)


# ---------------------------------------------------------------------------
# Verification

def cap_matrix(K, lowest, k, shift):
    """Matrix of ``C^k -> C_{shift-k}``: ``a -> sum <a, x> y`` over ``x (x) y`` terms."""
    src = K.cells_of_dim(k)
    tgt = K.cells_of_dim(shift - k)
    spos = {c: i for i, c in enumerate(src)}
    tpos = {c: i for i, c in enumerate(tgt)}
    ent = {}
    for ((x, y), _p), v in lowest.items():
        if x in spos and y in tpos:
            key = (tpos[y], spos[x])
            ent[key] = ent.get(key, 0) + v
    ent = {k2: v for k2, v in ent.items() if v}
    return RationalMatrix(len(tgt), len(src), ent)


def induced_iso_ranks(K, lowest, shift):
    """For each ``k``: (rank of the induced map ``H^k -> H_{d-k}``, dim H^k, dim H_{d-k})."""
    diffs = K.chain_differentials()
    hom = homology_of_complex(diffs, K.chain_dims())
    out = {}
    for k in range(0, K.dimension + 1):
        tk = shift - k
        hk = hom[k]
        htk = hom[tk] if 0 <= tk <= K.dimension else None
        n_src = len(hk.harmonic_basis) if hk else 0
        n_tgt = len(htk.harmonic_basis) if htk else 0
        if n_src == 0 or htk is None:
            out[k] = (0, n_src, n_tgt)
            continue
        A = cap_matrix(K, lowest, k, shift)
        # cohomology classes have the same harmonic representatives as homology
        imgs = [A.matvec(h) for h in hk.harmonic_basis]
        bnd = []
        if tk + 1 in diffs:
            bnd = image_basis_sparse(diffs[tk + 1])
        r = span_rank(bnd + imgs) - span_rank(bnd)
        out[k] = (r, n_src, n_tgt)
    return out


@dataclass
class DualityReport:
    checks: dict
    warnings: list = field(default_factory=list)

    @property
    def ok(self):
        return all(c["pass"] for c in self.checks.values())

    def as_dict(self):
        return {"pass": self.ok, "checks": self.checks, "warnings": list(self.warnings)}


def verify_duality(F, D, mu=None):
    K = F.K
    mu = F.mu if mu is None else mu
    checks = {}
    cyc = not chain_boundary(K, mu)
    checks["mu-cycle"] = {"pass": cyc}
    dF = cyclic_differential(D, F.element, max_degree=F.max_degree)
    checks["closed"] = {"pass": not dF, "residual_terms": len(dF)}
    tF = sub_elements(rotate_tau(K, F.element), F.element)
    checks["symmetric"] = {"pass": not tF, "residual_terms": len(tF)}
    degs = sorted({total_degree(K, w) for (w, _p) in F.element})
    checks["homogeneous"] = {"pass": degs in ([], [F.shift - 2]), "degrees": degs}
    ranks = induced_iso_ranks(K, F.lowest, F.shift)
    iso = cyc and all(r == s == t for r, s, t in ranks.values())
    checks["quasi-iso"] = {"pass": iso, "shift": F.shift,
                           "ranks": {str(k): list(v) for k, v in ranks.items()}}
    warnings = []
    if F.max_degree + 1 > D.truncation:
        # the closedness check in degree j needs D_k for k up to j + 1
        warnings.append("truncation-overflow: tensor degree %d needs D_%d but N = %d"
                        % (F.max_degree, F.max_degree + 1, D.truncation))
    return DualityReport(checks, warnings)


# ---------------------------------------------------------------------------
# Reference tables

def table_word(K, left, s1, right, s2):
    """Engine key for a bracket ``<left, s1 | right, s2>`` written outside-in.

    Reference tables list the outer letters first and close with the marks;
    the engine stores them reversed with the marks exchanged.
    """
    idx = K.index
    w = tuple(idx[x] for x in reversed(left)) + (idx[s2],)
    w += tuple(idx[x] for x in reversed(right)) + (idx[s1],)
    return (w, len(left))


def translate_table(K, rows):
    """Rows ``(left, s1, right, s2, coeff)`` to an engine element.

    Tables written with ``D_1 = +boundary`` differ from the engine by the
    automorphism ``D_k -> (-1)^k D_k``, which multiplies tensor degree ``j``
    by ``(-1)^j``.
    """
    out = {}
    for left, s1, right, s2, coeff in rows:
        key = table_word(K, left, s1, right, s2)
        j = len(key[0]) - 2
        add_into(out, key, Q(coeff) if j % 2 == 0 else -Q(coeff))
    return out


def reference_rows(name, max_degree):
    """Known minimal tables for the point, the interval and the circle."""
    if name == "point":
        return {"a": [((), "a", (), "a", 1)]}
    if name == "interval":
        rows = []
        for k in range(max_degree + 1):
            rows.append((("sigma",) * k, "sigma", (), "a", 1))
            rows.append((("sigma",) * k, "b", (), "sigma", -1))
        return {"sigma": rows}
    if name == "circle":
        sig, tau = [], []
        for k in range(max_degree + 1):
            sig.append((("sigma",) * k, "sigma", (), "a", 1))
            sig.append((("sigma",) * k, "b", (), "sigma", -1))
            tau.append((("tau",) * k, "a", (), "tau", -1))
            tau.append((("tau",) * k, "tau", (), "b", 1))
        return {"sigma": sig, "tau": tau}
    raise KeyError("no reference table for %r" % (name,))


def _candidate_words(K, letters, degree, max_degree):
    dims = K.dims
    out = []
    for n in range(2, max_degree + 3):
        for w in _words_over(letters, n):
            if sum(dims[c] - 1 for c in w) != degree:
                continue
            out.extend((w, p) for p in range(n - 1))
    return out


def _words_over(letters, n):
    if n == 0:
        yield ()
        return
    for w in _words_over(letters, n - 1):
        for c in letters:
            yield w + (c,)


def cyclic_exact(D, element, letters, max_degree):
    """Solve ``cyclicD x = element`` up to ``max_degree`` over words in ``letters``.

    Returns a primitive ``x`` or ``None`` when the element is not exact.
    The element must be homogeneous in total degree.
    """
    from .exact_linalg import NoSolution, solve_sparse
    if not element:
        return {}
    K = D.K
    degs = {total_degree(K, w) for (w, _p) in element}
    if len(degs) != 1:
        raise ValueError("element is not homogeneous")
    cand = _candidate_words(K, sorted(letters), degs.pop() + 1, max_degree)
    rows = {}
    cols = []
    for key in cand:
        img = cyclic_differential(D, {key: ONE}, max_degree=max_degree)
        cols.append({rows.setdefault(k, len(rows)): v for k, v in img.items()})
    b = {}
    for k, v in element.items():
        b[rows.setdefault(k, len(rows))] = v
    A = RationalMatrix.from_columns(len(rows), cols)
    try:
        x = solve_sparse(A, b)
    except NoSolution:
        return None
    return {cand[i]: v for i, v in x.items()}


def compare_to_reference(chi, D, name):
    """Per cell: exact match with the reference table, else exactness of the difference."""
    K = chi.K
    J = chi.max_degree
    out = {}
    for cid, rows in reference_rows(name, J).items():
        c = K.index[cid]
        ref = translate_table(K, rows)
        diff = sub_elements(chi.values.get(c, {}), ref)
        res = {"match": not diff, "extra_terms": len(diff)}
        if diff:
            res["exact_difference"] = cyclic_exact(D, diff, K.closure_indices(c), J) is not None
        out[cid] = res
    return out
