"""Local A-infinity coalgebra structures on simplicial chains.

The higher components ``D_k`` are built by induction on the tensor degree
``k`` and, inside each degree, on the cell dimension.  On a cell the error
``E = sum_{i+j=k+1, j<k} D~_i D_j`` must be cancelled by ``D~_1 D_k``; since
the closure of a simplex is contractible, ``-E`` is a boundary for the
letterwise differential on words over that closure and the minimal-norm
preimage is taken.
"""
from dataclasses import dataclass, field

from ._rational import add_into
from .simplicial import aw_coproduct, symmetrize_coproduct, closure_is_contractible
from .tensor import (family_from_coproduct, extend_to_derivation,
                     square_zero_residual, shifted_boundary, ClosureSolver, NotExact)

COPRODUCTS = ("strict-aw", "symmetrized")


class ConstructionObstructed(RuntimeError):
    pass


@dataclass
class TraceEntry:
    degree: int
    dimension: int
    cells: int
    nonzero_corrections: int
    max_terms: int

    def as_dict(self):
        return dict(self.__dict__)


def diagonal(K, mode):
    if mode not in COPRODUCTS:
        raise ValueError("unknown coproduct mode %r" % (mode,))
    aw = aw_coproduct(K)
    return aw if mode == "strict-aw" else symmetrize_coproduct(K, aw)


def solver_cache(K, lin, tagged):
    cache = {}

    def get(cell):
        s = cache.get(cell)
        if s is None:
            s = cache[cell] = ClosureSolver(K, cell, lin, tagged=tagged)
        return s
    return get


def check_closures(K):
    for i in range(len(K)):
        if K.dims[i] > 0 and not closure_is_contractible(K, i):
            raise ConstructionObstructed("closure of %s is not contractible" % K.cells[i].id)


def construct_local_coalgebra(K, truncation=6, coproduct="strict-aw", check=True):
    """Local ``D_1 .. D_N`` extending the chosen diagonal with ``D^2 = 0``."""
    if truncation < 2:
        raise ValueError("truncation must be at least 2")
    if check:
        check_closures(K)
    D = family_from_coproduct(K, diagonal(K, coproduct), truncation, coproduct)
    lin = {c: {w[0]: v for w, v in img.items()} for c, img in shifted_boundary(K).items()}
    solvers = solver_cache(K, lin, tagged=False)
    order = sorted(range(len(K)), key=lambda c: (K.dims[c], c))
    for k in range(3, truncation + 1):
        comp = D.components[k]
        stats = {}
        for c in order:
            err = square_zero_residual(D, c, k)
            dim = K.dims[c]
            st = stats.setdefault(dim, [0, 0, 0])
            st[0] += 1
            if not err:
                continue
            if dim == 0:
                raise NotExact("error term does not vanish on vertex %s" % K.cells[c].id)
            rhs = {w: -v for w, v in err.items()}
            x = solvers(c).solve(rhs)
            if x:
                comp[c] = x
                st[1] += 1
                st[2] = max(st[2], len(x))
        for dim in sorted(stats):
            D.trace.append(TraceEntry(k, dim, *stats[dim]))
    return D


@dataclass
class SquareZeroReport:
    truncation: int
    residuals: dict = field(default_factory=dict)

    @property
    def ok(self):
        return not self.residuals

    def as_dict(self, K):
        ids = [c.id for c in K.cells]
        return {"check": "square-zero", "pass": self.ok,
                "nonzero": [{"arity": k, "cell": ids[c], "terms": len(r)}
                            for (k, c), r in sorted(self.residuals.items())]}


def verify_square_zero(D, truncation=None):
    """Expand ``D o D`` on every cell for output lengths ``1 .. N``.

    Independent of the construction: every pair ``D~_i D_j`` is expanded
    afresh through the Leibniz extension.
    """
    N = D.truncation if truncation is None else truncation
    parity = D.K.parity
    rep = SquareZeroReport(N)
    for c in range(len(D.K)):
        for m in range(1, N + 1):
            acc = {}
            for j in range(1, m + 1):
                i = m - j + 1
                inner = D.component(j, c)
                if not inner or i not in D.components:
                    continue
                part = extend_to_derivation(D.components[i], parity, inner)
                for w, v in part.items():
                    add_into(acc, w, v)
            if acc:
                rep.residuals[(m, c)] = acc
    return rep


def rescale(D, lam):
    """``D_k -> lam^{k-1} D_k``; preserves the square-zero condition."""
    out = D.copy()
    for k, comp in out.components.items():
        f = lam ** (k - 1)
        out.components[k] = {c: {w: v * f for w, v in t.items()} for c, t in comp.items()}
    return out
