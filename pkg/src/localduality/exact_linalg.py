"""Exact sparse linear algebra over the rationals.

Vectors are sparse ``dict`` objects ``index -> mpq`` internally; the public
functions also accept dense sequences.  Elimination is sparse Gaussian
elimination with exact ``mpq`` pivots, processing columns in a configurable
order so that basic solutions are reproducible.  A dense fraction-free
(Bareiss) routine is provided for integer rank/determinant checks.
"""
import heapq
from dataclasses import dataclass, field

from ._rational import Q, ZERO, add_into


class NoSolution(ArithmeticError):
    """Raised when ``b`` is not in the image of ``A``."""


class DimensionError(ValueError):
    pass


class RationalMatrix:
    """Sparse ``rows x cols`` matrix with exact entries."""

    __slots__ = ("rows", "cols", "entries", "_row_cache", "_col_cache")

    def __init__(self, rows, cols, entries=None):
        self.rows = int(rows)
        self.cols = int(cols)
        self.entries = {}
        self._row_cache = None
        self._col_cache = None
        if entries:
            for (i, j), v in entries.items():
                if not (0 <= i < self.rows and 0 <= j < self.cols):
                    raise DimensionError("entry (%d, %d) out of range" % (i, j))
                v = Q(v)
                if v:
                    self.entries[(i, j)] = v

    @classmethod
    def from_dense(cls, data):
        data = [list(r) for r in data]
        rows = len(data)
        cols = len(data[0]) if rows else 0
        ent = {}
        for i, r in enumerate(data):
            if len(r) != cols:
                raise DimensionError("ragged matrix")
            for j, v in enumerate(r):
                if v:
                    ent[(i, j)] = v
        return cls(rows, cols, ent)

    @classmethod
    def from_columns(cls, rows, columns):
        """Build from a list of sparse column dicts."""
        ent = {}
        for j, col in enumerate(columns):
            for i, v in col.items():
                ent[(i, j)] = v
        return cls(rows, len(columns), ent)

    @classmethod
    def from_rows(cls, cols, rows):
        ent = {}
        for i, row in enumerate(rows):
            for j, v in row.items():
                ent[(i, j)] = v
        return cls(len(rows), cols, ent)

    @classmethod
    def identity(cls, n):
        return cls(n, n, {(i, i): 1 for i in range(n)})

    def to_dense(self):
        out = [[ZERO] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def row_dicts(self):
        if self._row_cache is None:
            rows = [dict() for _ in range(self.rows)]
            for (i, j), v in self.entries.items():
                rows[i][j] = v
            self._row_cache = rows
        return self._row_cache

    def col_dicts(self):
        if self._col_cache is None:
            cols = [dict() for _ in range(self.cols)]
            for (i, j), v in self.entries.items():
                cols[j][i] = v
            self._col_cache = cols
        return self._col_cache

    @property
    def T(self):
        return RationalMatrix(self.cols, self.rows,
                              {(j, i): v for (i, j), v in self.entries.items()})

    def matvec(self, x):
        x = as_sparse(x, self.cols)
        out = {}
        cols = self.col_dicts()
        for j, xj in x.items():
            for i, a in cols[j].items():
                add_into(out, i, a * xj)
        return out

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise DimensionError("shape mismatch %dx%d @ %dx%d"
                                 % (self.rows, self.cols, other.rows, other.cols))
        out = {}
        orows = other.row_dicts()
        for (i, k), a in self.entries.items():
            for j, b in orows[k].items():
                add_into(out, (i, j), a * b)
        return RationalMatrix(self.rows, other.cols, out)

    def is_zero(self):
        return not self.entries

    def __eq__(self, other):
        return (isinstance(other, RationalMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __repr__(self):
        return "RationalMatrix(%d, %d, nnz=%d)" % (self.rows, self.cols, len(self.entries))


def as_sparse(x, n=None):
    if isinstance(x, dict):
        out = {k: Q(v) for k, v in x.items() if v}
    else:
        x = list(x)
        if n is not None and len(x) != n:
            raise DimensionError("vector of length %d, expected %d" % (len(x), n))
        out = {i: Q(v) for i, v in enumerate(x) if v}
    if n is not None:
        for k in out:
            if not (0 <= k < n):
                raise DimensionError("vector index %r out of range" % (k,))
    return out


def to_dense(x, n):
    out = [ZERO] * n
    for i, v in x.items():
        out[i] = v
    return out


# ---------------------------------------------------------------------------
# Sparse echelon form

class Echelon:
    """Incremental row-echelon form of a set of sparse rows.

    Rows are reduced against existing pivots in increasing column ``rank``
    (given by ``order``, a mapping column -> position).  Each stored pivot row
    is normalised to have coefficient 1 at its pivot column, and carries an
    optional right-hand side.
    """

    def __init__(self, order=None):
        self.order = order
        self.pivots = {}   # pivot col -> (row dict, rhs)

    def _key(self, col):
        if self.order is None:
            return col
        return self.order[col]

    def reduce(self, row, rhs=ZERO):
        row = dict(row)
        key = self._key
        heap = [(key(c), c) for c in row if c in self.pivots]
        heapq.heapify(heap)
        seen = set()
        while heap:
            _, c = heapq.heappop(heap)
            if c in seen:
                continue
            seen.add(c)
            coeff = row.get(c)
            if not coeff:
                continue
            prow, prhs = self.pivots[c]
            for j, v in prow.items():
                nv = row.get(j, ZERO) - coeff * v
                if nv:
                    row[j] = nv
                    if j != c and j in self.pivots and j not in seen:
                        heapq.heappush(heap, (key(j), j))
                else:
                    row.pop(j, None)
            rhs = rhs - coeff * prhs
        return row, rhs

    def add(self, row, rhs=ZERO):
        """Insert a row.  Returns False when it reduces to ``0 = rhs``.

        A zero row with nonzero ``rhs`` signals inconsistency and raises
        ``NoSolution``.
        """
        row, rhs = self.reduce(row, rhs)
        if not row:
            if rhs:
                raise NoSolution("inconsistent system")
            return False
        key = self._key
        piv = min(row, key=key)
        inv = 1 / row[piv]
        self.pivots[piv] = ({j: v * inv for j, v in row.items()}, rhs * inv)
        return True

    def rank(self):
        return len(self.pivots)

    def back_substitute(self, free_values=None):
        """Particular solution with free variables set from ``free_values``."""
        x = dict(free_values or {})
        for piv in sorted(self.pivots, key=self._key, reverse=True):
            prow, prhs = self.pivots[piv]
            val = prhs
            for j, v in prow.items():
                if j != piv:
                    xj = x.get(j)
                    if xj:
                        val -= v * xj
            if val:
                x[piv] = val
            else:
                x.pop(piv, None)
        return x


def _echelon_of_rows(rows, rhs=None, order=None):
    ech = Echelon(order)
    for i, r in enumerate(rows):
        ech.add(r, rhs.get(i, ZERO) if rhs else ZERO)
    return ech


def _order_map(column_order, ncols):
    if column_order is None:
        return None
    column_order = list(column_order)
    if sorted(column_order) != list(range(ncols)):
        raise DimensionError("column_order must be a permutation of the columns")
    return {c: i for i, c in enumerate(column_order)}


def solve_sparse(A, b, column_order=None):
    """Some ``x`` with ``A x = b`` as a sparse dict; raises ``NoSolution``.

    Free variables are set to zero, so the solution is supported on pivot
    columns chosen earliest in ``column_order``.
    """
    b = as_sparse(b, A.rows)
    ech = _echelon_of_rows(A.row_dicts(), b, _order_map(column_order, A.cols))
    return ech.back_substitute()


def solve(A, b, column_order=None):
    if not isinstance(A, RationalMatrix):
        A = RationalMatrix.from_dense(A)
    return to_dense(solve_sparse(A, b, column_order), A.cols)


def gram(A):
    """``A A^T`` as a RationalMatrix."""
    rows = A.row_dicts()
    cols = A.col_dicts()
    out = {}
    for i, ri in enumerate(rows):
        for k, a in ri.items():
            for j, c in cols[k].items():
                add_into(out, (i, j), a * c)
    return RationalMatrix(A.rows, A.rows, out)


def canonical_solve_sparse(A, b):
    """The unique solution of ``A x = b`` in the row space of ``A``.

    Computed as ``x = A^T y`` with ``A A^T y = b``; this is the minimal-norm
    solution for the basis-orthonormal inner product.
    """
    b = as_sparse(b, A.rows)
    if not b:
        return {}
    y = solve_sparse(gram(A), b)
    return A.T.matvec(y)


def canonical_solve(A, b):
    if not isinstance(A, RationalMatrix):
        A = RationalMatrix.from_dense(A)
    return to_dense(canonical_solve_sparse(A, b), A.cols)


def rref_rows(rows, ncols, order=None):
    """Fully reduced row echelon basis of the span of ``rows``."""
    ech = _echelon_of_rows(rows, order=order)
    key = ech._key
    pivs = sorted(ech.pivots, key=key)
    # full back-reduction
    reduced = {}
    for p in reversed(pivs):
        row = dict(ech.pivots[p][0])
        for q in list(row):
            if q != p and q in reduced:
                c = row.get(q)
                if c:
                    for j, v in reduced[q].items():
                        add_into(row, j, -c * v)
        reduced[p] = row
    return [reduced[p] for p in pivs], pivs


def rank(A):
    if not isinstance(A, RationalMatrix):
        A = RationalMatrix.from_dense(A)
    return _echelon_of_rows(A.row_dicts()).rank()


def kernel_basis_sparse(A):
    rows, pivs = rref_rows(A.row_dicts(), A.cols)
    pivset = set(pivs)
    basis = []
    for f in range(A.cols):
        if f in pivset:
            continue
        v = {f: Q(1)}
        for p, r in zip(pivs, rows):
            c = r.get(f)
            if c:
                v[p] = -c
        basis.append(v)
    return basis


def kernel_basis(A):
    if not isinstance(A, RationalMatrix):
        A = RationalMatrix.from_dense(A)
    return [to_dense(v, A.cols) for v in kernel_basis_sparse(A)]


def image_basis_sparse(A):
    rows, _ = rref_rows(A.col_dicts(), A.rows)
    return rows


def image_basis(A):
    if not isinstance(A, RationalMatrix):
        A = RationalMatrix.from_dense(A)
    return [to_dense(v, A.rows) for v in image_basis_sparse(A)]


def span_rank(vectors):
    return _echelon_of_rows(vectors).rank()


def in_span(vectors, v):
    ech = _echelon_of_rows(vectors)
    r, _ = ech.reduce(v)
    return not r


def coordinates(vectors, v):
    """Coefficients ``c`` with ``sum(c_i vectors[i]) = v`` (raises NoSolution)."""
    keys = sorted({k for vec in vectors for k in vec} | set(v), key=_sort_key)
    idx = {k: i for i, k in enumerate(keys)}
    A = RationalMatrix.from_columns(len(keys), [{idx[k]: c for k, c in vec.items()}
                                                for vec in vectors])
    return solve_sparse(A, {idx[k]: c for k, c in v.items()})


def _sort_key(k):
    return repr(k) if not isinstance(k, int) else k


# ---------------------------------------------------------------------------
# Dense fraction-free elimination (integer matrices)

def bareiss_rank(data):
    """Rank of an integer matrix by fraction-free Bareiss elimination."""
    M = [[int(v) for v in r] for r in data]
    n = len(M)
    m = len(M[0]) if n else 0
    r = 0
    prev = 1
    for c in range(m):
        piv = next((i for i in range(r, n) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        for i in range(r + 1, n):
            for j in range(c + 1, m):
                M[i][j] = (M[i][j] * M[r][c] - M[i][c] * M[r][j]) // prev
            M[i][c] = 0
        prev = M[r][c]
        r += 1
        if r == n:
            break
    return r


def bareiss_det(data):
    M = [[int(v) for v in r] for r in data]
    n = len(M)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if M[i][k]), None)
            if sw is None:
                return 0
            M[k], M[sw] = M[sw], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1] if n else 1


# ---------------------------------------------------------------------------
# Homology and Hodge splitting

@dataclass
class DegreeHomology:
    betti: int
    cycle_basis: list
    boundary_basis: list
    harmonic_basis: list


@dataclass
class HomologyResult:
    degrees: dict = field(default_factory=dict)

    @property
    def betti(self):
        return {k: h.betti for k, h in sorted(self.degrees.items())}

    def betti_sequence(self):
        if not self.degrees:
            return ()
        lo, hi = min(self.degrees), max(self.degrees)
        return tuple(self.degrees[k].betti if k in self.degrees else 0
                     for k in range(lo, hi + 1))

    def __getitem__(self, k):
        return self.degrees[k]


def stack_rows(*mats):
    cols = mats[0].cols
    rows = []
    for M in mats:
        if M.cols != cols:
            raise DimensionError("column mismatch when stacking")
        rows.extend(M.row_dicts())
    return RationalMatrix.from_rows(cols, rows)


def homology_of_complex(differentials, dims=None):
    """Homology of ``... -> C_k --d_k--> C_{k-1} -> ...``.

    ``differentials`` maps degree ``k`` to the matrix of ``d_k`` (rows indexed
    by ``C_{k-1}``, columns by ``C_k``).  ``dims`` optionally gives ``dim C_k``
    for degrees without a differential.
    """
    dims = dict(dims or {})
    for k, d in differentials.items():
        dims.setdefault(k, d.cols)
        dims.setdefault(k - 1, d.rows)
        if dims[k] != d.cols or dims[k - 1] != d.rows:
            raise DimensionError("differential d_%d has inconsistent shape" % k)
    for k, d in differentials.items():
        nxt = differentials.get(k + 1)
        if nxt is not None and not (d @ nxt).is_zero():
            raise ValueError("d_%d o d_%d != 0" % (k, k + 1))
    result = HomologyResult()
    for k in sorted(dims):
        n = dims[k]
        d_out = differentials.get(k, RationalMatrix(dims.get(k - 1, 0), n))
        d_in = differentials.get(k + 1, RationalMatrix(n, dims.get(k + 1, 0)))
        cycles = kernel_basis_sparse(d_out)
        bounds = image_basis_sparse(d_in)
        harm = kernel_basis_sparse(stack_rows(d_out, d_in.T))
        betti = len(cycles) - len(bounds)
        if len(harm) != betti:
            raise ArithmeticError("harmonic dimension mismatch in degree %d" % k)
        result.degrees[k] = DegreeHomology(betti, cycles, bounds, harm)
    return result


@dataclass
class HodgeSplit:
    """``M = P + X + Y`` for a square-zero ``d`` on ``M``.

    ``y_basis[i]`` maps to ``x_basis[i]`` under ``d``.
    """
    p_basis: list
    x_basis: list
    y_basis: list

    def change_of_basis(self, n):
        """Columns = new basis vectors (P, then X, then Y) in old coordinates."""
        return RationalMatrix.from_columns(n, self.p_basis + self.x_basis + self.y_basis)


def hodge_split(d):
    """Hodge decomposition for the basis-orthonormal inner product."""
    if d.rows != d.cols:
        raise DimensionError("hodge_split needs a square differential")
    if not (d @ d).is_zero():
        raise ValueError("d o d != 0")
    n = d.rows
    p_basis = kernel_basis_sparse(stack_rows(d, d.T))
    y_basis = image_basis_sparse(d.T)
    x_basis = [d.matvec(y) for y in y_basis]
    total = span_rank(p_basis + x_basis + y_basis)
    if total != n or len(p_basis) + 2 * len(y_basis) != n:
        raise ArithmeticError("Hodge decomposition is not a direct sum")
    return HodgeSplit(p_basis, x_basis, y_basis)


def inverse(A):
    """Exact inverse of a square RationalMatrix (raises NoSolution if singular)."""
    n = A.rows
    if A.cols != n:
        raise DimensionError("not square")
    cols = []
    ech = _echelon_of_rows(A.row_dicts())
    if ech.rank() != n:
        raise NoSolution("matrix is singular")
    for j in range(n):
        cols.append(solve_sparse(A, {j: 1}))
    return RationalMatrix.from_columns(n, cols)


class CoordinateSystem:
    """Coordinates with respect to a fixed list of independent sparse vectors.

    The vectors are eliminated once, each pivot row remembering which
    combination of the inputs produced it, so later coordinate queries cost
    one reduction.
    """

    def __init__(self, vectors):
        self.size = len(vectors)
        self.pivots = {}
        for i, v in enumerate(vectors):
            row, prov = self._reduce(dict(v), {i: Q(1)})
            if not row:
                raise DimensionError("vector %d is dependent on the previous ones" % i)
            piv = min(row, key=_sort_key)
            inv = 1 / row[piv]
            self.pivots[piv] = ({k: c * inv for k, c in row.items()},
                                {k: c * inv for k, c in prov.items()})

    def _reduce(self, row, prov):
        changed = True
        while changed:
            changed = False
            for col in sorted((c for c in row if c in self.pivots), key=_sort_key):
                coeff = row.get(col)
                if not coeff:
                    continue
                prow, pprov = self.pivots[col]
                for k, c in prow.items():
                    add_into(row, k, -coeff * c)
                for k, c in pprov.items():
                    add_into(prov, k, -coeff * c)
                changed = True
        return row, prov

    def coordinates(self, v):
        """``c`` with ``sum(c_i vectors[i]) = v``; raises NoSolution outside the span."""
        row, prov = self._reduce(dict(v), {})
        if row:
            raise NoSolution("vector is not in the span")
        return {k: -c for k, c in prov.items()}
