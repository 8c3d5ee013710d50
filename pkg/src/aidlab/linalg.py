"""Exact linear algebra over a FieldSpec: RREF, solving, kernels, subspaces.

Matrices are dense lists of rows; the Leibniz systems that dominate the
derivation computations go through :func:`kernel_sparse`, which keeps rows
as {column: scalar} dicts.  Subspaces are stored as canonical RREF bases,
so equality of subspaces is equality of representations.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

from .fields import ExactError, FieldSpec, Scalar


class Matrix:
    """Dense matrix over one field. Entries are immutable after construction."""

    __slots__ = ("field", "entries", "rows", "cols")

    def __init__(self, field: FieldSpec, entries: Sequence[Sequence[Scalar]],
                 cols: Optional[int] = None):
        self.field = field
        rows = [tuple(r) for r in entries]
        self.entries = tuple(rows)
        self.rows = len(rows)
        if rows:
            self.cols = len(rows[0])
            if any(len(r) != self.cols for r in rows):
                raise ExactError("ragged matrix")
        else:
            self.cols = cols or 0

    @staticmethod
    def identity(field: FieldSpec, n: int) -> "Matrix":
        z, o = field.zero(), field.one()
        return Matrix(field, [[o if i == j else z for j in range(n)] for i in range(n)])

    @staticmethod
    def zero(field: FieldSpec, rows: int, cols: int) -> "Matrix":
        z = field.zero()
        return Matrix(field, [[z] * cols for _ in range(rows)], cols=cols)

    def mul_vec(self, v: Sequence[Scalar]) -> Tuple[Scalar, ...]:
        f = self.field
        out = []
        for row in self.entries:
            acc = f.zero()
            for a, x in zip(row, v):
                if not f.is_zero(a) and not f.is_zero(x):
                    acc = f.add(acc, f.mul(a, x))
            out.append(acc)
        return tuple(out)

    def matmul(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ExactError("shape mismatch")
        f = self.field
        ot = list(zip(*other.entries)) if other.entries else []
        data = []
        for row in self.entries:
            new = []
            for col in ot:
                acc = f.zero()
                for a, b in zip(row, col):
                    if not f.is_zero(a) and not f.is_zero(b):
                        acc = f.add(acc, f.mul(a, b))
                new.append(acc)
            data.append(new)
        return Matrix(f, data, cols=other.cols)

    def transpose(self) -> "Matrix":
        if not self.entries:
            return Matrix(self.field, [[] for _ in range(self.cols)], cols=0)
        return Matrix(self.field, list(zip(*self.entries)), cols=self.rows)

    def add(self, other: "Matrix") -> "Matrix":
        f = self.field
        return Matrix(f, [[f.add(a, b) for a, b in zip(r1, r2)]
                          for r1, r2 in zip(self.entries, other.entries)], cols=self.cols)

    def scale(self, c: Scalar) -> "Matrix":
        f = self.field
        return Matrix(f, [[f.mul(c, a) for a in r] for r in self.entries], cols=self.cols)

    def sub(self, other: "Matrix") -> "Matrix":
        f = self.field
        return Matrix(f, [[f.sub(a, b) for a, b in zip(r1, r2)]
                          for r1, r2 in zip(self.entries, other.entries)], cols=self.cols)

    def commutator(self, other: "Matrix") -> "Matrix":
        return self.matmul(other).sub(other.matmul(self))

    def is_zero(self) -> bool:
        f = self.field
        return all(f.is_zero(a) for r in self.entries for a in r)

    def column(self, j: int) -> Tuple[Scalar, ...]:
        return tuple(row[j] for row in self.entries)

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.field == other.field
                and self.entries == other.entries and self.cols == other.cols)

    def __hash__(self):
        return hash((self.field, self.entries, self.cols))

    def __repr__(self):
        return "Matrix(%dx%d over %r)" % (self.rows, self.cols, self.field)

    def to_json(self):
        f = self.field
        return [[f.scalar_to_json(a) for a in row] for row in self.entries]

    @staticmethod
    def from_json(field: FieldSpec, obj, cols: Optional[int] = None) -> "Matrix":
        return Matrix(field, [[field.scalar_from_json(a) for a in row] for row in obj],
                      cols=cols)


def _rref_rows(field: FieldSpec, rows: List[List[Scalar]], ncols: int):
    """In-place RREF; returns list of pivot columns."""
    f = field
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if not f.is_zero(rows[i][c]):
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = f.inv(rows[r][c])
        if not f.is_zero(f.sub(rows[r][c], f.one())):
            rows[r] = [f.mul(inv, a) for a in rows[r]]
        for i in range(nrows):
            if i != r and not f.is_zero(rows[i][c]):
                factor = rows[i][c]
                rows[i] = [f.sub(a, f.mul(factor, b)) for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return pivots


def rref(m: Matrix) -> Tuple[Matrix, int]:
    """Reduced row-echelon form and rank. Exact; no pivot tolerances."""
    rows = [list(r) for r in m.entries]
    pivots = _rref_rows(m.field, rows, m.cols)
    return Matrix(m.field, rows, cols=m.cols), len(pivots)


def rank(m: Matrix) -> int:
    return rref(m)[1]


def solve(m: Matrix, b: Sequence[Scalar]) -> Optional[Tuple[Scalar, ...]]:
    """One solution of m y = b, or None when the system is inconsistent.

    Free variables are set to zero, so the answer is schedule-deterministic.
    """
    if len(b) != m.rows:
        raise ExactError("rhs length mismatch")
    f = m.field
    rows = [list(r) + [bv] for r, bv in zip(m.entries, b)]
    if not rows:
        return tuple()
    pivots = _rref_rows(f, rows, m.cols + 1)
    if m.cols in pivots:
        return None
    sol = [f.zero()] * m.cols
    for r, c in enumerate(pivots):
        sol[c] = rows[r][m.cols]
    return tuple(sol)


def kernel(m: Matrix) -> List[Tuple[Scalar, ...]]:
    """Basis of the right kernel {y : m y = 0}, from the RREF free columns."""
    f = m.field
    rows = [list(r) for r in m.entries]
    pivots = _rref_rows(f, rows, m.cols)
    pivot_set = set(pivots)
    basis = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        vec = [f.zero()] * m.cols
        vec[free] = f.one()
        for r, c in enumerate(pivots):
            if not f.is_zero(rows[r][free]):
                vec[c] = f.neg(rows[r][free])
        basis.append(tuple(vec))
    return basis


def left_kernel(m: Matrix) -> List[Tuple[Scalar, ...]]:
    return kernel(m.transpose())


def kernel_sparse(rows: List[Dict[int, Scalar]], ncols: int,
                  field: FieldSpec) -> List[Tuple[Scalar, ...]]:
    """Right-kernel basis for a sparse system given as {col: coeff} rows.

    Straight column-order elimination; within a column the sparsest row is
    chosen to limit fill-in.  Exact over the field.
    """
    f = field
    work = [dict(r) for r in rows if r]
    col_rows: Dict[int, set] = {}
    for idx, r in enumerate(work):
        for c in r:
            col_rows.setdefault(c, set()).add(idx)
    eliminated: Dict[int, int] = {}  # pivot col -> row index
    used_rows = set()
    for c in range(ncols):
        touching = col_rows.get(c) or ()
        candidates = [i for i in touching
                      if i not in used_rows and c in work[i] and not f.is_zero(work[i][c])]
        if not candidates:
            continue
        piv = min(candidates, key=lambda i: (len(work[i]), i))
        prow = work[piv]
        inv = f.inv(prow[c])
        for k in list(prow):
            prow[k] = f.mul(inv, prow[k])
        prow[c] = f.one()
        for i in list(col_rows.get(c, ())):
            if i == piv or i in used_rows:
                continue
            row = work[i]
            factor = row.get(c)
            if factor is None or f.is_zero(factor):
                continue
            for k, v in prow.items():
                cur = row.get(k)
                nv = f.sub(cur, f.mul(factor, v)) if cur is not None else f.neg(f.mul(factor, v))
                if f.is_zero(nv):
                    if cur is not None:
                        del row[k]
                        col_rows[k].discard(i)
                else:
                    row[k] = nv
                    if cur is None:
                        col_rows.setdefault(k, set()).add(i)
        eliminated[c] = piv
        used_rows.add(piv)
    # back-substitute pivot rows against each other (full reduction)
    pivot_cols = sorted(eliminated)
    for idx, c in enumerate(pivot_cols):
        prow = work[eliminated[c]]
        for c2 in pivot_cols[idx + 1:]:
            factor = prow.get(c2)
            if factor is None or f.is_zero(factor):
                continue
            qrow = work[eliminated[c2]]
            for k, v in qrow.items():
                cur = prow.get(k)
                nv = f.sub(cur, f.mul(factor, v)) if cur is not None else f.neg(f.mul(factor, v))
                if f.is_zero(nv):
                    if cur is not None:
                        del prow[k]
                else:
                    prow[k] = nv
    basis = []
    pivot_set = set(pivot_cols)
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [f.zero()] * ncols
        vec[free] = f.one()
        for c in pivot_cols:
            v = work[eliminated[c]].get(free)
            if v is not None and not f.is_zero(v):
                vec[c] = f.neg(v)
        basis.append(tuple(vec))
    return basis


class Subspace:
    """Subspace of field^ambient, stored as a canonical RREF basis (rows)."""

    __slots__ = ("field", "ambient", "rows")

    def __init__(self, field: FieldSpec, ambient: int,
                 rows: Sequence[Sequence[Scalar]] = (), *, _canonical: bool = False):
        self.field = field
        self.ambient = ambient
        if _canonical:
            self.rows = tuple(tuple(r) for r in rows)
            return
        work = [list(r) for r in rows]
        for r in work:
            if len(r) != ambient:
                raise ExactError("vector length != ambient dimension")
        _rref_rows(field, work, ambient)
        f = field
        keep = [tuple(r) for r in work if any(not f.is_zero(a) for a in r)]
        self.rows = tuple(keep)

    @staticmethod
    def zero(field: FieldSpec, ambient: int) -> "Subspace":
        return Subspace(field, ambient, (), _canonical=True)

    @staticmethod
    def full(field: FieldSpec, ambient: int) -> "Subspace":
        z, o = field.zero(), field.one()
        rows = tuple(tuple(o if i == j else z for j in range(ambient)) for i in range(ambient))
        return Subspace(field, ambient, rows, _canonical=True)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def contains(self, w: Sequence[Scalar]) -> bool:
        if len(w) != self.ambient:
            raise ExactError("vector length mismatch")
        f = self.field
        v = list(w)
        for row in self.rows:
            lead = next(i for i, a in enumerate(row) if not f.is_zero(a))
            c = v[lead]
            if not f.is_zero(c):
                for i in range(lead, self.ambient):
                    v[i] = f.sub(v[i], f.mul(c, row[i]))
        return all(f.is_zero(a) for a in v)

    def reduce(self, w: Sequence[Scalar]) -> Tuple[Scalar, ...]:
        """Normal form of w modulo this subspace (pivot coordinates cleared)."""
        f = self.field
        v = list(w)
        for row in self.rows:
            lead = next(i for i, a in enumerate(row) if not f.is_zero(a))
            c = v[lead]
            if not f.is_zero(c):
                for i in range(lead, self.ambient):
                    v[i] = f.sub(v[i], f.mul(c, row[i]))
        return tuple(v)

    def sum(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace(self.field, self.ambient, self.rows + other.rows)

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check(other)
        # vectors a U = b V; kernel of the ambient x (p+q) matrix [U^T | -V^T]
        f = self.field
        p, q = self.dim, other.dim
        if p == 0 or q == 0:
            return Subspace.zero(f, self.ambient)
        cols = p + q
        m = []
        for i in range(self.ambient):
            row = [self.rows[a][i] for a in range(p)] + [f.neg(other.rows[b][i]) for b in range(q)]
            m.append(row)
        combos = kernel(Matrix(f, m, cols=cols))
        vecs = []
        for combo in combos:
            v = [f.zero()] * self.ambient
            for a in range(p):
                ca = combo[a]
                if not f.is_zero(ca):
                    for i in range(self.ambient):
                        v[i] = f.add(v[i], f.mul(ca, self.rows[a][i]))
            vecs.append(v)
        return Subspace(f, self.ambient, vecs)

    def is_subspace_of(self, other: "Subspace") -> bool:
        self._check(other)
        return all(other.contains(r) for r in self.rows)

    def _check(self, other: "Subspace"):
        if self.ambient != other.ambient or self.field != other.field:
            raise ExactError("ambient space mismatch")

    def basis_matrix(self) -> Matrix:
        return Matrix(self.field, self.rows, cols=self.ambient)

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.field == other.field
                and self.ambient == other.ambient and self.rows == other.rows)

    def __hash__(self):
        return hash((self.field, self.ambient, self.rows))

    def __repr__(self):
        return "Subspace(dim %d of %d)" % (self.dim, self.ambient)


def subspace_intersect(u: Subspace, v: Subspace) -> Subspace:
    return u.intersect(v)


def subspace_contains(u: Subspace, w: Sequence[Scalar]) -> bool:
    return u.contains(w)


def span(field: FieldSpec, ambient: int, vectors: Sequence[Sequence[Scalar]]) -> Subspace:
    return Subspace(field, ambient, vectors)
