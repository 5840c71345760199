"""Exact dense linear algebra over a field object.

Everything here is deterministic: reduced row echelon form is the canonical
form for matrices and stored subspaces, so equal subspaces compare equal as
data.  Dimensions are desk scale; no attempt at sparsity.
"""

from __future__ import annotations


class Mat:
    """Immutable-by-convention dense matrix over a field."""

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field, rows: int, cols: int, data):
        data = tuple(tuple(row) for row in data)
        if len(data) != rows or any(len(r) != cols for r in data):
            raise ValueError("shape mismatch: %dx%d vs data" % (rows, cols))
        self.field = field
        self.rows = rows
        self.cols = cols
        self.data = data

    @classmethod
    def from_rows(cls, field, data):
        data = [list(r) for r in data]
        rows = len(data)
        cols = len(data[0]) if data else 0
        return cls(field, rows, cols, data)

    @classmethod
    def zeros(cls, field, rows, cols):
        z = field.zero
        return cls(field, rows, cols, [[z] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, field, n):
        z, o = field.zero, field.one
        return cls(field, n, n, [[o if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def column(cls, field, vec):
        return cls(field, len(vec), 1, [[x] for x in vec])

    def col(self, j):
        return tuple(self.data[i][j] for i in range(self.rows))

    def columns(self):
        return [self.col(j) for j in range(self.cols)]

    def mul(self, other: "Mat") -> "Mat":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch in matrix product")
        F = self.field
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = F.zero
                for k in range(self.cols):
                    acc = F.add(acc, F.mul(self.data[i][k], other.data[k][j]))
                row.append(acc)
            out.append(row)
        return Mat(F, self.rows, other.cols, out)

    def apply(self, vec):
        """Matrix times coordinate vector (tuple in, tuple out)."""
        if len(vec) != self.cols:
            raise ValueError("vector length %d, expected %d" % (len(vec), self.cols))
        F = self.field
        out = []
        for i in range(self.rows):
            acc = F.zero
            for k in range(self.cols):
                acc = F.add(acc, F.mul(self.data[i][k], vec[k]))
            out.append(acc)
        return tuple(out)

    def add(self, other: "Mat") -> "Mat":
        F = self.field
        return Mat(F, self.rows, self.cols,
                   [[F.add(a, b) for a, b in zip(r1, r2)]
                    for r1, r2 in zip(self.data, other.data)])

    def scale(self, c) -> "Mat":
        F = self.field
        return Mat(F, self.rows, self.cols, [[F.mul(c, x) for x in r] for r in self.data])

    def neg(self) -> "Mat":
        return self.scale(self.field.neg(self.field.one))

    def transpose(self) -> "Mat":
        return Mat(self.field, self.cols, self.rows,
                   [[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def hstack(self, other: "Mat") -> "Mat":
        if self.rows != other.rows:
            raise ValueError("row mismatch in hstack")
        return Mat(self.field, self.rows, self.cols + other.cols,
                   [r1 + r2 for r1, r2 in zip(self.data, other.data)])

    def vstack(self, other: "Mat") -> "Mat":
        if self.cols != other.cols:
            raise ValueError("column mismatch in vstack")
        return Mat(self.field, self.rows + other.rows, self.cols, self.data + other.data)

    def is_zero(self) -> bool:
        F = self.field
        return all(F.is_zero(x) for r in self.data for x in r)

    def __eq__(self, other):
        return (isinstance(other, Mat) and self.field == other.field
                and self.rows == other.rows and self.cols == other.cols
                and self.data == other.data)

    def __hash__(self):
        return hash((self.rows, self.cols, self.data))

    def __repr__(self):
        body = "; ".join(" ".join(self.field.fmt(x) for x in r) for r in self.data)
        return "Mat(%dx%d: %s)" % (self.rows, self.cols, body)


def rref(m: Mat):
    """Reduced row echelon form; returns (rref_matrix, pivot_columns)."""
    F = m.field
    rows = [list(r) for r in m.data]
    pivots = []
    r = 0
    for c in range(m.cols):
        pr = None
        for i in range(r, m.rows):
            if not F.is_zero(rows[i][c]):
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = F.inv(rows[r][c])
        rows[r] = [F.mul(inv, x) for x in rows[r]]
        for i in range(m.rows):
            if i != r and not F.is_zero(rows[i][c]):
                f = rows[i][c]
                rows[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == m.rows:
            break
    return Mat(F, m.rows, m.cols, rows), tuple(pivots)


def rank(m: Mat) -> int:
    return len(rref(m)[1])


def solve(a: Mat, b: Mat):
    """Solve a @ x = b; returns the canonical echelon particular solution or None.

    Free variables are set to zero, so the answer is deterministic.
    """
    if a.rows != b.rows:
        raise ValueError("solve: a has %d rows, b has %d" % (a.rows, b.rows))
    F = a.field
    aug, pivots = rref(a.hstack(b))
    for c in pivots:
        if c >= a.cols:
            return None
    piv_rows = {c: i for i, c in enumerate(pivots)}
    out = []
    for j in range(b.cols):
        col = [F.zero] * a.cols
        for c, i in piv_rows.items():
            col[c] = aug.data[i][a.cols + j]
        out.append(col)
    return Mat(F, a.cols, b.cols, [[out[j][i] for j in range(b.cols)] for i in range(a.cols)])


def nullspace(a: Mat):
    """Canonical nullspace basis (one vector per free column)."""
    F = a.field
    R, pivots = rref(a)
    piv_set = set(pivots)
    piv_rows = {c: i for i, c in enumerate(pivots)}
    basis = []
    for free in range(a.cols):
        if free in piv_set:
            continue
        v = [F.zero] * a.cols
        v[free] = F.one
        for c, i in piv_rows.items():
            v[c] = F.neg(R.data[i][free])
        basis.append(tuple(v))
    return basis


class SubspaceBasis:
    """A subspace of k^n stored by its canonical reduced echelon basis."""

    __slots__ = ("field", "ambient", "rows", "pivots")

    def __init__(self, field, ambient: int, rows, pivots):
        self.field = field
        self.ambient = ambient
        self.rows = tuple(tuple(r) for r in rows)
        self.pivots = tuple(pivots)

    @classmethod
    def from_vectors(cls, field, ambient: int, vectors):
        vectors = [tuple(v) for v in vectors]
        for v in vectors:
            if len(v) != ambient:
                raise ValueError("vector length %d in ambient %d" % (len(v), ambient))
        if not vectors:
            return cls(field, ambient, (), ())
        R, pivots = rref(Mat.from_rows(field, vectors))
        rows = [R.data[i] for i in range(len(pivots))]
        return cls(field, ambient, rows, pivots)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def reduce(self, vec):
        """Canonical coset representative of vec modulo this subspace."""
        F = self.field
        v = list(vec)
        for row, p in zip(self.rows, self.pivots):
            c = v[p]
            if not F.is_zero(c):
                v = [F.sub(x, F.mul(c, y)) for x, y in zip(v, row)]
        return tuple(v)

    def contains_vector(self, vec) -> bool:
        F = self.field
        return all(F.is_zero(x) for x in self.reduce(vec))

    def contains(self, other: "SubspaceBasis") -> bool:
        return all(self.contains_vector(v) for v in other.rows)

    def sum(self, other: "SubspaceBasis") -> "SubspaceBasis":
        if self.ambient != other.ambient:
            raise ValueError("ambient mismatch")
        return SubspaceBasis.from_vectors(self.field, self.ambient, self.rows + other.rows)

    def intersection(self, other: "SubspaceBasis") -> "SubspaceBasis":
        """Zassenhaus: row reduce [U|U; V|0], read the lower-right block."""
        if self.ambient != other.ambient:
            raise ValueError("ambient mismatch")
        F = self.field
        n = self.ambient
        z = [F.zero] * n
        block = [list(r) + list(r) for r in self.rows] + [list(r) + z for r in other.rows]
        if not block:
            return SubspaceBasis.from_vectors(F, n, [])
        R, pivots = rref(Mat.from_rows(F, block))
        out = []
        for i in range(len(pivots)):
            if pivots[i] >= n:
                out.append(R.data[i][n:])
        return SubspaceBasis.from_vectors(F, n, out)

    def complement_coords(self):
        """Indices of the canonical complementary coordinate subspace."""
        piv = set(self.pivots)
        return tuple(i for i in range(self.ambient) if i not in piv)

    def coset_coords(self, vec):
        """Coordinates of vec + W in the canonical complement basis."""
        red = self.reduce(vec)
        return tuple(red[i] for i in self.complement_coords())

    def quotient_dim(self) -> int:
        return self.ambient - self.dim

    def __eq__(self, other):
        return (isinstance(other, SubspaceBasis) and self.field == other.field
                and self.ambient == other.ambient and self.rows == other.rows)

    def __hash__(self):
        return hash((self.ambient, self.rows))

    def __repr__(self):
        return "SubspaceBasis(dim %d in k^%d)" % (self.dim, self.ambient)


def subspace_ops(u: SubspaceBasis, v: SubspaceBasis):
    """Sum, intersection, containment (v within u) and codimension of u."""
    if u.ambient != v.ambient:
        raise ValueError("ambient mismatch: %d vs %d" % (u.ambient, v.ambient))
    return {
        "sum": u.sum(v),
        "intersection": u.intersection(v),
        "contains": u.contains(v),
        "quotient_dim": u.quotient_dim(),
    }


def invert(m: Mat):
    """Two-sided inverse of a square matrix, or None."""
    if m.rows != m.cols:
        return None
    sol = solve(m, Mat.identity(m.field, m.rows))
    if sol is None:
        return None
    if not m.mul(sol).__eq__(Mat.identity(m.field, m.rows)):
        return None
    return sol
