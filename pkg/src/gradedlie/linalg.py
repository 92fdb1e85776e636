"""Exact linear algebra over the rationals.

Sparse matrices of ``fractions.Fraction`` entries with row reduction,
kernels, images, solvers, positive-definiteness tests and Gram-orthogonal
projections.  No floating point anywhere; every answer is exact.

Row reduction clears denominators row by row and runs an integer
Gauss-Jordan kernel (compiled when available, see ``_echelon``), then
divides each pivot row by its pivot, which yields the unique reduced row
echelon form over the rationals.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Optional, Sequence

from gradedlie._echelon import echelon
from gradedlie.errors import (
    DimensionMismatchError,
    NonSymmetricError,
    NotPositiveDefiniteError,
    SingularMatrixError,
)

Q = Fraction
ZERO = Fraction(0)
ONE = Fraction(1)

Vector = tuple[Fraction, ...]


def vec(values: Iterable) -> Vector:
    return tuple(Fraction(v) for v in values)


def zero_vec(n: int) -> Vector:
    return (ZERO,) * n


def unit_vec(n: int, i: int) -> Vector:
    return tuple(ONE if k == i else ZERO for k in range(n))


def vadd(a: Sequence[Fraction], b: Sequence[Fraction]) -> Vector:
    return tuple(x + y for x, y in zip(a, b, strict=True))


def vsub(a: Sequence[Fraction], b: Sequence[Fraction]) -> Vector:
    return tuple(x - y for x, y in zip(a, b, strict=True))


def vscale(c: Fraction, a: Sequence[Fraction]) -> Vector:
    return tuple(c * x for x in a)


def is_zero_vec(a: Sequence[Fraction]) -> bool:
    return all(x == 0 for x in a)


class Matrix:
    """Immutable sparse rational matrix keyed by (row, col); no stored zeros."""

    __slots__ = ("rows", "cols", "entries", "_row_index")

    def __init__(self, rows: int, cols: int, entries: Optional[dict] = None):
        self.rows = rows
        self.cols = cols
        ents = {}
        if entries:
            for (i, j), v in entries.items():
                v = Fraction(v)
                if v != 0:
                    if not (0 <= i < rows and 0 <= j < cols):
                        raise DimensionMismatchError(f"entry ({i},{j}) outside {rows}x{cols}")
                    ents[(i, j)] = v
        self.entries = ents
        self._row_index = None

    @classmethod
    def from_rows(cls, data: Sequence[Sequence]) -> "Matrix":
        rows = len(data)
        cols = len(data[0]) if rows else 0
        ents = {}
        for i, row in enumerate(data):
            if len(row) != cols:
                raise DimensionMismatchError("ragged rows")
            for j, v in enumerate(row):
                v = Fraction(v)
                if v != 0:
                    ents[(i, j)] = v
        return cls(rows, cols, ents)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: Optional[int] = None) -> "Matrix":
        ncols = len(columns)
        if nrows is None:
            nrows = len(columns[0]) if ncols else 0
        ents = {}
        for j, col in enumerate(columns):
            for i, v in enumerate(col):
                v = Fraction(v)
                if v != 0:
                    ents[(i, j)] = v
        return cls(nrows, ncols, ents)

    @classmethod
    def zero(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols, {})

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, {(i, i): ONE for i in range(n)})

    @classmethod
    def diagonal(cls, diag: Sequence) -> "Matrix":
        n = len(diag)
        return cls(n, n, {(i, i): Fraction(d) for i, d in enumerate(diag)})

    def __getitem__(self, key) -> Fraction:
        return self.entries.get(key, ZERO)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.rows, self.cols, frozenset(self.entries.items())))

    def __repr__(self) -> str:
        return f"Matrix({self.rows}x{self.cols}, nnz={len(self.entries)})"

    def is_zero(self) -> bool:
        return not self.entries

    def nnz(self) -> int:
        return len(self.entries)

    def row_index(self) -> dict:
        """row -> list of (col, value), built lazily for sparse products."""
        if self._row_index is None:
            idx: dict = {}
            for (i, j), v in self.entries.items():
                idx.setdefault(i, []).append((j, v))
            self._row_index = idx
        return self._row_index

    def dense_rows(self) -> list[list[Fraction]]:
        data = [[ZERO] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            data[i][j] = v
        return data

    def row(self, i: int) -> Vector:
        out = [ZERO] * self.cols
        for (j, v) in self.row_index().get(i, ()):
            out[j] = v
        return tuple(out)

    def column(self, j: int) -> Vector:
        out = [ZERO] * self.rows
        for (i, jj), v in self.entries.items():
            if jj == j:
                out[i] = v
        return tuple(out)

    def transpose(self) -> "Matrix":
        return Matrix(self.cols, self.rows, {(j, i): v for (i, j), v in self.entries.items()})

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        ents = dict(self.entries)
        for k, v in other.entries.items():
            ents[k] = ents.get(k, ZERO) + v
        return Matrix(self.rows, self.cols, ents)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        ents = dict(self.entries)
        for k, v in other.entries.items():
            ents[k] = ents.get(k, ZERO) - v
        return Matrix(self.rows, self.cols, ents)

    def __neg__(self) -> "Matrix":
        return Matrix(self.rows, self.cols, {k: -v for k, v in self.entries.items()})

    def scale(self, c) -> "Matrix":
        c = Fraction(c)
        return Matrix(self.rows, self.cols, {k: c * v for k, v in self.entries.items()})

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise DimensionMismatchError(f"{self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        bx = other.row_index()
        acc: dict = {}
        for (i, k), a in self.entries.items():
            brow = bx.get(k)
            if not brow:
                continue
            for j, b in brow:
                key = (i, j)
                acc[key] = acc.get(key, ZERO) + a * b
        return Matrix(self.rows, other.cols, acc)

    def apply(self, v: Sequence[Fraction]) -> Vector:
        if len(v) != self.cols:
            raise DimensionMismatchError(f"matrix cols {self.cols}, vector len {len(v)}")
        out = [ZERO] * self.rows
        for (i, j), a in self.entries.items():
            x = v[j]
            if x != 0:
                out[i] += a * x
        return tuple(out)

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "Matrix":
        rpos = {r: p for p, r in enumerate(row_idx)}
        cpos = {c: p for p, c in enumerate(col_idx)}
        ents = {}
        for (i, j), v in self.entries.items():
            if i in rpos and j in cpos:
                ents[(rpos[i], cpos[j])] = v
        return Matrix(len(row_idx), len(col_idx), ents)

    def is_symmetric(self) -> bool:
        if self.rows != self.cols:
            return False
        for (i, j), v in self.entries.items():
            if self.entries.get((j, i), ZERO) != v:
                return False
        return True

    def _check_same_shape(self, other: "Matrix"):
        if self.rows != other.rows or self.cols != other.cols:
            raise DimensionMismatchError(
                f"{self.rows}x{self.cols} vs {other.rows}x{other.cols}"
            )


def hstack(a: Matrix, b: Matrix) -> Matrix:
    if a.rows != b.rows:
        raise DimensionMismatchError("hstack row mismatch")
    ents = dict(a.entries)
    for (i, j), v in b.entries.items():
        ents[(i, j + a.cols)] = v
    return Matrix(a.rows, a.cols + b.cols, ents)


def vstack(a: Matrix, b: Matrix) -> Matrix:
    if a.cols != b.cols:
        raise DimensionMismatchError("vstack col mismatch")
    ents = dict(a.entries)
    for (i, j), v in b.entries.items():
        ents[(i + a.rows, j)] = v
    return Matrix(a.rows + b.rows, a.cols, ents)


def _integer_rows(m: Matrix, extra: Optional[Matrix] = None) -> list[list[int]]:
    """Dense integer rows of [m | extra], denominators cleared per row."""
    ncols = m.cols + (extra.cols if extra is not None else 0)
    out = []
    for i in range(m.rows):
        row = [ZERO] * ncols
        for (j, v) in m.row_index().get(i, ()):
            row[j] = v
        if extra is not None:
            for (j, v) in extra.row_index().get(i, ()):
                row[m.cols + j] = v
        denom = 1
        for v in row:
            if v != 0:
                denom = lcm(denom, v.denominator)
        out.append([int(v * denom) for v in row])
    return out


class RrefResult:
    __slots__ = ("matrix", "pivots", "rank")

    def __init__(self, matrix: Matrix, pivots: tuple[int, ...]):
        self.matrix = matrix
        self.pivots = pivots
        self.rank = len(pivots)


def rref(m: Matrix) -> RrefResult:
    """Unique reduced row echelon form, pivot columns, rank."""
    rows = _integer_rows(m)
    pivots = echelon(rows, m.cols, m.cols)
    ents = {}
    for r, c in enumerate(pivots):
        p = rows[r][c]
        for j in range(c, m.cols):
            v = rows[r][j]
            if v:
                ents[(r, j)] = Fraction(v, p)
    return RrefResult(Matrix(m.rows, m.cols, ents), tuple(pivots))


def rank(m: Matrix) -> int:
    rows = _integer_rows(m)
    return len(echelon(rows, m.cols, m.cols))


class Subspace:
    """A subspace of Q^n given by a list of independent basis vectors."""

    __slots__ = ("ambient_dim", "basis")

    def __init__(self, ambient_dim: int, basis: Sequence[Sequence]):
        self.ambient_dim = ambient_dim
        self.basis = tuple(vec(b) for b in basis)
        for b in self.basis:
            if len(b) != ambient_dim:
                raise DimensionMismatchError("basis vector length != ambient dim")

    @property
    def dim(self) -> int:
        return len(self.basis)

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, [])

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, [unit_vec(ambient_dim, i) for i in range(ambient_dim)])

    def matrix(self) -> Matrix:
        """Basis vectors as columns (ambient_dim x dim)."""
        return Matrix.from_columns(self.basis, nrows=self.ambient_dim)

    def contains(self, v: Sequence[Fraction]) -> bool:
        if is_zero_vec(v):
            return True
        if not self.basis:
            return False
        return solve(self.matrix(), vec(v)) is not None

    def canonical(self) -> tuple[Vector, ...]:
        """RREF-reduced basis; equal subspaces give equal canonical bases."""
        if not self.basis:
            return ()
        red = rref(Matrix.from_rows(self.basis))
        return tuple(red.matrix.row(i) for i in range(red.rank))

    def same_as(self, other: "Subspace") -> bool:
        return self.ambient_dim == other.ambient_dim and self.canonical() == other.canonical()

    def __repr__(self):
        return f"Subspace(dim={self.dim} of {self.ambient_dim})"


def kernel_basis(m: Matrix) -> Subspace:
    """Exact basis of {v : m v = 0}; dim = cols - rank."""
    red = rref(m)
    pivots = set(red.pivots)
    free_cols = [c for c in range(m.cols) if c not in pivots]
    pivot_row = {c: r for r, c in enumerate(red.pivots)}
    basis = []
    for fc in free_cols:
        v = [ZERO] * m.cols
        v[fc] = ONE
        for c in red.pivots:
            v[c] = -red.matrix[(pivot_row[c], fc)]
        basis.append(v)
    return Subspace(m.cols, basis)


def image_basis(m: Matrix) -> Subspace:
    """Column-space basis: the original columns at the pivot positions."""
    red = rref(m)
    return Subspace(m.rows, [m.column(c) for c in red.pivots])


def solve(m: Matrix, rhs: Sequence[Fraction]) -> Optional[Vector]:
    """One exact solution of m x = rhs (free variables 0), or None."""
    if len(rhs) != m.rows:
        raise DimensionMismatchError("rhs length != rows")
    aug = Matrix.from_columns([vec(rhs)], nrows=m.rows)
    rows = _integer_rows(m, extra=aug)
    pivots = echelon(rows, m.cols + 1, m.cols)
    nrank = len(pivots)
    for r in range(nrank, m.rows):
        if rows[r][m.cols] != 0:
            return None
    x = [ZERO] * m.cols
    for r, c in enumerate(pivots):
        x[c] = Fraction(rows[r][m.cols], rows[r][c])
    return tuple(x)


class LinearSolver:
    """Factor a matrix once, then solve m x = b for many right-hand sides.

    Runs Gauss-Jordan on [m | I]; solving a new b is a matrix-vector product
    plus a consistency scan, O(rows * cols) per call.
    """

    def __init__(self, m: Matrix):
        self.m = m
        rows = _integer_rows(m, extra=Matrix.identity(m.rows))
        self.pivots = tuple(echelon(rows, m.cols + m.rows, m.cols))
        self.rank = len(self.pivots)
        self._rows = rows

    def solve(self, rhs: Sequence[Fraction]) -> Optional[Vector]:
        if len(rhs) != self.m.rows:
            raise DimensionMismatchError("rhs length != rows")
        n = self.m.cols
        x = [ZERO] * n
        for r, c in enumerate(self.pivots):
            row = self._rows[r]
            s = ZERO
            for j in range(self.m.rows):
                t = row[n + j]
                if t:
                    s += t * rhs[j]
            x[c] = s / row[c]
        for r in range(self.rank, self.m.rows):
            row = self._rows[r]
            s = ZERO
            for j in range(self.m.rows):
                t = row[n + j]
                if t:
                    s += t * rhs[j]
            if s != 0:
                return None
        return tuple(x)


def inverse(m: Matrix) -> Matrix:
    if m.rows != m.cols:
        raise DimensionMismatchError("inverse of non-square matrix")
    if m.rows == 0:
        return Matrix.zero(0, 0)
    diag = _diagonal_or_none(m)
    if diag is not None:
        if any(d == 0 for d in diag):
            raise SingularMatrixError("zero diagonal entry")
        return Matrix.diagonal([1 / d for d in diag])
    rows = _integer_rows(m, extra=Matrix.identity(m.rows))
    pivots = echelon(rows, 2 * m.rows, m.rows)
    if len(pivots) != m.rows:
        raise SingularMatrixError(f"rank {len(pivots)} < {m.rows}")
    n = m.rows
    ents = {}
    for r in range(n):
        p = rows[r][pivots[r]]
        for j in range(n):
            v = rows[r][n + j]
            if v:
                ents[(r, j)] = Fraction(v, p)
    return Matrix(n, n, ents)


def _diagonal_or_none(m: Matrix):
    for (i, j) in m.entries:
        if i != j:
            return None
    return [m[(i, i)] for i in range(m.rows)]


def is_positive_definite(g: Matrix) -> bool:
    """Exact test via LDL^T pivots; raises NonSymmetricError if g != g^T."""
    if g.rows != g.cols:
        raise NonSymmetricError("matrix not square")
    if not g.is_symmetric():
        raise NonSymmetricError("matrix not symmetric")
    n = g.rows
    if n == 0:
        return True
    a = g.dense_rows()
    for k in range(n):
        d = a[k][k]
        if d <= 0:
            return False
        for i in range(k + 1, n):
            f = a[i][k] / d
            if f == 0:
                continue
            for j in range(k, n):
                a[i][j] -= f * a[k][j]
    return True


def require_positive_definite(g: Matrix, what: str = "matrix"):
    if not is_positive_definite(g):
        raise NotPositiveDefiniteError(f"{what} is not positive definite")


def gram_product(gram: Matrix, a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    s = ZERO
    for (i, j), v in gram.entries.items():
        x = a[i]
        y = b[j]
        if x != 0 and y != 0:
            s += x * v * y
    return s


def projection_matrix(s: Subspace, gram: Matrix) -> Matrix:
    """Gram-orthogonal projector onto s, as an ambient x ambient matrix."""
    if s.dim == 0:
        return Matrix.zero(s.ambient_dim, s.ambient_dim)
    b = s.matrix()
    btg = b.transpose() @ gram
    normal = btg @ b
    return b @ inverse(normal) @ btg


def orthogonal_projection(v: Sequence[Fraction], s: Subspace, gram: Matrix) -> Vector:
    """Point p in s with v - p Gram-orthogonal to s, by exact normal equations."""
    if gram.rows != s.ambient_dim:
        raise DimensionMismatchError("gram size != ambient dim")
    require_positive_definite(gram, "gram")
    if s.dim == 0:
        return zero_vec(s.ambient_dim)
    b = s.matrix()
    btg = b.transpose() @ gram
    normal = btg @ b
    x = solve(normal, btg.apply(vec(v)))
    assert x is not None  # normal matrix is PD, hence invertible
    return b.apply(x)
