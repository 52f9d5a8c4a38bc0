"""Dense exact linear algebra over Q(i).

Subspaces are kept in a canonical form: the basis vectors are the nonzero rows
of the reduced row-echelon form of any spanning set (pivot entries 1, pivots
ordered by coordinate index). Read as columns, this is the reduced
column-echelon basis matrix, so two :class:`Subspace` values are equal exactly
when they are the same subspace.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .errors import DimensionMismatch, SingularMatrix
from .gaussian import ONE, ZERO, GaussianRational, Scalar

Vector = tuple[GaussianRational, ...]


def vec(*entries: Scalar | complex) -> Vector:
    return tuple(GaussianRational.coerce(e) for e in entries)


def conj_vector(v: Sequence[GaussianRational]) -> Vector:
    return tuple(x.conjugate() for x in v)


def is_zero_vector(v: Sequence[GaussianRational]) -> bool:
    return all(x.is_zero() for x in v)


def rref(rows: Iterable[Sequence[GaussianRational]], ncols: int) -> tuple[list[list[GaussianRational]], list[int]]:
    """Reduced row-echelon form; returns the nonzero rows and their pivot columns."""
    work = [list(r) for r in rows]
    for r in work:
        if len(r) != ncols:
            raise DimensionMismatch(f"row of length {len(r)} in a {ncols}-column system")
    pivots: list[int] = []
    top = 0
    nrows = len(work)
    for col in range(ncols):
        if top == nrows:
            break
        sel = None
        for i in range(top, nrows):
            if not work[i][col].is_zero():
                sel = i
                break
        if sel is None:
            continue
        work[top], work[sel] = work[sel], work[top]
        prow = work[top]
        lead = prow[col]
        if lead != ONE:
            inv = ONE / lead
            for j in range(col, ncols):
                if not prow[j].is_zero():
                    prow[j] = prow[j] * inv
        nz = [j for j in range(col + 1, ncols) if not prow[j].is_zero()]
        for i in range(nrows):
            if i == top:
                continue
            row = work[i]
            f = row[col]
            if f.is_zero():
                continue
            row[col] = ZERO
            for j in nz:
                row[j] = row[j] - f * prow[j]
        pivots.append(col)
        top += 1
    return work[:top], pivots


class Matrix:
    """Immutable dense matrix over Q(i) stored as a tuple of row tuples."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Iterable[Iterable[Scalar | complex]], cols: int | None = None):
        data = tuple(tuple(GaussianRational.coerce(x) for x in row) for row in entries)
        if cols is None:
            cols = len(data[0]) if data else 0
        for row in data:
            if len(row) != cols:
                raise DimensionMismatch("ragged matrix rows")
        self.rows = len(data)
        self.cols = cols
        self.entries = data

    @classmethod
    def _wrap(cls, data: tuple[Vector, ...], cols: int) -> Matrix:
        m = object.__new__(cls)
        m.rows = len(data)
        m.cols = cols
        m.entries = data
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int) -> Matrix:
        return cls._wrap(tuple((ZERO,) * cols for _ in range(rows)), cols)

    @classmethod
    def identity(cls, n: int) -> Matrix:
        return cls.diagonal([ONE] * n)

    @classmethod
    def diagonal(cls, diag: Sequence[Scalar]) -> Matrix:
        n = len(diag)
        d = [GaussianRational.coerce(x) for x in diag]
        return cls._wrap(tuple(tuple(d[i] if i == j else ZERO for j in range(n)) for i in range(n)), n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[GaussianRational]], rows: int) -> Matrix:
        for c in columns:
            if len(c) != rows:
                raise DimensionMismatch("column length does not match row count")
        return cls._wrap(tuple(tuple(c[i] for c in columns) for i in range(rows)), len(columns))

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij: tuple[int, int]) -> GaussianRational:
        i, j = ij
        return self.entries[i][j]

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.entries)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> Matrix:
        return Matrix._wrap(tuple(self.columns()), self.rows)

    def conj(self) -> Matrix:
        return Matrix._wrap(tuple(conj_vector(r) for r in self.entries), self.cols)

    def is_real(self) -> bool:
        return all(x.is_real() for r in self.entries for x in r)

    def is_zero(self) -> bool:
        return all(x.is_zero() for r in self.entries for x in r)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.cols == other.cols and self.entries == other.entries

    def __hash__(self):
        return hash((self.cols, self.entries))

    def __repr__(self):
        body = ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.entries)
        return f"Matrix([{body}])"

    def _check_same_shape(self, other: Matrix) -> None:
        if self.shape != other.shape:
            raise DimensionMismatch(f"shapes {self.shape} and {other.shape} differ")

    def __add__(self, other: Matrix) -> Matrix:
        self._check_same_shape(other)
        return Matrix._wrap(tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(self.entries, other.entries)), self.cols)

    def __sub__(self, other: Matrix) -> Matrix:
        self._check_same_shape(other)
        return Matrix._wrap(tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(self.entries, other.entries)), self.cols)

    def __neg__(self) -> Matrix:
        return Matrix._wrap(tuple(tuple(-x for x in r) for r in self.entries), self.cols)

    def scale(self, c: Scalar) -> Matrix:
        c = GaussianRational.coerce(c)
        return Matrix._wrap(tuple(tuple(c * x for x in r) for r in self.entries), self.cols)

    def apply(self, v: Sequence[GaussianRational]) -> Vector:
        if len(v) != self.cols:
            raise DimensionMismatch(f"vector of length {len(v)} for {self.shape} matrix")
        nz = [(j, x) for j, x in enumerate(v) if not x.is_zero()]
        out = []
        for row in self.entries:
            acc = ZERO
            for j, x in nz:
                a = row[j]
                if not a.is_zero():
                    acc = acc + a * x
            out.append(acc)
        return tuple(out)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
            ocols = other.columns()
            cols = [self.apply(c) for c in ocols]
            return Matrix.from_columns(cols, self.rows) if cols else Matrix.zeros(self.rows, 0)
        return self.apply(other)

    def trace(self) -> GaussianRational:
        acc = ZERO
        for i in range(min(self.rows, self.cols)):
            acc = acc + self.entries[i][i]
        return acc

    def inverse(self) -> Matrix:
        """Gauss-Jordan inverse; raises :class:`SingularMatrix`."""
        if not self.is_square():
            raise DimensionMismatch("inverse of a non-square matrix")
        n = self.rows
        aug = [list(r) + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(self.entries)]
        reduced, pivots = rref(aug, 2 * n)
        if pivots[:n] != list(range(n)) or len(pivots) < n:
            raise SingularMatrix("matrix is singular")
        return Matrix._wrap(tuple(tuple(r[n:]) for r in reduced[:n]), n)

    def rank(self) -> int:
        return len(rref(self.entries, self.cols)[1])

    def to_numpy(self):
        import numpy as np

        return np.array([[complex(x) for x in r] for r in self.entries], dtype=complex).reshape(self.rows, self.cols)


def solve(m: Matrix, b: Sequence[GaussianRational]) -> Vector:
    """Solve ``m x = b`` for square invertible ``m``."""
    if not m.is_square() or len(b) != m.rows:
        raise DimensionMismatch("solve needs a square matrix and matching right-hand side")
    n = m.rows
    aug = [list(r) + [b[i]] for i, r in enumerate(m.entries)]
    reduced, pivots = rref(aug, n + 1)
    if pivots != list(range(n)):
        raise SingularMatrix("system is singular")
    return tuple(r[n] for r in reduced)


class Subspace:
    """A subspace of Q(i)^n (standing in for C^n) in canonical echelon form."""

    __slots__ = ("ambient_dim", "vectors", "pivots")

    def __init__(self, vectors: Iterable[Sequence[Scalar | complex]], ambient_dim: int):
        rows = [tuple(GaussianRational.coerce(x) for x in v) for v in vectors]
        reduced, pivots = rref(rows, ambient_dim)
        self.ambient_dim = ambient_dim
        self.vectors: tuple[Vector, ...] = tuple(tuple(r) for r in reduced)
        self.pivots: tuple[int, ...] = tuple(pivots)

    @classmethod
    def _canonical(cls, vectors: tuple[Vector, ...], pivots: tuple[int, ...], ambient_dim: int) -> Subspace:
        s = object.__new__(cls)
        s.ambient_dim = ambient_dim
        s.vectors = vectors
        s.pivots = pivots
        return s

    @classmethod
    def span(cls, vectors: Iterable[Sequence[Scalar | complex]], ambient_dim: int) -> Subspace:
        return cls(vectors, ambient_dim)

    @classmethod
    def zero(cls, n: int) -> Subspace:
        return cls._canonical((), (), n)

    @classmethod
    def full(cls, n: int) -> Subspace:
        return cls._canonical(tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)), tuple(range(n)), n)

    @classmethod
    def from_matrix_columns(cls, m: Matrix) -> Subspace:
        return cls(m.columns(), m.rows)

    @property
    def dim(self) -> int:
        return len(self.vectors)

    @property
    def basis(self) -> Matrix:
        """Basis vectors as the columns of an ``ambient_dim x dim`` matrix."""
        return Matrix.from_columns(self.vectors, self.ambient_dim)

    def is_zero(self) -> bool:
        return not self.vectors

    def is_full(self) -> bool:
        return len(self.vectors) == self.ambient_dim

    def is_real(self) -> bool:
        return all(x.is_real() for v in self.vectors for x in v)

    def reduce(self, v: Sequence[GaussianRational]) -> Vector:
        """Remainder of ``v`` after eliminating the pivot coordinates."""
        out = list(v)
        for row, piv in zip(self.vectors, self.pivots):
            f = out[piv]
            if f.is_zero():
                continue
            for j in range(piv, self.ambient_dim):
                if not row[j].is_zero():
                    out[j] = out[j] - f * row[j]
        return tuple(out)

    def contains_vector(self, v: Sequence[GaussianRational]) -> bool:
        if len(v) != self.ambient_dim:
            raise DimensionMismatch("vector length differs from ambient dimension")
        return is_zero_vector(self.reduce(v))

    def coordinates(self, v: Sequence[GaussianRational]) -> Vector:
        """Coefficients of ``v`` in the canonical basis; ``v`` must lie in the subspace."""
        if not self.contains_vector(v):
            raise ValueError("vector is not in the subspace")
        return tuple(v[p] for p in self.pivots)

    def combination(self, coeffs: Sequence[GaussianRational]) -> Vector:
        out = [ZERO] * self.ambient_dim
        for c, row in zip(coeffs, self.vectors):
            if c.is_zero():
                continue
            for j in range(self.ambient_dim):
                if not row[j].is_zero():
                    out[j] = out[j] + c * row[j]
        return tuple(out)

    def image(self, m: Matrix) -> Subspace:
        """The subspace ``m(self)``."""
        return Subspace([m.apply(v) for v in self.vectors], m.rows)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.vectors == other.vectors

    def __hash__(self):
        return hash((self.ambient_dim, self.vectors))

    def __repr__(self):
        body = ", ".join("(" + ", ".join(str(x) for x in v) + ")" for v in self.vectors)
        return f"Subspace[{self.ambient_dim}]{{{body}}}"


def _check_dims(u: Subspace, w: Subspace) -> None:
    if u.ambient_dim != w.ambient_dim:
        raise DimensionMismatch(f"ambient dimensions {u.ambient_dim} and {w.ambient_dim} differ")


def kernel(m: Matrix) -> Subspace:
    """Right kernel ``{x : m x = 0}``."""
    n = m.cols
    reduced, pivots = rref(m.entries, n)
    pivset = set(pivots)
    basis = []
    for f in range(n):
        if f in pivset:
            continue
        x = [ZERO] * n
        x[f] = ONE
        for row, p in zip(reduced, pivots):
            if not row[f].is_zero():
                x[p] = -row[f]
        basis.append(x)
    return Subspace(basis, n)


def annihilator(u: Subspace) -> Subspace:
    """Vectors ``a`` with ``sum(a_j * v_j) = 0`` for every ``v`` in ``u`` (bilinear pairing)."""
    return kernel(Matrix._wrap(u.vectors, u.ambient_dim))


def sum_subspaces(u: Subspace, w: Subspace) -> Subspace:
    _check_dims(u, w)
    if w.is_zero() or u.is_full():
        return u
    if u.is_zero() or w.is_full():
        return w
    return Subspace(u.vectors + w.vectors, u.ambient_dim)


def sum_all(spaces: Iterable[Subspace], ambient_dim: int) -> Subspace:
    vectors: list[Vector] = []
    for s in spaces:
        if s.ambient_dim != ambient_dim:
            raise DimensionMismatch("ambient dimensions differ")
        vectors.extend(s.vectors)
    return Subspace(vectors, ambient_dim)


def intersect_subspaces(u: Subspace, w: Subspace) -> Subspace:
    _check_dims(u, w)
    if u.is_zero() or w.is_full():
        return u
    if w.is_zero() or u.is_full():
        return w
    if u == w:
        return u
    stacked = annihilator(u).vectors + annihilator(w).vectors
    return kernel(Matrix._wrap(stacked, u.ambient_dim))


def conj_subspace(u: Subspace) -> Subspace:
    # Conjugating an RREF basis keeps pivots equal to 1 and zeros in place.
    return Subspace._canonical(tuple(conj_vector(v) for v in u.vectors), u.pivots, u.ambient_dim)


def contains(u: Subspace, w: Subspace) -> bool:
    """True iff ``w`` is a subspace of ``u``."""
    _check_dims(u, w)
    if w.dim > u.dim:
        return False
    return all(u.contains_vector(v) for v in w.vectors)


def is_direct_sum(spaces: Sequence[Subspace], ambient_dim: int) -> bool:
    """True iff the spaces are independent and together span the ambient space."""
    total = sum(s.dim for s in spaces)
    if total != ambient_dim:
        return False
    return sum_all(spaces, ambient_dim).dim == ambient_dim
