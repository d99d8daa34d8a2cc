"""Exact scalars and dense matrices over prime fields GF(p) and the rationals.

Scalars are plain Python values: ``int`` in ``range(p)`` for GF(p) and
:class:`fractions.Fraction` (always reduced, positive denominator) for QQ.
Matrices are immutable and row-major.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterable, Sequence


class DimensionMismatch(ValueError):
    pass


class FieldMismatch(ValueError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class Field:
    """Either GF(p) for a prime p < 2**31, or the rationals."""

    __slots__ = ("kind", "p")

    def __init__(self, kind: str, p: int | None = None):
        if kind == "fp":
            if p is None or not _is_prime(p) or p >= 2**31:
                raise ValueError(f"GF(p) needs a prime p < 2^31, got {p!r}")
        elif kind == "q":
            p = None
        else:
            raise ValueError(f"unknown field kind {kind!r}")
        self.kind = kind
        self.p = p

    @classmethod
    def gf(cls, p: int) -> "Field":
        return cls("fp", p)

    @classmethod
    def rationals(cls) -> "Field":
        return cls("q")

    @property
    def is_prime_field(self) -> bool:
        return self.kind == "fp"

    @property
    def zero(self):
        return 0 if self.kind == "fp" else Fraction(0)

    @property
    def one(self):
        return 1 if self.kind == "fp" else Fraction(1)

    def __call__(self, x):
        """Coerce an int, Fraction or ``"num/den"`` string into this field."""
        if isinstance(x, str):
            x = Fraction(x.strip())
        if self.kind == "fp":
            if isinstance(x, Fraction):
                return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
            if isinstance(x, bool) or not isinstance(x, int):
                raise TypeError(f"cannot coerce {x!r} into {self}")
            return x % self.p
        if isinstance(x, bool) or not isinstance(x, (int, Fraction)):
            raise TypeError(f"cannot coerce {x!r} into {self}")
        return Fraction(x)

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.kind == "fp":
            return pow(x, -1, self.p)
        return 1 / x

    def neg(self, x):
        return (-x) % self.p if self.kind == "fp" else -x

    def random(self, rng: random.Random, nonzero: bool = False):
        """Random scalar; over QQ drawn from a small box of fractions."""
        if self.kind == "fp":
            return rng.randrange(1 if nonzero else 0, self.p)
        while True:
            x = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
            if x or not nonzero:
                return x

    def __eq__(self, other):
        return isinstance(other, Field) and (self.kind, self.p) == (other.kind, other.p)

    def __hash__(self):
        return hash((self.kind, self.p))

    def __repr__(self):
        return f"GF({self.p})" if self.kind == "fp" else "QQ"


class Matrix:
    """Immutable dense matrix. ``rows x cols``; empty shapes are zero maps."""

    __slots__ = ("field", "rows", "cols", "entries", "_hash")

    def __init__(self, field: Field, rows: int, cols: int, entries: Iterable[Iterable] = ()):
        if rows < 0 or cols < 0:
            raise DimensionMismatch(f"negative shape {rows}x{cols}")
        ent = tuple(tuple(field(x) for x in row) for row in entries) if rows else ()
        if len(ent) != rows or any(len(r) != cols for r in ent):
            raise DimensionMismatch(f"entries do not form a {rows}x{cols} matrix")
        self.field = field
        self.rows = rows
        self.cols = cols
        self.entries = ent
        self._hash = None

    @classmethod
    def _raw(cls, field: Field, rows: int, cols: int, entries: tuple) -> "Matrix":
        # trusted constructor; entries already coerced
        m = object.__new__(cls)
        m.field, m.rows, m.cols, m.entries, m._hash = field, rows, cols, entries, None
        return m

    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        if cols is None:
            if not rows:
                raise DimensionMismatch("column count needed for a matrix with no rows")
            cols = len(rows[0])
        return cls(field, len(rows), cols, rows)

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Matrix":
        z = field.zero
        return cls._raw(field, rows, cols, tuple((z,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        z, o = field.zero, field.one
        return cls._raw(field, n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)

    def tolist(self) -> list[list]:
        return [list(r) for r in self.entries]

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.field == other.field and self.shape == other.shape
                and self.entries == other.entries)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, self.rows, self.cols, self.entries))
        return self._hash

    def __repr__(self):
        return f"Matrix({self.field}, {self.rows}x{self.cols}, {self.tolist()})"

    def _check_same(self, other: "Matrix"):
        if self.field != other.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} vs {other.shape}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        p = self.field.p
        if p:
            ent = tuple(tuple((a + b) % p for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries))
        else:
            ent = tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries))
        return Matrix._raw(self.field, self.rows, self.cols, ent)

    def __neg__(self) -> "Matrix":
        return self.scale(self.field(-1))

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, c) -> "Matrix":
        c = self.field(c)
        p = self.field.p
        if p:
            ent = tuple(tuple(a * c % p for a in r) for r in self.entries)
        else:
            ent = tuple(tuple(a * c for a in r) for r in self.entries)
        return Matrix._raw(self.field, self.rows, self.cols, ent)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        return matmul(self, other)

    @property
    def T(self) -> "Matrix":
        return Matrix._raw(self.field, self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else
                           tuple(() for _ in range(self.cols)))

    def submatrix(self, r0: int, r1: int, c0: int, c1: int) -> "Matrix":
        return Matrix._raw(self.field, r1 - r0, c1 - c0,
                           tuple(row[c0:c1] for row in self.entries[r0:r1]))

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.entries)


def matmul(A: Matrix, B: Matrix) -> Matrix:
    if A.field != B.field:
        raise FieldMismatch(f"{A.field} vs {B.field}")
    if A.cols != B.rows:
        raise DimensionMismatch(f"cannot multiply {A.shape} by {B.shape}")
    p = A.field.p
    z = A.field.zero
    bcols = tuple(zip(*B.entries)) if B.rows else tuple(() for _ in range(B.cols))
    if p:
        ent = tuple(tuple(sum(a * b for a, b in zip(r, c)) % p for c in bcols) for r in A.entries)
    else:
        ent = tuple(tuple(sum((a * b for a, b in zip(r, c)), z) for c in bcols) for r in A.entries)
    return Matrix._raw(A.field, A.rows, B.cols, ent)


def block(field: Field, blocks: Sequence[Sequence[Matrix | None]],
          row_dims: Sequence[int], col_dims: Sequence[int]) -> Matrix:
    """Assemble a block matrix; ``None`` blocks are zero."""
    z = field.zero
    out = []
    for bi, rd in enumerate(row_dims):
        for i in range(rd):
            row = []
            for bj, cd in enumerate(col_dims):
                m = blocks[bi][bj]
                if m is None:
                    row.extend((z,) * cd)
                else:
                    if m.shape != (rd, cd):
                        raise DimensionMismatch(f"block ({bi},{bj}) has shape {m.shape}, expected {(rd, cd)}")
                    if m.field != field:
                        raise FieldMismatch(f"block ({bi},{bj}) over {m.field}")
                    row.extend(m.entries[i])
            out.append(tuple(row))
    return Matrix._raw(field, sum(row_dims), sum(col_dims), tuple(out))


def hstack(field: Field, ms: Sequence[Matrix], rows: int) -> Matrix:
    return block(field, [list(ms)], [rows], [m.cols for m in ms])


def vstack(field: Field, ms: Sequence[Matrix], cols: int) -> Matrix:
    return block(field, [[m] for m in ms], [m.rows for m in ms], [cols])


def block_diag(field: Field, ms: Sequence[Matrix]) -> Matrix:
    n = len(ms)
    return block(field, [[ms[i] if i == j else None for j in range(n)] for i in range(n)],
                 [m.rows for m in ms], [m.cols for m in ms])


def kron(A: Matrix, B: Matrix) -> Matrix:
    if A.field != B.field:
        raise FieldMismatch(f"{A.field} vs {B.field}")
    p = A.field.p
    ent = []
    for ra in A.entries:
        for rb in B.entries:
            if p:
                ent.append(tuple(a * b % p for a in ra for b in rb))
            else:
                ent.append(tuple(a * b for a in ra for b in rb))
    return Matrix._raw(A.field, A.rows * B.rows, A.cols * B.cols, tuple(ent))


def _rref_rows(field: Field, rows: list[list], ncols: int) -> list[int]:
    """In-place reduced row echelon form; returns pivot columns.

    Pivot choice: columns left to right, first row at or below the current
    one with a nonzero entry.
    """
    p = field.p
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        inv = field.inv(prow[c])
        if p:
            prow[:] = [x * inv % p for x in prow]
        else:
            prow[:] = [x * inv for x in prow]
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if f != 0:
                    ri = rows[i]
                    if p:
                        rows[i] = [(a - f * b) % p for a, b in zip(ri, prow)]
                    else:
                        rows[i] = [a - f * b for a, b in zip(ri, prow)]
        pivots.append(c)
        r += 1
    return pivots


def rref(A: Matrix) -> tuple[Matrix, list[int]]:
    rows = [list(r) for r in A.entries]
    piv = _rref_rows(A.field, rows, A.cols)
    return Matrix._raw(A.field, A.rows, A.cols, tuple(tuple(r) for r in rows)), piv


def rank(A: Matrix) -> int:
    if A.rows == 0 or A.cols == 0:
        return 0
    # reduce the shorter side
    M = A if A.rows <= A.cols else A.T
    rows = [list(r) for r in M.entries]
    return len(_rref_rows(A.field, rows, M.cols))


def kernel_basis(A: Matrix) -> Matrix:
    """Columns form a basis of ``{v : A v = 0}``, one per free column of the RREF."""
    field = A.field
    R, piv = rref(A)
    pivset = set(piv)
    free = [j for j in range(A.cols) if j not in pivset]
    z, o = field.zero, field.one
    cols = []
    for j in free:
        v = [z] * A.cols
        v[j] = o
        for i, pc in enumerate(piv):
            v[pc] = field.neg(R.entries[i][j])
        cols.append(v)
    if not cols:
        return Matrix.zeros(field, A.cols, 0)
    return Matrix._raw(field, A.cols, len(cols), tuple(zip(*cols)))


def inverse(A: Matrix) -> Matrix:
    if A.rows != A.cols:
        raise DimensionMismatch(f"inverse of non-square {A.shape}")
    n = A.rows
    field = A.field
    I = Matrix.identity(field, n)
    rows = [list(a) + list(b) for a, b in zip(A.entries, I.entries)]
    piv = _rref_rows(field, rows, n)
    if len(piv) != n:
        raise ZeroDivisionError("matrix is singular")
    return Matrix._raw(field, n, n, tuple(tuple(r[n:]) for r in rows))


def image_basis(A: Matrix) -> Matrix:
    """Linearly independent columns of ``A`` spanning its column space (pivot columns)."""
    _, piv = rref(A)
    if not piv:
        return Matrix.zeros(A.field, A.rows, 0)
    return Matrix._raw(A.field, A.rows, len(piv), tuple(tuple(r[j] for j in piv) for r in A.entries))


def random_matrix(field: Field, rows: int, cols: int, rng: random.Random) -> Matrix:
    return Matrix._raw(field, rows, cols,
                       tuple(tuple(field.random(rng) for _ in range(cols)) for _ in range(rows)))


def random_invertible(field: Field, n: int, rng: random.Random) -> tuple[Matrix, Matrix]:
    """Random invertible ``G`` with its inverse, as unit-lower * upper * permutation."""
    z, o = field.zero, field.one
    L = [[field.random(rng) if j < i else (o if i == j else z) for j in range(n)] for i in range(n)]
    U = [[field.random(rng) if j > i else (field.random(rng, nonzero=True) if i == j else z)
          for j in range(n)] for i in range(n)]
    perm = list(range(n))
    rng.shuffle(perm)
    P = [[o if perm[i] == j else z for j in range(n)] for i in range(n)]
    G = Matrix(field, n, n, L) @ Matrix(field, n, n, U) @ Matrix(field, n, n, P)
    return G, inverse(G)
