"""Exact rational matrices and Gaussian elimination over Q.

Everything here works on :class:`fractions.Fraction` entries so that ranks,
kernels and solvability questions have tolerance-free answers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


def rat(x) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def rat_str(x: Fraction) -> str:
    """Serialize as "p/q" (always with a denominator)."""
    x = rat(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class RatMatrix:
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative matrix dimensions")
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError(f"entries do not match shape {self.rows}x{self.cols}")

    # -- construction -----------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable], cols: int | None = None) -> "RatMatrix":
        data = tuple(tuple(rat(x) for x in row) for row in rows)
        if cols is None:
            if not data:
                raise ValueError("column count required for a matrix with no rows")
            cols = len(data[0])
        return cls(len(data), cols, data)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        z = Fraction(0)
        return cls(rows, cols, tuple((z,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls(n, n, tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "RatMatrix":
        if not columns:
            return cls.zeros(rows, 0)
        return cls.from_rows(zip(*columns), cols=len(columns)) if rows else cls.zeros(0, len(columns))

    @classmethod
    def block(cls, blocks: Sequence[Sequence["RatMatrix"]]) -> "RatMatrix":
        """Assemble a block matrix; every block row must share a height."""
        out_rows = []
        cols = sum(b.cols for b in blocks[0]) if blocks else 0
        for brow in blocks:
            if sum(b.cols for b in brow) != cols:
                raise ValueError("inconsistent block widths")
            h = brow[0].rows
            if any(b.rows != h for b in brow):
                raise ValueError("inconsistent block heights")
            for i in range(h):
                out_rows.append(tuple(x for b in brow for x in b.entries[i]))
        return cls(len(out_rows), cols, tuple(out_rows))

    # -- basic algebra ----------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        ocols = list(zip(*other.entries)) if other.rows else [()] * other.cols
        out = []
        for row in self.entries:
            nz = [(k, x) for k, x in enumerate(row) if x]
            out.append(tuple(sum((x * col[k] for k, x in nz), Fraction(0)) for col in ocols))
        return RatMatrix(self.rows, other.cols, tuple(out))

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        return RatMatrix(self.rows, self.cols, tuple(
            tuple(x + y for x, y in zip(r, s)) for r, s in zip(self.entries, other.entries)))

    def __neg__(self) -> "RatMatrix":
        return self.scale(-1)

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        return self + (-other)

    def scale(self, c) -> "RatMatrix":
        c = rat(c)
        return RatMatrix(self.rows, self.cols, tuple(tuple(c * x for x in r) for r in self.entries))

    @property
    def T(self) -> "RatMatrix":
        if self.rows == 0:
            return RatMatrix.zeros(self.cols, 0)
        return RatMatrix(self.cols, self.rows, tuple(zip(*self.entries)))

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.entries for x in r)

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.entries)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.cols)]

    def select_columns(self, idx: Sequence[int]) -> "RatMatrix":
        return RatMatrix(self.rows, len(idx), tuple(tuple(r[j] for j in idx) for r in self.entries))

    def select_rows(self, idx: Sequence[int]) -> "RatMatrix":
        return RatMatrix(len(idx), self.cols, tuple(self.entries[i] for i in idx))

    def hstack(self, other: "RatMatrix") -> "RatMatrix":
        if self.rows != other.rows:
            raise ValueError("hstack needs equal row counts")
        return RatMatrix(self.rows, self.cols + other.cols,
                         tuple(r + s for r, s in zip(self.entries, other.entries)))

    def vstack(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.cols:
            raise ValueError("vstack needs equal column counts")
        return RatMatrix(self.rows + other.rows, self.cols, self.entries + other.entries)

    # -- elimination ------------------------------------------------------

    def rref(self) -> tuple["RatMatrix", tuple[int, ...]]:
        """Reduced row echelon form and pivot columns (leftmost pivots first)."""
        m = [list(r) for r in self.entries]
        pivots = []
        r = 0
        for c in range(self.cols):
            if r == self.rows:
                break
            p = next((i for i in range(r, self.rows) if m[i][c] != 0), None)
            if p is None:
                continue
            m[r], m[p] = m[p], m[r]
            inv = 1 / m[r][c]
            m[r] = [x * inv for x in m[r]]
            for i in range(self.rows):
                if i != r and m[i][c] != 0:
                    f = m[i][c]
                    m[i] = [x - f * y for x, y in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
        return RatMatrix(self.rows, self.cols, tuple(tuple(row) for row in m)), tuple(pivots)

    def rank(self) -> int:
        return len(self.rref()[1])

    def nullspace(self) -> "RatMatrix":
        """Kernel basis as the columns of a (cols x k) matrix.

        Free variables are taken in increasing column order, so a zero matrix
        yields the identity.
        """
        R, piv = self.rref()
        free = [j for j in range(self.cols) if j not in piv]
        vecs = []
        for f in free:
            v = [Fraction(0)] * self.cols
            v[f] = Fraction(1)
            for i, p in enumerate(piv):
                v[p] = -R.entries[i][f]
            vecs.append(v)
        return RatMatrix.from_columns(vecs, self.cols)

    def pivot_columns(self) -> tuple[int, ...]:
        return self.rref()[1]

    def column_basis(self) -> "RatMatrix":
        """Independent columns of self chosen in column-pivot order."""
        return self.select_columns(self.pivot_columns())

    def solve(self, rhs: "RatMatrix") -> "RatMatrix | None":
        """A particular solution X of self @ X = rhs (free variables zero), or None."""
        if rhs.rows != self.rows:
            raise ValueError("right-hand side has wrong height")
        aug = self.hstack(rhs)
        R, piv = aug.rref()
        if any(p >= self.cols for p in piv):
            return None
        X = [[Fraction(0)] * rhs.cols for _ in range(self.cols)]
        for i, p in enumerate(piv):
            for j in range(rhs.cols):
                X[p][j] = R.entries[i][self.cols + j]
        return RatMatrix(self.cols, rhs.cols, tuple(tuple(r) for r in X))

    def inverse(self) -> "RatMatrix":
        if self.rows != self.cols:
            raise ValueError("only square matrices are invertible")
        X = self.solve(RatMatrix.identity(self.rows))
        if X is None or self.rank() != self.rows:
            raise ValueError("matrix is singular")
        return X

    # -- serialization ----------------------------------------------------

    def to_json(self) -> list:
        return [[rat_str(x) for x in r] for r in self.entries]

    @classmethod
    def from_json(cls, data: list, rows: int, cols: int) -> "RatMatrix":
        if rows == 0 or cols == 0:
            return cls.zeros(rows, cols)
        m = cls.from_rows(data, cols=cols)
        if m.rows != rows:
            raise ValueError(f"expected {rows} rows, got {m.rows}")
        return m

    def to_complex(self):
        import numpy as np

        return np.array([[complex(x) for x in r] for r in self.entries], dtype=complex).reshape(
            self.rows, self.cols)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in r) for r in self.entries)
        return f"RatMatrix({self.rows}x{self.cols}: [{body}])"


def kron(A: RatMatrix, B: RatMatrix) -> RatMatrix:
    rows = []
    for i in range(A.rows):
        for k in range(B.rows):
            rows.append(tuple(A.entries[i][j] * B.entries[k][l]
                              for j in range(A.cols) for l in range(B.cols)))
    return RatMatrix(A.rows * B.rows, A.cols * B.cols, tuple(rows))


def nilpotent_exp(N: RatMatrix, t=1) -> RatMatrix:
    """exp(t*N) for nilpotent N, as the terminating power series."""
    n = N.rows
    t = rat(t)
    out = RatMatrix.identity(n)
    term = RatMatrix.identity(n)
    for k in range(1, n + 1):
        term = (term @ N).scale(t / k)
        if term.is_zero():
            break
        out = out + term
    return out
