"""Exact integer matrices, Smith normal form and finitely generated abelian groups.

Everything here works over Python integers; there is no floating point.
The Smith normal form routine is the workhorse for fixed subtori: for a
lattice automorphism ``w`` the cokernel of ``w - 1`` has free part equal to
the dimension of the fixed subtorus and torsion equal to its component group.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd, prod
from typing import Iterable, Iterator, Sequence


class ShapeError(ValueError):
    """Raised when matrix dimensions do not fit together."""


@dataclass(frozen=True)
class IntegerMatrix:
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ShapeError(f"negative shape {self.rows}x{self.cols}")
        if len(self.entries) != self.rows * self.cols:
            raise ShapeError(
                f"{len(self.entries)} entries given for shape {self.rows}x{self.cols}"
            )

    # -- construction -------------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntegerMatrix:
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ShapeError(f"ragged rows: expected {cols} columns, got {len(r)}")
        return cls(len(rows), cols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> IntegerMatrix:
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntegerMatrix:
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def diagonal(cls, diag: Sequence[int], rows: int | None = None, cols: int | None = None) -> IntegerMatrix:
        rows = len(diag) if rows is None else rows
        cols = len(diag) if cols is None else cols
        data = [[0] * cols for _ in range(rows)]
        for i, d in enumerate(diag):
            data[i][i] = d
        return cls.from_rows(data, cols)

    # -- access -------------------------------------------------------------

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def to_lists(self) -> list[list[int]]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple[int, ...]:
        return self.entries[j::self.cols] if self.cols else ()

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __repr__(self):
        return f"IntegerMatrix({self.to_lists()!r})" if self.rows else f"IntegerMatrix(0x{self.cols})"

    # -- arithmetic ---------------------------------------------------------

    def __matmul__(self, other: IntegerMatrix) -> IntegerMatrix:
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        a, b = self.to_lists(), other.to_lists()
        bt = list(zip(*b)) if b else [()] * other.cols
        out = tuple(
            sum(x * y for x, y in zip(ra, cb)) for ra in a for cb in bt
        ) if self.cols else (0,) * (self.rows * other.cols)
        return IntegerMatrix(self.rows, other.cols, out)

    def apply(self, vec: Sequence[int]) -> tuple[int, ...]:
        if len(vec) != self.cols:
            raise ShapeError(f"vector of length {len(vec)} for {self.rows}x{self.cols} matrix")
        return tuple(sum(a * v for a, v in zip(self.row(i), vec)) for i in range(self.rows))

    def __add__(self, other: IntegerMatrix) -> IntegerMatrix:
        self._same_shape(other)
        return IntegerMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: IntegerMatrix) -> IntegerMatrix:
        self._same_shape(other)
        return IntegerMatrix(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> IntegerMatrix:
        return IntegerMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, k: int) -> IntegerMatrix:
        return IntegerMatrix(self.rows, self.cols, tuple(k * a for a in self.entries))

    def __pow__(self, k: int) -> IntegerMatrix:
        if not self.is_square:
            raise ShapeError("only square matrices have powers")
        if k < 0:
            return self.inverse() ** (-k)
        result, base = IntegerMatrix.identity(self.rows), self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def transpose(self) -> IntegerMatrix:
        return IntegerMatrix(self.cols, self.rows, tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)))

    T = property(transpose)

    def _same_shape(self, other):
        if self.shape != other.shape:
            raise ShapeError(f"shape mismatch: {self.shape} vs {other.shape}")

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if not self.is_square:
            raise ShapeError("determinant of non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = self.to_lists()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k]:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def rank(self) -> int:
        return sum(1 for d in smith_normal_form(self).diagonal if d)

    def inverse(self) -> IntegerMatrix:
        """Inverse of a unimodular matrix; raises if the inverse is not integral."""
        if not self.is_square:
            raise ShapeError("inverse of non-square matrix")
        n = self.rows
        a = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)]
             for i, r in enumerate(self.to_lists())]
        for c in range(n):
            p = next((r for r in range(c, n) if a[r][c] != 0), None)
            if p is None:
                raise ValueError("matrix is singular")
            a[c], a[p] = a[p], a[c]
            piv = a[c][c]
            a[c] = [x / piv for x in a[c]]
            for r in range(n):
                if r != c and a[r][c] != 0:
                    f = a[r][c]
                    a[r] = [x - f * y for x, y in zip(a[r], a[c])]
        inv = [r[n:] for r in a]
        if any(x.denominator != 1 for r in inv for x in r):
            raise ValueError("matrix is not invertible over the integers")
        return IntegerMatrix.from_rows([[int(x) for x in r] for r in inv], n)

    def is_unimodular(self) -> bool:
        return self.is_square and abs(self.det()) == 1


def as_matrix(m) -> IntegerMatrix:
    if isinstance(m, IntegerMatrix):
        return m
    return IntegerMatrix.from_rows(m)


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SnfDecomposition:
    """``U @ M @ V == D`` with ``U``, ``V`` unimodular and ``D`` in Smith form."""

    U: IntegerMatrix
    D: IntegerMatrix
    V: IntegerMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.D[i, i] for i in range(min(self.D.rows, self.D.cols)))


def smith_normal_form(M) -> SnfDecomposition:
    """Smith normal form with transforms.

    Pivots are chosen as the smallest nonzero entry in absolute value of the
    active submatrix, ties going to the lowest (row, col), so the output is a
    deterministic function of the input.
    """
    M = as_matrix(M)
    m, n = M.rows, M.cols
    a = M.to_lists()
    u = IntegerMatrix.identity(m).to_lists()
    v = IntegerMatrix.identity(n).to_lists()

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, k):  # row dst += k * row src
        a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, k):  # col dst += k * col src
        for r in a:
            r[dst] += k * r[src]
        for r in v:
            r[dst] += k * r[src]

    for t in range(min(m, n)):
        while True:
            pivot = None
            for i in range(t, m):
                for j in range(t, n):
                    x = a[i][j]
                    if x and (pivot is None or abs(x) < abs(a[pivot[0]][pivot[1]])):
                        pivot = (i, j)
            if pivot is None:
                break
            swap_rows(t, pivot[0])
            swap_cols(t, pivot[1])
            p = a[t][t]
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(t, i, -(a[i][t] // p))
                    dirty = dirty or a[i][t] != 0
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(t, j, -(a[t][j] // p))
                    dirty = dirty or a[t][j] != 0
            if dirty:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % p), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]

    return SnfDecomposition(
        U=IntegerMatrix.from_rows(u, m),
        D=IntegerMatrix.from_rows(a, n),
        V=IntegerMatrix.from_rows(v, n),
    )


def hermite_normal_form(vectors: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Row-style Hermite normal form of the lattice spanned by ``vectors``.

    Returns the nonzero rows: pivots positive, entries above each pivot
    reduced into ``[0, pivot)``.
    """
    rows = [list(v) for v in vectors]
    if not rows:
        return []
    n = len(rows[0])
    r = 0
    for c in range(n):
        while True:
            nz = [i for i in range(r, len(rows)) if rows[i][c]]
            if not nz:
                break
            i = min(nz, key=lambda k: (abs(rows[k][c]), k))
            rows[r], rows[i] = rows[i], rows[r]
            done = True
            for k in range(r + 1, len(rows)):
                if rows[k][c]:
                    q = rows[k][c] // rows[r][c]
                    rows[k] = [x - q * y for x, y in zip(rows[k], rows[r])]
                    done = done and rows[k][c] == 0
            if done:
                break
        if r < len(rows) and rows[r][c]:
            if rows[r][c] < 0:
                rows[r] = [-x for x in rows[r]]
            for k in range(r):
                q = rows[k][c] // rows[r][c]
                if q:
                    rows[k] = [x - q * y for x, y in zip(rows[k], rows[r])]
            r += 1
            if r == len(rows):
                break
    return [tuple(row) for row in rows[:r]]


def kernel_basis(M) -> list[tuple[int, ...]]:
    """A saturated Z-basis of ``{v : M v = 0}``, Hermite-reduced."""
    M = as_matrix(M)
    snf = smith_normal_form(M)
    r = sum(1 for d in snf.diagonal if d)
    basis = [snf.V.column(j) for j in range(r, M.cols)]
    return hermite_normal_form(basis)


# ---------------------------------------------------------------------------
# Finitely generated abelian groups
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FgAbelianGroup:
    """``Z^free_rank + Z/d_1 + ... + Z/d_k`` with ``d_1 | d_2 | ... | d_k``, all ``d_i >= 2``."""

    free_rank: int = 0
    torsion_orders: tuple[int, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "torsion_orders", tuple(self.torsion_orders))
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        t = self.torsion_orders
        if any(d < 2 for d in t):
            raise ValueError(f"torsion orders must be >= 2, got {t}")
        if any(t[i + 1] % t[i] for i in range(len(t) - 1)):
            raise ValueError(f"torsion orders must form a divisibility chain, got {t}")

    @classmethod
    def from_cyclic_orders(cls, orders: Iterable[int], free_rank: int = 0) -> FgAbelianGroup:
        """Canonicalize an arbitrary direct sum of cyclic groups (0 meaning Z)."""
        orders = list(orders)
        free_rank += sum(1 for d in orders if d == 0)
        finite = [abs(d) for d in orders if d not in (0, 1, -1)]
        diag = smith_normal_form(IntegerMatrix.diagonal(finite)).diagonal
        return cls(free_rank, tuple(d for d in diag if d > 1))

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self) -> int | None:
        return prod(self.torsion_orders) if self.is_finite else None

    def elements(self) -> Iterator[tuple[int, ...]]:
        if not self.is_finite:
            raise ValueError("cannot enumerate an infinite group")
        return product(*(range(d) for d in self.torsion_orders))

    def reduce(self, x: Sequence[int]) -> tuple[int, ...]:
        """Normal form of an element given as (free coords..., torsion coords...)."""
        f = self.free_rank
        if len(x) != f + len(self.torsion_orders):
            raise ShapeError(f"element of length {len(x)} for group {self}")
        return tuple(x[:f]) + tuple(a % d for a, d in zip(x[f:], self.torsion_orders))

    def add(self, x, y) -> tuple[int, ...]:
        return self.reduce([a + b for a, b in zip(x, y)])

    def neg(self, x) -> tuple[int, ...]:
        return self.reduce([-a for a in x])

    def zero(self) -> tuple[int, ...]:
        return (0,) * (self.free_rank + len(self.torsion_orders))

    def element_order(self, x) -> int | None:
        x = self.reduce(x)
        if any(x[:self.free_rank]):
            return None
        o = 1
        for a, d in zip(x[self.free_rank:], self.torsion_orders):
            k = d // gcd(a, d)
            o = o * k // gcd(o, k)
        return o

    def __str__(self):
        parts = ["Z"] * self.free_rank + [f"Z/{d}" for d in self.torsion_orders]
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion_orders": list(self.torsion_orders)}


def cokernel(M, ambient_rank: int | None = None) -> FgAbelianGroup:
    """``Z^rows / image(M)`` in canonical form."""
    M = as_matrix(M)
    if ambient_rank is not None and M.rows != ambient_rank:
        raise ShapeError(
            f"expected a matrix with {ambient_rank} rows (ambient lattice rank), "
            f"got shape {M.rows}x{M.cols}"
        )
    diag = smith_normal_form(M).diagonal
    rank = sum(1 for d in diag if d)
    return FgAbelianGroup(M.rows - rank, tuple(d for d in diag if d > 1))
