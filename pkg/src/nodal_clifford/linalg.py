"""Exact rank and null spaces of dense rational matrices.

Scalars are :class:`fractions.Fraction`. Rank is computed by fraction-free
(Bareiss) elimination on integer rows obtained by clearing denominators row
by row; scaling a row by a nonzero constant does not change the rank.
"""

from __future__ import annotations

from collections.abc import Sequence
from fractions import Fraction
from math import lcm

Rational = Fraction


class RationalMatrix:
    """Immutable dense matrix of rationals."""

    __slots__ = ("rows", "cols", "_entries")

    def __init__(self, entries: Sequence[Sequence[Fraction | int]], cols: int | None = None):
        rows = [tuple(Fraction(x) for x in row) for row in entries]
        if cols is None:
            if not rows:
                raise ValueError("column count required for a matrix with no rows")
            cols = len(rows[0])
        for row in rows:
            if len(row) != cols:
                raise ValueError(f"row of length {len(row)} in a matrix with {cols} columns")
        self.rows = len(rows)
        self.cols = cols
        self._entries = tuple(rows)

    @classmethod
    def identity(cls, n: int) -> RationalMatrix:
        return cls([[int(i == j) for j in range(n)] for i in range(n)], cols=n)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self._entries[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._entries[i]

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._entries]

    def transpose(self) -> RationalMatrix:
        return RationalMatrix(
            [[self._entries[i][j] for i in range(self.rows)] for j in range(self.cols)],
            cols=self.rows,
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return (self.rows, self.cols, self._entries) == (other.rows, other.cols, other._entries)

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self._entries))

    def __repr__(self) -> str:
        return f"RationalMatrix({self.rows}x{self.cols})"


def _integer_rows(rows: Sequence[Sequence[Fraction | int]]) -> list[list[int]]:
    out = []
    for row in rows:
        den = 1
        for x in row:
            if isinstance(x, Fraction) and x.denominator != 1:
                den = lcm(den, x.denominator)
        if den == 1:
            ints = [int(x) for x in row]
        else:
            ints = [int(x * den) for x in row]
        if any(ints):
            out.append(ints)
    return out


def integer_rank(m: list[list[int]], cols: int) -> int:
    """Rank of an integer matrix by Bareiss elimination. Mutates ``m``."""
    n = len(m)
    r = 0
    prev = 1
    for c in range(cols):
        if r == n:
            break
        # partial pivoting: smallest nonzero magnitude keeps entries short
        piv = -1
        best = 0
        for i in range(r, n):
            x = m[i][c]
            if x:
                ax = abs(x)
                if piv < 0 or ax < best:
                    piv, best = i, ax
                    if ax == 1:
                        break
        if piv < 0:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
        prow = m[r]
        p = prow[c]
        for i in range(r + 1, n):
            row = m[i]
            x = row[c]
            if x:
                for j in range(c + 1, cols):
                    row[j] = (p * row[j] - x * prow[j]) // prev
            elif p != prev:
                for j in range(c + 1, cols):
                    row[j] = (p * row[j]) // prev
            row[c] = 0
        prev = p
        r += 1
    return r


def rank(m: RationalMatrix | Sequence[Sequence[Fraction | int]], cols: int | None = None) -> int:
    if isinstance(m, RationalMatrix):
        rows, cols = m.tolist(), m.cols
    else:
        rows = m
        if cols is None:
            cols = len(rows[0]) if rows else 0
    ints = _integer_rows(rows)
    if not ints:
        return 0
    return integer_rank(ints, cols)


def nullity(m: RationalMatrix | Sequence[Sequence[Fraction | int]], cols: int | None = None) -> int:
    """Dimension of the right null space: ``cols - rank``."""
    if isinstance(m, RationalMatrix):
        cols = m.cols
    elif cols is None:
        cols = len(m[0]) if m else 0
    return cols - rank(m, cols)


def rref(rows: Sequence[Sequence[Fraction | int]], cols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over the rationals and the pivot columns."""
    a = [[Fraction(x) for x in row] for row in rows]
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def nullspace(rows: Sequence[Sequence[Fraction | int]], cols: int) -> list[list[Fraction]]:
    """A basis of the right null space, one vector per free column."""
    red, pivots = rref(rows, cols)
    pivot_set = set(pivots)
    basis = []
    for free in range(cols):
        if free in pivot_set:
            continue
        vec = [Fraction(0)] * cols
        vec[free] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -red[i][free]
        basis.append(vec)
    return basis
