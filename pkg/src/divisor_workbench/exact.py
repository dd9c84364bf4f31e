"""Exact integer and rational linear algebra.

Every routine here works on Python ``int`` and :class:`fractions.Fraction`
values; nothing is ever converted to floating point. Matrices are plain
sequences of rows and are returned as tuples of tuples.
"""

from __future__ import annotations

from collections.abc import Sequence
from fractions import Fraction
from typing import Union

Rat = Union[int, Fraction]
IntMatrix = tuple[tuple[int, ...], ...]


class ShapeError(ValueError):
    """Raised when matrix or vector dimensions do not fit the operation."""


class SymmetryError(ValueError):
    """Raised when a symmetric matrix is required but not supplied."""


class NoUniqueSolution(ArithmeticError):
    """A linear system has no solution or infinitely many.

    ``kind`` is ``"inconsistent"`` or ``"underdetermined"``.
    """

    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind


def as_matrix(m: Sequence[Sequence[Rat]]) -> tuple[tuple[Rat, ...], ...]:
    rows = tuple(tuple(row) for row in m)
    if rows and any(len(row) != len(rows[0]) for row in rows):
        raise ShapeError("matrix rows have different lengths")
    return rows


def _require_square(m: Sequence[Sequence[Rat]]) -> tuple[tuple[Rat, ...], ...]:
    rows = as_matrix(m)
    if any(len(row) != len(rows) for row in rows):
        raise ShapeError(f"expected a square matrix, got {len(rows)}x{len(rows[0])}")
    return rows


def is_symmetric(m: Sequence[Sequence[Rat]]) -> bool:
    rows = as_matrix(m)
    n = len(rows)
    if any(len(row) != n for row in rows):
        return False
    return all(rows[i][j] == rows[j][i] for i in range(n) for j in range(i + 1, n))


def det(m: Sequence[Sequence[Rat]]) -> Rat:
    """Determinant by fraction-free (Bareiss) elimination.

    Integer input yields an ``int``; every intermediate division is exact.
    Rational input is accepted and handled by the same recurrence.

    Raises:
        ShapeError: if ``m`` is not square.
    """
    a = [list(row) for row in _require_square(m)]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev: Rat = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * pivot - a[i][k] * a[k][j]
                a[i][j] = num // prev if isinstance(num, int) and isinstance(prev, int) else num / prev
            a[i][k] = 0
        prev = pivot
    return sign * a[n - 1][n - 1]


def leading_minors(m: Sequence[Sequence[Rat]]) -> list[Rat]:
    """Leading principal minors ``D_1, ..., D_n`` of a square matrix."""
    rows = _require_square(m)
    return [det([row[:k] for row in rows[:k]]) for k in range(1, len(rows) + 1)]


def is_negative_definite(m: Sequence[Sequence[Rat]]) -> bool:
    """Sylvester's criterion: the k-th leading minor must have sign (-1)^k.

    Raises:
        ShapeError: if ``m`` is not square.
        SymmetryError: if ``m`` is not symmetric.
    """
    rows = _require_square(m)
    if not is_symmetric(rows):
        raise SymmetryError("negative definiteness is only defined for symmetric matrices")
    for k, minor in enumerate(leading_minors(rows), start=1):
        if minor == 0 or (minor > 0) != (k % 2 == 0):
            return False
    return True


def mat_vec(m: Sequence[Sequence[Rat]], v: Sequence[Rat]) -> tuple[Rat, ...]:
    rows = as_matrix(m)
    if rows and len(rows[0]) != len(v):
        raise ShapeError(f"cannot multiply {len(rows)}x{len(rows[0])} matrix by vector of length {len(v)}")
    return tuple(sum((a * b for a, b in zip(row, v)), 0) for row in rows)


def bilinear(m: Sequence[Sequence[Rat]], x: Sequence[Rat], y: Sequence[Rat]) -> Rat:
    """``xᵀ m y``."""
    return sum((a * b for a, b in zip(x, mat_vec(m, y))), 0)


def solve_linear(m: Sequence[Sequence[Rat]], b: Sequence[Rat]) -> tuple[Fraction, ...]:
    """Solve ``m x = b`` exactly over the rationals.

    Gauss-Jordan elimination on ``Fraction`` entries. The solution is
    returned only when it is unique.

    Raises:
        ShapeError: if ``m`` is not square or ``b`` has the wrong length.
        NoUniqueSolution: if the system is inconsistent or underdetermined.
    """
    rows = _require_square(m)
    n = len(rows)
    if len(b) != n:
        raise ShapeError(f"right-hand side has length {len(b)}, expected {n}")
    aug = [[Fraction(x) for x in row] + [Fraction(rhs)] for row, rhs in zip(rows, b)]
    pivot_cols: list[int] = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, n) if aug[i][c] != 0), None)
        if p is None:
            continue
        aug[r], aug[p] = aug[p], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(n):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivot_cols.append(c)
        r += 1
    if any(aug[i][n] != 0 for i in range(r, n)):
        raise NoUniqueSolution("inconsistent", "linear system has no solution")
    if r < n:
        raise NoUniqueSolution("underdetermined", "linear system has infinitely many solutions")
    return tuple(aug[i][n] for i in range(n))


def hermite_rows(vectors: Sequence[Sequence[int]]) -> list[list[int]]:
    """Row-style Hermite normal form of the lattice spanned by ``vectors``.

    Returns the nonzero rows of an echelon basis: pivots are positive,
    pivot columns strictly increase, and entries above each pivot are
    reduced into ``[0, pivot)``.
    """
    rows = [list(v) for v in vectors]
    if not rows:
        return []
    width = len(rows[0])
    if any(len(v) != width for v in rows):
        raise ShapeError("all vectors must have the same length")
    top = 0
    for col in range(width):
        while True:
            live = [i for i in range(top, len(rows)) if rows[i][col] != 0]
            if not live:
                break
            best = min(live, key=lambda i: abs(rows[i][col]))
            rows[top], rows[best] = rows[best], rows[top]
            pivot = rows[top][col]
            done = True
            for i in range(top + 1, len(rows)):
                if rows[i][col] != 0:
                    q = rows[i][col] // pivot
                    rows[i] = [a - q * b for a, b in zip(rows[i], rows[top])]
                    if rows[i][col] != 0:
                        done = False
            if done:
                break
        if top < len(rows) and rows[top][col] != 0:
            if rows[top][col] < 0:
                rows[top] = [-a for a in rows[top]]
            pivot = rows[top][col]
            for i in range(top):
                q = rows[i][col] // pivot
                if q:
                    rows[i] = [a - q * b for a, b in zip(rows[i], rows[top])]
            top += 1
    return rows[:top]


def in_integer_span(vectors: Sequence[Sequence[int]], target: Sequence[int]) -> bool:
    """True iff ``target`` is an integer combination of ``vectors``."""
    rest = list(target)
    if not vectors:
        return all(x == 0 for x in rest)
    basis = hermite_rows(vectors)
    if len(rest) != len(vectors[0]):
        raise ShapeError(f"target has length {len(rest)}, vectors have length {len(vectors[0])}")
    for row in basis:
        col = next(j for j, a in enumerate(row) if a != 0)
        if any(rest[j] != 0 for j in range(col)):
            return False
        q, r = divmod(rest[col], row[col])
        if r:
            return False
        rest = [a - q * b for a, b in zip(rest, row)]
    return all(x == 0 for x in rest)
