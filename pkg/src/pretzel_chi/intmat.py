"""Small exact integer-matrix helpers shared by the lattice modules.

Matrices are tuples (or lists) of rows of Python ints.
"""

from __future__ import annotations

from math import isqrt
from typing import Sequence

Matrix = Sequence[Sequence[int]]


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(m: Matrix) -> list[list[int]]:
    return [list(col) for col in zip(*m)]


def matmul(a: Matrix, b: Matrix) -> list[list[int]]:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def leading_minors(m: Matrix) -> list[int]:
    """Leading principal minors d_1..d_n via fraction-free Bareiss elimination.

    No pivoting is done, so the k-th pivot is exactly the k-th leading minor.
    Once a pivot vanishes the remaining minors are computed directly.
    """
    a = [list(r) for r in m]
    n = len(a)
    minors: list[int] = []
    prev = 1
    for k in range(n):
        pivot = a[k][k]
        minors.append(pivot)
        if pivot == 0:
            minors.extend(det(submatrix(m, j + 1)) for j in range(k + 1, n))
            return minors
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) // prev
        prev = pivot
    return minors


def submatrix(m: Matrix, k: int) -> list[list[int]]:
    return [list(r[:k]) for r in m[:k]]


def det(m: Matrix) -> int:
    """Exact determinant by Bareiss elimination with row pivoting."""
    a = [list(r) for r in m]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(u, v))
