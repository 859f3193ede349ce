"""Hermite normal form, counting +-1 vectors modulo Im(2At), and the two
cheap rational-ball obstructions (square determinant, coset count).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from . import intmat
from .lattice_embed import EmbeddingMatrix, EmbeddingSearch
from .pretzel_core import determinant
from .two_bridge import ZeroDeterminant

Vector = tuple[int, ...]


class Singular(ValueError):
    pass


class IncompleteEmbeddingList(RuntimeError):
    pass


@dataclass(frozen=True)
class HNF:
    """Column-style Hermite form: M U = H.

    H is lower triangular with positive diagonal, and every entry left of a
    pivot lies in [0, pivot).
    """

    H: tuple[Vector, ...]
    U: tuple[Vector, ...]

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(self.H[i][i] for i in range(len(self.H)))

    def index(self) -> int:
        out = 1
        for p in self.pivots:
            out *= p
        return out

    def reduce(self, v: Sequence[int]) -> Vector:
        """Canonical representative of v modulo the column lattice of H."""
        v = list(v)
        H = self.H
        for i in range(len(H)):
            c = v[i] // H[i][i]
            if c:
                for r in range(i, len(H)):
                    v[r] -= c * H[r][i]
        return tuple(v)


def hnf(M: Sequence[Sequence[int]]) -> HNF:
    n = len(M)
    if any(len(r) != n for r in M):
        raise ValueError("hnf expects a square matrix")
    H = [list(r) for r in M]
    U = intmat.identity(n)

    def colop(j: int, k: int, a: int, b: int, c: int, d: int) -> None:
        # (col_j, col_k) <- (a col_j + b col_k, c col_j + d col_k)
        for mat in (H, U):
            for row in mat:
                x, y = row[j], row[k]
                row[j], row[k] = a * x + b * y, c * x + d * y

    for i in range(n):
        for k in range(i + 1, n):
            x, y = H[i][i], H[i][k]
            if y == 0:
                continue
            g, s, t = _xgcd(x, y)
            # [[s, -y/g], [t, x/g]] has determinant 1
            colop(i, k, s, t, -y // g, x // g)
        p = H[i][i]
        if p == 0:
            raise Singular("matrix is singular")
        if p < 0:
            for mat in (H, U):
                for row in mat:
                    row[i] = -row[i]
            p = -p
        for j in range(i):
            c = H[i][j] // p
            if c:
                for mat in (H, U):
                    for row in mat:
                        row[j] -= c * row[i]
    return HNF(tuple(map(tuple, H)), tuple(map(tuple, U)))


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """g = gcd(a, b) >= 0 with s a + t b = g."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


@dataclass(frozen=True)
class CosetCountReport:
    count: int
    det_abs: int
    method: str = "subset"

    @property
    def fires(self) -> bool:
        return self.count < self.det_abs


def _matrix(At) -> tuple[Vector, ...]:
    return At.At if isinstance(At, EmbeddingMatrix) else tuple(tuple(r) for r in At)


def coset_count_pm1(At, method: str = "subset", early_exit: bool = True) -> CosetCountReport:
    """|S / Im(2At)| for S = {+-1}^n.

    "subset": writing v = 1 - 2w with w in {0,1}^n, v ~ v' iff w - w' lies
    in Im(At), so the count is the number of distinct subset sums of the
    unit vectors in Z^n / Im(At).  Reaching |det At| means the whole group
    is covered, so stopping there is still exact.

    "enumerate": reduce all 2^n sign vectors modulo the Hermite form of 2At.
    """
    a = _matrix(At)
    n = len(a)
    d = intmat.det(a)
    if d == 0:
        raise Singular("embedding matrix is singular")
    det_abs = abs(d)
    if method == "subset":
        h = hnf(a)
        units = [h.reduce(tuple(int(r == i) for r in range(n))) for i in range(n)]
        sums = {tuple([0] * n)}
        for u in units:
            sums |= {h.reduce(tuple(x + y for x, y in zip(s, u))) for s in sums}
            if early_exit and len(sums) == det_abs:
                break
        return CosetCountReport(len(sums), det_abs, method)
    if method == "enumerate":
        h = hnf([[2 * v for v in row] for row in a])
        seen = set()
        for v in itertools.product((1, -1), repeat=n):
            seen.add(h.reduce(v))
            if early_exit and len(seen) == det_abs:
                break
        return CosetCountReport(len(seen), det_abs, method)
    raise ValueError(f"unknown method {method!r}")


def gj_obstructed(Q, embeddings: EmbeddingSearch | Iterable[EmbeddingMatrix]) -> bool:
    """True iff there is at least one embedding class and every class fires."""
    if isinstance(embeddings, EmbeddingSearch) and embeddings.truncated:
        raise IncompleteEmbeddingList(embeddings.reason)
    classes = list(embeddings)
    if not classes:
        return False
    return all(coset_count_pm1(e).fires for e in classes)


def square_det_obstructed(link) -> bool:
    det = determinant(link)
    if det == 0:
        raise ZeroDeterminant("determinant is 0")
    return not intmat.is_square(abs(det))
