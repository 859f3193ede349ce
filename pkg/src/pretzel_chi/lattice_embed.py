"""Lattice embeddings of a negative-definite form into the diagonal lattice.

An embedding is an n x n integer matrix At whose columns are the images of
the vertex basis, with col_i . col_j = -Q_ij.  Two embeddings are
equivalent when they differ by a signed permutation of the coordinates
(rows).  find_embeddings returns one representative per class.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from math import isqrt
from typing import Iterable, Optional, Sequence

from . import intmat
from .plumbing import IntersectionForm, PlumbingGraph, is_negative_definite

Rows = tuple[tuple[int, ...], ...]


class NotNegativeDefinite(ValueError):
    pass


class SearchTruncated(RuntimeError):
    """Raised when a caller needs a complete list but the search hit a limit."""


class StructuralViolation(AssertionError):
    """A found embedding contradicts the rigidity of -2 chains."""

    def __init__(self, clause: str, detail: str):
        super().__init__(f"chain rigidity clause ({clause}) violated: {detail}")
        self.clause = clause


@dataclass(frozen=True)
class EmbeddingMatrix:
    At: Rows

    @property
    def n(self) -> int:
        return len(self.At)

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.At)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.n)]

    def det(self) -> int:
        return intmat.det(self.At)

    def canonical(self) -> Rows:
        return canonical_rows(self.At)

    def __str__(self) -> str:
        width = max((len(str(v)) for row in self.At for v in row), default=1)
        return "\n".join(" ".join(str(v).rjust(width) for v in row) for row in self.At)


@dataclass
class EmbeddingSearch:
    """Outcome of a search: class representatives plus truncation info."""

    embeddings: list[EmbeddingMatrix]
    truncated: bool = False
    reason: str = ""
    nodes: int = 0
    elapsed: float = 0.0

    def __iter__(self):
        return iter(self.embeddings)

    def __len__(self) -> int:
        return len(self.embeddings)

    def __bool__(self) -> bool:
        return bool(self.embeddings)

    def __getitem__(self, i):
        return self.embeddings[i]


def _rows(Q) -> Rows:
    return Q.Q if isinstance(Q, IntersectionForm) else tuple(tuple(r) for r in Q)


def canonical_rows(At: Sequence[Sequence[int]]) -> Rows:
    """Exact canonical form under signed row permutations.

    Each row is negated if its first nonzero entry is negative, then rows
    are sorted.
    """
    out = []
    for row in At:
        row = tuple(row)
        lead = next((v for v in row if v), 0)
        out.append(tuple(-v for v in row) if lead < 0 else row)
    return tuple(sorted(out, reverse=True))


def verify_embedding(At, Q) -> bool:
    q = _rows(Q)
    a = At.At if isinstance(At, EmbeddingMatrix) else At
    n = len(q)
    if len(a) != n or any(len(r) != n for r in a):
        return False
    cols = [tuple(r[j] for r in a) for j in range(n)]
    return all(intmat.dot(cols[i], cols[j]) == -q[i][j] for i in range(n) for j in range(i, n))


def _column_order(q: Rows) -> list[int]:
    n = len(q)
    order: list[int] = []
    left = set(range(n))
    while left:
        def key(v: int):
            links = sum(1 for u in order if q[u][v])
            return (-q[v][v], links, -v)

        nxt = max(left, key=key)
        order.append(nxt)
        left.remove(nxt)
    return order


def _square_partitions(total: int, parts: int, cap: int) -> Iterable[tuple[int, ...]]:
    """Nonincreasing positive x_1 >= x_2 >= ... with sum of squares = total."""
    if total == 0:
        yield ()
        return
    if parts == 0:
        return
    hi = min(cap, isqrt(total))
    for x in range(hi, 0, -1):
        if x * x * parts < total:
            break
        for rest in _square_partitions(total - x * x, parts - 1, x):
            yield (x,) + rest


class _Limits:
    def __init__(self, node_limit: Optional[int], deadline: Optional[float]):
        self.node_limit = node_limit
        self.deadline = deadline
        self.nodes = 0
        self.hit = ""

    def tick(self) -> bool:
        self.nodes += 1
        if self.node_limit is not None and self.nodes > self.node_limit:
            self.hit = f"node limit {self.node_limit}"
            return False
        if self.deadline is not None and self.nodes % 2048 == 0 and time.monotonic() > self.deadline:
            self.hit = "time limit"
            return False
        return True


class _Stop(Exception):
    pass


def find_embeddings(
    Q,
    cap: Optional[int] = 10_000,
    node_limit: Optional[int] = None,
    time_limit: Optional[float] = None,
    det_shortcut: bool = True,
) -> EmbeddingSearch:
    """All embeddings of (Z^n, Q) into (Z^n, -I) up to signed permutations.

    Columns are placed one at a time in decreasing |Q_ii| order.  Coordinates
    whose rows agree on the placed columns are interchangeable, so entries in
    such a class are taken nonincreasing; coordinates that are still zero may
    also have their sign fixed, so they receive a nonincreasing tuple of
    positive values (a partition of the leftover norm into squares).
    """
    q = _rows(Q)
    n = len(q)
    started = time.monotonic()
    if n == 0:
        return EmbeddingSearch([EmbeddingMatrix(())])
    if not is_negative_definite(q):
        raise NotNegativeDefinite(f"form of rank {n} is not negative definite")
    if det_shortcut and not intmat.is_square(abs(intmat.det(q))):
        return EmbeddingSearch([], elapsed=time.monotonic() - started)

    order = _column_order(q)
    limits = _Limits(node_limit, started + time_limit if time_limit else None)
    found: dict[Rows, EmbeddingMatrix] = {}
    placed: list[list[int]] = []  # full columns in processing order
    state = {"truncated": False, "reason": ""}

    def extend(depth: int, classes: tuple[tuple[int, ...], ...], zero: tuple[int, ...]) -> None:
        if depth == n:
            mat = [[0] * n for _ in range(n)]
            for pos, col in zip(order, placed):
                for r in range(n):
                    mat[r][pos] = col[r]
            key = canonical_rows(mat)
            if key not in found:
                found[key] = EmbeddingMatrix(key)
                if cap is not None and len(found) > cap:
                    del found[key]
                    state["truncated"], state["reason"] = True, f"cap {cap}"
                    raise _Stop
            return
        k = order[depth]
        norm = -q[k][k]
        targets = [-q[order[d]][k] for d in range(depth)]
        flat = [r for c in classes for r in c]
        # class boundary: position i starts a new class
        starts = set()
        pos = 0
        for c in classes:
            starts.add(pos)
            pos += len(c)
        # suffix squared norms of each placed column over the nonzero rows
        suffix = []
        for col in placed:
            s = [0] * (len(flat) + 1)
            for i in range(len(flat) - 1, -1, -1):
                s[i] = s[i + 1] + col[flat[i]] ** 2
            suffix.append(s)
        entry = [0] * n
        dots = [0] * depth

        def assign(i: int, rem: int, prev: int) -> None:
            if not limits.tick():
                state["truncated"], state["reason"] = True, limits.hit
                raise _Stop
            if i == len(flat):
                if any(d != t for d, t in zip(dots, targets)):
                    return
                for parts in _square_partitions(rem, len(zero), isqrt(rem)):
                    for r, x in zip(zero, parts):
                        entry[r] = x
                    for r in zero[len(parts):]:
                        entry[r] = 0
                    placed.append(list(entry))
                    extend(depth + 1, _refine(classes, zero, entry), zero[len(parts):])
                    placed.pop()
                for r in zero:
                    entry[r] = 0
                return
            r = flat[i]
            hi = isqrt(rem)
            if i not in starts:
                hi = min(hi, prev)
            for x in range(hi, -isqrt(rem) - 1, -1):
                rem2 = rem - x * x
                ok = True
                for d in range(depth):
                    c = placed[d][r]
                    if c and x:
                        dots[d] += c * x
                for d in range(depth):
                    need = targets[d] - dots[d]
                    if need * need > rem2 * suffix[d][i + 1]:
                        ok = False
                        break
                if ok:
                    entry[r] = x
                    assign(i + 1, rem2, x)
                for d in range(depth):
                    c = placed[d][r]
                    if c and x:
                        dots[d] -= c * x
            entry[r] = 0

        # Cauchy-Schwarz on zero-row-only columns: nothing to check; start
        assign(0, norm, 0)

    try:
        extend(0, (), tuple(range(n)))
    except _Stop:
        pass
    except RecursionError:
        # depth grows like rank x support; very large forms are out of reach
        state["truncated"], state["reason"] = True, "recursion depth"
    embeddings = [found[k] for k in sorted(found)]
    return EmbeddingSearch(
        embeddings,
        truncated=state["truncated"],
        reason=state["reason"],
        nodes=limits.nodes,
        elapsed=time.monotonic() - started,
    )


def _refine(classes, zero, entry) -> tuple[tuple[int, ...], ...]:
    out = []
    for c in classes:
        for _, grp in itertools.groupby(c, key=lambda r: entry[r]):
            out.append(tuple(grp))
    fresh = [r for r in zero if entry[r]]
    for _, grp in itertools.groupby(fresh, key=lambda r: entry[r]):
        out.append(tuple(grp))
    return tuple(out)


def brute_force_embeddings(Q, bound: Optional[int] = None) -> set[Rows]:
    """Unpruned reference enumerator returning canonical class keys.

    Every column ranges over all vectors in [-b, b]^n of the right norm and
    columns are matched by plain backtracking on the Gram condition.  No
    symmetry is broken.  Only meant for small n.
    """
    q = _rows(Q)
    n = len(q)
    cands = []
    for i in range(n):
        norm = -q[i][i]
        b = isqrt(max(norm, 0)) if bound is None else bound
        vecs = [v for v in itertools.product(range(-b, b + 1), repeat=n) if sum(x * x for x in v) == norm]
        cands.append(vecs)
    out: set[Rows] = set()
    chosen: list[tuple[int, ...]] = []

    def go(i: int) -> None:
        if i == n:
            mat = [[chosen[j][r] for j in range(n)] for r in range(n)]
            out.add(canonical_rows(mat))
            return
        for v in cands[i]:
            if all(intmat.dot(v, chosen[j]) == -q[j][i] for j in range(i)):
                chosen.append(v)
                go(i + 1)
                chosen.pop()

    go(0)
    return out


def donaldson_obstructed(Q, node_limit: Optional[int] = None, time_limit: Optional[float] = None) -> bool:
    """True iff no embedding exists.  Raises SearchTruncated if undecided."""
    res = find_embeddings(Q, cap=1, node_limit=node_limit, time_limit=time_limit)
    if res.embeddings:
        return False
    if res.truncated:
        raise SearchTruncated(res.reason)
    return True


# --- structural validation of -2 chains ---------------------------------------


@dataclass(frozen=True)
class EmbeddingStats:
    k: int
    z: int
    supports: tuple[tuple[int, frozenset], ...] = field(default=())
    collisions: tuple[tuple[int, int], ...] = ()

    def positive_count_ok(self, m: int) -> bool:
        """For a positive link with k != 0, m must be 2k+z or 2k+z+1."""
        return self.k == 0 or m in (2 * self.k + self.z, 2 * self.k + self.z + 1)


def structural_check(At, Q, graph: PlumbingGraph) -> EmbeddingStats:
    a = At.At if isinstance(At, EmbeddingMatrix) else At
    if not verify_embedding(a, Q):
        raise StructuralViolation("gram", "matrix does not realize the form")
    n = len(a)
    col = lambda j: tuple(a[r][j] for r in range(n))
    params = graph.params
    supports: dict[int, frozenset] = {}
    for i, chain in graph.chain_map:
        prev_support = None
        union: set[int] = set()
        for v in chain:
            c = col(v)
            nz = [r for r in range(n) if c[r]]
            if len(nz) != 2 or any(abs(c[r]) != 1 for r in nz):
                raise StructuralViolation("1", f"chain column {v} = {c}")
            if prev_support is not None and len(prev_support & set(nz)) != 1:
                raise StructuralViolation("1", f"chain columns before {v} do not share one coordinate")
            prev_support = set(nz)
            union.update(nz)
        if chain and len(union) != params[i]:
            raise StructuralViolation("1", f"|U_C| = {len(union)} but p = {params[i]}")
        supports[i] = frozenset(union)
    chains = graph.chains()
    colliding: dict[int, list[int]] = {}
    pairs = []
    for i, j in itertools.combinations(sorted(supports), 2):
        shared = supports[i] & supports[j]
        if not shared:
            continue
        if len(chains[i]) >= 2 or len(chains[j]) >= 2:
            raise StructuralViolation("2", f"chains {i} and {j} share {sorted(shared)}")
        if len(shared) != 2:
            raise StructuralViolation("3", f"chains {i} and {j} share {len(shared)} coordinates")
        colliding.setdefault(i, []).append(j)
        colliding.setdefault(j, []).append(i)
        pairs.append((i, j))
    if any(len(v) > 1 for v in colliding.values()) or len(colliding) % 2:
        raise StructuralViolation("4", f"collision pattern {pairs}")
    return EmbeddingStats(
        k=len(colliding) // 2,
        z=sum(1 for p in params if p == 1),
        supports=tuple(sorted(supports.items())),
        collisions=tuple(pairs),
    )
