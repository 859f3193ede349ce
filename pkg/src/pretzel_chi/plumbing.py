"""The star-shaped plumbing X(p1,...,pm) bounded by the branched double cover.

Center weight is -l (l = number of positive parameters).  A positive p
contributes a chain of p-1 vertices of weight -2; a negative p contributes
one leaf of weight p.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import intmat
from .pretzel_core import as_params


@dataclass(frozen=True)
class PlumbingGraph:
    weights: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    central: int
    # (parameter index, chain vertices ordered interior first, center-adjacent last)
    chain_map: tuple[tuple[int, tuple[int, ...]], ...]
    # (parameter index, leaf vertex)
    leaf_map: tuple[tuple[int, int], ...]
    params: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.weights)

    def chains(self) -> dict[int, tuple[int, ...]]:
        return dict(self.chain_map)

    def leaves(self) -> dict[int, int]:
        return dict(self.leaf_map)


@dataclass(frozen=True)
class IntersectionForm:
    Q: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.Q)

    def det(self) -> int:
        return intmat.det(self.Q)


def build_plumbing(link) -> PlumbingGraph:
    params = as_params(link)
    weights: list[int] = []
    edges: list[tuple[int, int]] = []
    chain_map = []
    leaf_map = []
    attach: list[int] = []  # vertices adjacent to the center
    for i, p in enumerate(params):
        if p > 0:
            chain = tuple(range(len(weights), len(weights) + p - 1))
            weights.extend([-2] * (p - 1))
            edges.extend((chain[j], chain[j + 1]) for j in range(len(chain) - 1))
            chain_map.append((i, chain))
            if chain:
                attach.append(chain[-1])
    for i, p in enumerate(params):
        if p < 0:
            leaf_map.append((i, len(weights)))
            attach.append(len(weights))
            weights.append(p)
    center = len(weights)
    weights.append(-sum(1 for p in params if p > 0))
    edges.extend((v, center) for v in attach)
    return PlumbingGraph(
        tuple(weights), tuple(edges), center, tuple(chain_map), tuple(leaf_map), params
    )


def intersection_form(g: PlumbingGraph) -> IntersectionForm:
    n = g.n
    Q = [[0] * n for _ in range(n)]
    for v, w in enumerate(g.weights):
        Q[v][v] = w
    for a, b in g.edges:
        Q[a][b] = Q[b][a] = 1
    return IntersectionForm(tuple(tuple(r) for r in Q))


def plumbing_form(link) -> IntersectionForm:
    return intersection_form(build_plumbing(link))


def is_negative_definite(Q) -> bool:
    """Sylvester: (-1)^k times the k-th leading minor is positive for every k."""
    rows = Q.Q if isinstance(Q, IntersectionForm) else Q
    minors = intmat.leading_minors(rows)
    return all((-1) ** (k + 1) * d > 0 for k, d in enumerate(minors))


def describe(g: PlumbingGraph) -> str:
    lines = [f"center v{g.central}: weight {g.weights[g.central]}"]
    for i, chain in g.chain_map:
        label = " - ".join(f"v{v}" for v in chain) or "(empty)"
        lines.append(f"p{i + 1}={g.params[i]}: chain {label} (weights -2)")
    for i, v in g.leaf_map:
        lines.append(f"p{i + 1}={g.params[i]}: leaf v{v} (weight {g.weights[v]})")
    return "\n".join(lines)
