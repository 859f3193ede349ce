"""Pretzel links: data model, symmetries, determinant, components, linking.

A pretzel link P(p1,...,pm) is stored as its ordered tuple of signed
half-twist counts.  Most helpers here work on plain tuples so that the
rewrite and sweep code can handle intermediate 2-strand words too.
"""

from __future__ import annotations

import enum
import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import prod
from typing import Iterable, Sequence

Params = tuple[int, ...]


class PretzelError(ValueError):
    """Raised for malformed pretzel parameters."""


class ParseError(PretzelError):
    pass


@dataclass(frozen=True)
class PretzelLink:
    params: Params

    def __post_init__(self) -> None:
        params = tuple(int(p) for p in self.params)
        object.__setattr__(self, "params", params)
        if len(params) < 3:
            raise PretzelError(f"a pretzel link needs at least 3 strands, got {params}")
        if any(p == 0 for p in params):
            raise PretzelError(f"twist parameters must be nonzero, got {params}")

    @classmethod
    def of(cls, *params: int) -> "PretzelLink":
        return cls(tuple(params))

    @classmethod
    def parse(cls, text: str) -> "PretzelLink":
        return cls(parse_params(text))

    @property
    def m(self) -> int:
        return len(self.params)

    def __str__(self) -> str:
        return format_params(self.params)

    def __iter__(self):
        return iter(self.params)

    def __len__(self) -> int:
        return len(self.params)


@dataclass(frozen=True)
class UnorderedClass:
    """The class P<p1,...,pm> of all reorderings, stored as a sorted multiset."""

    multiset: Params

    def __post_init__(self) -> None:
        ms = tuple(sorted(int(p) for p in self.multiset))
        if len(ms) < 3 or any(p == 0 for p in ms):
            raise PretzelError(f"invalid unordered class {ms}")
        object.__setattr__(self, "multiset", ms)

    @classmethod
    def of_link(cls, link: PretzelLink) -> "UnorderedClass":
        return cls(link.params)

    def __str__(self) -> str:
        return "P<" + ",".join(str(p) for p in self.multiset) + ">"


_PARAM_RE = re.compile(r"^\s*[+-]?\d+\s*$")


def parse_params(text: str) -> Params:
    """Parse "p1,p2,...,pm" (whitespace tolerated, optional P(...) wrapper)."""
    s = text.strip()
    if s.upper().startswith("P(") and s.endswith(")"):
        s = s[2:-1]
    elif s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    parts = s.split(",")
    if not parts or any(not _PARAM_RE.match(part) for part in parts):
        raise ParseError(f"cannot parse pretzel parameters from {text!r}")
    params = tuple(int(part) for part in parts)
    if len(params) < 3 or any(p == 0 for p in params):
        raise ParseError(f"need at least 3 nonzero parameters, got {text!r}")
    return params


def format_params(params: Sequence[int]) -> str:
    return "P(" + ",".join(str(p) for p in params) + ")"


def as_params(link: PretzelLink | Sequence[int]) -> Params:
    if isinstance(link, PretzelLink):
        return link.params
    return tuple(int(p) for p in link)


def _wrap(link, params: Params):
    return PretzelLink(params) if isinstance(link, PretzelLink) else params


# --- symmetries -------------------------------------------------------------


def mirror(link):
    params = as_params(link)
    return _wrap(link, tuple(-p for p in params))


def rotations(params: Params) -> list[Params]:
    return [params[k:] + params[:k] for k in range(len(params))]


def dihedral_images(params: Params) -> list[Params]:
    rev = tuple(reversed(params))
    return rotations(params) + rotations(rev)


@lru_cache(maxsize=200_000)
def _dihedral_min(params: Params) -> Params:
    return min(dihedral_images(params))


def dihedral_canonical(link):
    """Lexicographically least image under rotation and reversal."""
    return _wrap(link, _dihedral_min(as_params(link)))


def flype_images(params: Params) -> set[Params]:
    """Dihedral-canonical forms reachable by one local flype.

    A +-1 twist region next to any other region can be flyped to its other
    side, so the move swaps a unit entry with a cyclic neighbour.
    """
    m = len(params)
    out: set[Params] = set()
    for i in range(m):
        j = (i + 1) % m
        if abs(params[i]) == 1 or abs(params[j]) == 1:
            w = list(params)
            w[i], w[j] = w[j], w[i]
            out.add(_dihedral_min(tuple(w)))
    out.discard(_dihedral_min(params))
    return out


def isotopy_orbit(params: Params) -> tuple[Params, ...]:
    """Closure under rotation, reversal and local flypes of +-1 regions.

    The non-unit entries keep their cyclic order up to reversal while the
    +-1 entries may sit anywhere.  Returned as the sorted tuple of
    dihedral-canonical representatives.
    """
    params = tuple(params)
    units, core = class_signature(params)
    if not units or not core and len(set(units)) == 1:
        return (_dihedral_min(params),)
    return _orbit_of(units, core)


@lru_cache(maxsize=50_000)
def _orbit_of(units: Params, core: Params) -> tuple[Params, ...]:
    m = len(units) + len(core)
    seen: set[Params] = set()
    cores = set(dihedral_images(core)) if core else {()}
    arrangements = _unit_arrangements(units)
    for slots in itertools.combinations(range(m), len(units)):
        free = [pos for pos in range(m) if pos not in slots]
        for c in cores:
            for arr in arrangements:
                w = [0] * m
                for pos, u in zip(slots, arr):
                    w[pos] = u
                for pos, v in zip(free, c):
                    w[pos] = v
                seen.add(_dihedral_min(tuple(w)))
    return tuple(sorted(seen))


def _unit_arrangements(units: Params) -> list[Params]:
    """Distinct orderings of a multiset of +-1 entries."""
    n, plus = len(units), units.count(1)
    out = []
    for pos in itertools.combinations(range(n), plus):
        w = [-1] * n
        for i in pos:
            w[i] = 1
        out.append(tuple(w))
    return out


def unit_first_words(params: Params) -> list[Params]:
    """Orbit words that list the +-1 entries first, in every arrangement."""
    units, core = class_signature(tuple(params))
    cores = sorted(set(dihedral_images(core))) if core else [()]
    return sorted({tuple(a) + c for a in _unit_arrangements(units) for c in cores})


@lru_cache(maxsize=200_000)
def class_signature(params: Params) -> tuple[Params, Params]:
    """Cheap complete invariant of the isotopy orbit: sorted units and the canonical core."""
    units = tuple(sorted(p for p in params if abs(p) == 1))
    core = tuple(p for p in params if abs(p) != 1)
    return units, (_dihedral_min(core) if core else ())


def orbit_images(params: Params) -> Iterable[Params]:
    """Every ordered word isotopic to params via dihedral moves and flypes."""
    seen: set[Params] = set()
    for rep in isotopy_orbit(as_params(params)):
        for image in dihedral_images(rep):
            if image not in seen:
                seen.add(image)
                yield image


def flype_normalize(link):
    """Gathered flype representative when a flype applies, else the input."""
    params = as_params(link)
    orbit = isotopy_orbit(params)
    if len(orbit) == 1:
        return link
    return _wrap(link, orbit[0])


def canonical_form(link):
    """Canonical representative modulo dihedral moves and flypes."""
    return _wrap(link, isotopy_orbit(as_params(link))[0])


def mirror_canonical_form(link):
    params = as_params(link)
    return _wrap(link, min(isotopy_orbit(params)[0], isotopy_orbit(tuple(-p for p in params))[0]))


def same_unordered(a, b) -> bool:
    pa, pb = as_params(a), as_params(b)
    return len(pa) == len(pb) and sorted(pa) == sorted(pb)


# --- determinant --------------------------------------------------------------


def determinant(link) -> int:
    """det P(p1..pm) = -sum_i prod_{j != i} p_j (exact)."""
    params = as_params(link)
    total = 0
    for i in range(len(params)):
        total += prod(params[:i] + params[i + 1:])
    return -total


def reciprocal_sum(link) -> Fraction:
    return sum((Fraction(1, p) for p in as_params(link)), Fraction(0))


# --- components and linking numbers ------------------------------------------


@dataclass(frozen=True)
class ComponentReport:
    """Component structure of the standard diagram.

    Strand position 2i is the piece leaving the top-left corner of twist
    region i, and 2i+1 the piece leaving its top-right corner.
    """

    count: int
    strand_partition: tuple[int, ...]
    per_component_twist_profile: tuple[tuple[int, ...], ...]
    orientation: tuple[int, ...]

    def component_of(self, position: int) -> int:
        return self.strand_partition[position]


class OrientationConvention(enum.Enum):
    # leftmost strand of the lowest-indexed region a component visits points down
    LOWEST_REGION_LEFTMOST_DOWN = "lowest-region-leftmost-down"


def _trace(params: Params):
    """Walk the closed diagram.

    Nodes are ("T"|"B", region, side).  Even regions join each top corner
    to the bottom corner on the same side; odd regions cross them.  Closure
    arcs join the right corner of region i to the left corner of i+1.
    """
    m = len(params)
    region: dict = {}
    closure: dict = {}
    for i, p in enumerate(params):
        for s in (0, 1):
            t = ("T", i, s)
            b = ("B", i, s if p % 2 == 0 else 1 - s)
            region[t], region[b] = b, t
        nxt = (i + 1) % m
        closure[("T", i, 1)], closure[("T", nxt, 0)] = ("T", nxt, 0), ("T", i, 1)
        closure[("B", i, 1)], closure[("B", nxt, 0)] = ("B", nxt, 0), ("B", i, 1)

    comp = [-1] * (2 * m)
    cycles: list[list[int]] = []
    for start in range(2 * m):
        if comp[start] != -1:
            continue
        cid = len(cycles)
        pieces = []
        node = ("T", start // 2, start % 2)
        first = node
        while True:
            top = node if node[0] == "T" else region[node]
            pos = 2 * top[1] + top[2]
            comp[pos] = cid
            pieces.append(pos)
            node = closure[region[node]]
            if node == first:
                break
        cycles.append(pieces)
    return region, closure, comp, cycles


@lru_cache(maxsize=50_000)
def _component_data(params: Params, flips: frozenset = frozenset()):
    m = len(params)
    region, closure, comp, cycles = _trace(params)
    # relabel components by first strand position
    order = sorted(range(len(cycles)), key=lambda c: min(cycles[c]))
    relabel = {old: new for new, old in enumerate(order)}
    comp = [relabel[c] for c in comp]
    count = len(cycles)
    orientation = [0] * (2 * m)
    profiles = []
    for cid in range(count):
        positions = sorted(p for p in range(2 * m) if comp[p] == cid)
        profiles.append(tuple(sorted({p // 2 for p in positions})))
        start = positions[0]  # leftmost piece of the lowest region
        node = ("T", start // 2, start % 2)
        first = node
        while True:
            partner = region[node]
            top = node if node[0] == "T" else partner
            pos = 2 * top[1] + top[2]
            orientation[pos] = 1 if node[0] == "T" else -1
            node = closure[partner]
            if node == first:
                break
        if cid in flips:
            for p in positions:
                orientation[p] = -orientation[p]
    return count, tuple(comp), tuple(profiles), tuple(orientation)


def component_report(link) -> ComponentReport:
    count, comp, profiles, orientation = _component_data(as_params(link))
    return ComponentReport(count, comp, profiles, orientation)


def component_count(link) -> int:
    return _component_data(as_params(link))[0]


@dataclass(frozen=True)
class LinkingMatrix:
    entries: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def total(self) -> int:
        n = self.size
        return sum(self.entries[i][j] for i in range(n) for j in range(i + 1, n))


def pairwise_linking(
    link,
    orientation: OrientationConvention = OrientationConvention.LOWEST_REGION_LEFTMOST_DOWN,
    reverse_components: Iterable[int] = (),
) -> LinkingMatrix:
    """Linking numbers from signed crossings of the standard diagram.

    A region with p > 0 whose two pieces run the same vertical direction
    contributes |p| positive crossings; opposite directions flip the sign.
    reverse_components reverses the orientation of the named components.
    """
    params = as_params(link)
    count, comp, _, orient = _component_data(params, frozenset(reverse_components))
    if count < 2:
        raise PretzelError(f"{format_params(params)} is a knot; linking numbers need >= 2 components")
    doubled = [[0] * count for _ in range(count)]
    for i, p in enumerate(params):
        a, b = comp[2 * i], comp[2 * i + 1]
        if a == b:
            continue
        parallel = 1 if orient[2 * i] == orient[2 * i + 1] else -1
        contribution = p * parallel
        doubled[a][b] += contribution
        doubled[b][a] += contribution
    for row in doubled:
        for v in row:
            if v % 2:
                raise AssertionError("half-integral linking number; tracing bug")
    return LinkingMatrix(tuple(tuple(v // 2 for v in row) for row in doubled))


def self_crossings(link) -> tuple[int, ...]:
    """Signed crossings of each component with itself, per component."""
    params = as_params(link)
    count, comp, _, orient = _component_data(params)
    out = [0] * count
    for i, p in enumerate(params):
        a, b = comp[2 * i], comp[2 * i + 1]
        if a == b:
            parallel = 1 if orient[2 * i] == orient[2 * i + 1] else -1
            out[a] += p * parallel
    return tuple(out)
