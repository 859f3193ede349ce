"""The decision pipeline, bounded sweeps, and cross-checks against the known lists."""

from __future__ import annotations

import enum
import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Union

from . import families
from .d_obstruction import coset_count_pm1
from .families import Certificate, ExceptionalTag
from .lattice_embed import find_embeddings, structural_check
from .plumbing import build_plumbing, intersection_form, is_negative_definite
from .pretzel_core import (
    Params,
    as_params,
    component_count,
    determinant,
    class_signature,
    dihedral_images,
    dihedral_canonical as dihedral_min,
    format_params,
    isotopy_orbit,
    pairwise_linking,
    reciprocal_sum,
)
from .two_bridge import is_chi_slice_two_bridge, match_two_bridge_pattern
from .intmat import is_square


class Status(str, enum.Enum):
    CHI_SLICE = "ChiSlice"
    NOT_CHI_SLICE = "NotChiSlice"
    UNKNOWN = "Unknown"
    ZERO_DET = "ZeroDeterminant"


class SoundnessError(AssertionError):
    """A certified link was also obstructed: a bug somewhere upstream."""


@dataclass(frozen=True)
class ClassifierConfig:
    embed_cap: int = 10_000
    node_limit: Optional[int] = 5_000_000
    time_limit: Optional[float] = 60.0
    check_structure: bool = True  # validate -2 chain rigidity on every embedding
    check_soundness: bool = False  # also run the obstructions on certified links


@dataclass(frozen=True)
class ObstructionRecord:
    rule: str  # SquareDet | Geometric3Component | GeometricSpecial | Donaldson | GreeneJabuka | TwoBridgeLisca
    evidence: dict

    def to_json(self) -> dict:
        return {"rule": self.rule, "evidence": self.evidence}


Reason = Union[Certificate, ObstructionRecord, ExceptionalTag, str]


@dataclass
class Verdict:
    params: Params
    status: Status
    reason: Reason
    det: int
    components: int
    elapsed: float = 0.0
    stats: dict = field(default_factory=dict)

    @property
    def rule(self) -> str:
        r = self.reason
        if isinstance(r, ObstructionRecord):
            return r.rule
        if isinstance(r, Certificate):
            return r.kind
        if isinstance(r, ExceptionalTag):
            return f"tag:{r.which}"
        return r

    @property
    def family(self) -> str:
        r = self.reason
        if isinstance(r, Certificate):
            return r.family or ""
        if isinstance(r, ExceptionalTag):
            return r.which
        return ""

    def reason_json(self):
        r = self.reason
        if isinstance(r, (Certificate, ObstructionRecord)):
            return r.to_json()
        if isinstance(r, ExceptionalTag):
            out = {"tag": r.which, "witness": _jsonable(r.witness)}
            if r.reading:
                out["reading"] = r.reading
                out["readings"] = list(r.readings)
            return out
        return r

    def to_json(self, timing: bool = True) -> dict:
        out = {
            "params": list(self.params),
            "det": self.det,
            "components": self.components,
            "status": self.status.value,
            "rule": self.rule,
            "family": self.family,
            "reason": self.reason_json(),
            "stats": self.stats,
        }
        if timing:
            out["elapsed_ms"] = round(self.elapsed * 1000, 3)
        return out


def _jsonable(x):
    if isinstance(x, tuple):
        return [_jsonable(v) for v in x]
    return x


def _all_even_three_component(params: Params) -> bool:
    if len(params) != 3 or any(p % 2 for p in params):
        return False
    pos = [p for p in params if p > 0]
    neg = [p for p in params if p < 0]
    return len(pos) == 1 and pos[0] > 1 and len(neg) == 2 and all(q < -1 for q in neg) and reciprocal_sum(params) > 0


_SPECIAL = (2, -3, 2, -6)


def _is_special(params: Params) -> bool:
    images = set(dihedral_images(params)) | set(dihedral_images(tuple(-p for p in params)))
    return _SPECIAL in images


def classify(link, config: ClassifierConfig = ClassifierConfig()) -> Verdict:
    start = time.monotonic()
    params = as_params(link)
    det = determinant(params)
    comps = component_count(params)

    def done(status: Status, reason: Reason, **stats) -> Verdict:
        return Verdict(params, status, reason, det, comps, time.monotonic() - start, stats)

    if det == 0:
        return done(Status.ZERO_DET, "det=0")

    cert = families.chi_ribbon_certificate(params)
    if cert is not None:
        if config.check_soundness:
            _assert_unobstructed(params, config)
        return done(Status.CHI_SLICE, cert)

    form = match_two_bridge_pattern(params)
    if form is not None:
        tb = is_chi_slice_two_bridge(form.fraction)
        if tb.chi_slice:
            raise SoundnessError(f"{format_params(params)} passes the 2-bridge test but has no certificate")
        return done(Status.NOT_CHI_SLICE, ObstructionRecord("TwoBridgeLisca", {
            "fraction": str(form.fraction),
            "pattern": form.pattern,
            "string": list(tb.string),
            "dual": list(tb.dual),
        }))

    if not is_square(abs(det)):
        return done(Status.NOT_CHI_SLICE, ObstructionRecord("SquareDet", {"det": det}))

    oriented = params if reciprocal_sum(params) > 0 else tuple(-p for p in params)

    if _all_even_three_component(oriented):
        lk = pairwise_linking(oriented)
        return done(Status.NOT_CHI_SLICE, ObstructionRecord("Geometric3Component", {
            "params": list(oriented), "components": 3, "linking": [list(r) for r in lk.entries],
        }))
    if _is_special(params):
        lk = pairwise_linking(params)
        return done(Status.NOT_CHI_SLICE, ObstructionRecord("GeometricSpecial", {
            "params": list(params), "components": comps, "linking": [list(r) for r in lk.entries],
        }))

    graph = build_plumbing(oriented)
    Q = intersection_form(graph)
    if not is_negative_definite(Q):
        raise SoundnessError(f"plumbing of {format_params(oriented)} is not negative definite")
    search = find_embeddings(Q, cap=config.embed_cap, node_limit=config.node_limit,
                             time_limit=config.time_limit)
    stats = {"rank": Q.n, "embeddings": len(search), "nodes": search.nodes}
    if config.check_structure:
        for e in search:
            structural_check(e, Q, graph)
    if not search.embeddings and not search.truncated:
        return done(Status.NOT_CHI_SLICE, ObstructionRecord("Donaldson", {"rank": Q.n, "det": det}), **stats)
    if search.truncated:
        tag = families.exceptional_tag(params)
        if tag is not None:
            stats["tag"] = tag.which
        return done(Status.UNKNOWN, "truncated", truncated=search.reason, **stats)

    reports = [coset_count_pm1(e) for e in search]
    if all(r.fires for r in reports):
        return done(Status.NOT_CHI_SLICE, ObstructionRecord("GreeneJabuka", {
            "classes": [{"count": r.count, "det_abs": r.det_abs} for r in reports],
        }), **stats)

    tag = families.exceptional_tag(params)
    if tag is not None:
        return done(Status.UNKNOWN, tag, **stats)
    return done(Status.UNKNOWN, "untagged", **stats)


def _assert_unobstructed(params: Params, config: ClassifierConfig) -> None:
    det = determinant(params)
    if not is_square(abs(det)):
        raise SoundnessError(f"{format_params(params)} certified but |det| = {abs(det)} is not a square")
    oriented = params if reciprocal_sum(params) > 0 else tuple(-p for p in params)
    if _all_even_three_component(oriented) or _is_special(params):
        raise SoundnessError(f"{format_params(params)} certified but a geometric rule applies")
    Q = intersection_form(build_plumbing(oriented))
    search = find_embeddings(Q, cap=config.embed_cap, node_limit=config.node_limit,
                             time_limit=config.time_limit)
    if search.truncated:
        return
    if not search.embeddings:
        raise SoundnessError(f"{format_params(params)} certified but has no lattice embedding")
    if all(coset_count_pm1(e).fires for e in search):
        raise SoundnessError(f"{format_params(params)} certified but every embedding fails the coset count")


# --- sweeps ------------------------------------------------------------------------


def class_key(params: Params, mirror_dedup: bool = True) -> Params:
    key = isotopy_orbit(params)[0]
    if mirror_dedup:
        key = min(key, isotopy_orbit(tuple(-p for p in params))[0])
    return key


def _bracelets(length: int, values: list[int]) -> Iterator[Params]:
    if length == 0:
        yield ()
        return
    for first in values:
        # a dihedral-minimal word starts with its minimum entry
        rest_values = [v for v in values if v >= first]
        for rest in itertools.product(rest_values, repeat=length - 1):
            word = (first,) + rest
            if dihedral_min(word) == word:
                yield word


def enumerate_classes(
    m: int,
    bound: int,
    positive_only: bool = False,
    mirror_dedup: bool = True,
    include_zero: bool = False,
) -> list[Params]:
    """Canonical representatives of all m-strand links with 1 <= |p_i| <= bound.

    A class is fixed by its multiset of +-1 entries and the dihedral class of
    the remaining entries, so those are generated directly.
    """
    if m < 3 or bound < 1:
        raise ValueError("need m >= 3 and bound >= 1")
    unit_values = [1] if positive_only else [-1, 1]
    core_values = [v for v in range(-bound, bound + 1) if abs(v) >= 2 and (v > 0 or not positive_only)]
    seen: dict = {}
    for u in range(m + 1):
        for units in itertools.combinations_with_replacement(unit_values, u):
            for core in _bracelets(m - u, core_values):
                word = units + core
                if not include_zero and determinant(word) == 0:
                    continue
                sig = class_signature(word)
                if mirror_dedup:
                    sig = min(sig, class_signature(tuple(-p for p in word)))
                if sig not in seen:
                    seen[sig] = class_key(word, mirror_dedup)
    return sorted(set(seen.values()))


def _classify_job(args) -> Verdict:
    params, config = args
    return classify(params, config)


def classify_many(links: Iterable[Params], config: ClassifierConfig = ClassifierConfig(), jobs: int = 1) -> list[Verdict]:
    """Order-preserving, so output does not depend on the number of workers."""
    links = list(links)
    if jobs <= 1:
        return [classify(p, config) for p in links]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_classify_job, [(p, config) for p in links], chunksize=8))


def enumerate_verdicts(m: int, bound: int, config: ClassifierConfig = ClassifierConfig(), jobs: int = 1,
                       positive_only: bool = False, mirror_dedup: bool = True) -> list[Verdict]:
    return classify_many(enumerate_classes(m, bound, positive_only, mirror_dedup), config, jobs)


# --- cross-checks against the published lists ----------------------------------------


@dataclass
class CrosscheckReport:
    check_id: str
    checked: int
    passed: bool
    problems: list[str]
    counts: dict

    def summary(self) -> str:
        head = f"crosscheck {self.check_id}: {'PASS' if self.passed else 'FAIL'} ({self.checked} classes; " + \
            ", ".join(f"{k}={v}" for k, v in sorted(self.counts.items())) + ")"
        return "\n".join([head] + [f"  {p}" for p in self.problems])


def _tally(verdicts: list[Verdict]) -> dict:
    out: dict = {}
    for v in verdicts:
        out[v.status.value] = out.get(v.status.value, 0) + 1
    return out


def crosscheck(check_id: str, bound: int, max_strands: int = 9,
               config: ClassifierConfig = ClassifierConfig(), jobs: int = 1) -> CrosscheckReport:
    if check_id not in families.CROSSCHECK_TABLES:
        raise ValueError(f"unknown crosscheck id {check_id!r}; expected one of {sorted(families.CROSSCHECK_TABLES)}")
    table = families.CROSSCHECK_TABLES[check_id]
    if check_id == "1.2":
        links = [p for m in range(3, max_strands + 1) for p in enumerate_classes(m, bound, positive_only=True)]
    elif check_id == "1.4":
        links = enumerate_classes(3, bound)
    else:
        links = enumerate_classes(4, bound)
    verdicts = classify_many(links, config, jobs)
    problems: list[str] = []
    for v in verdicts:
        listed = families.family_of(v.params, table) is not None
        if check_id == "1.7":
            # the all-positive case of the 4-strand statement defers to the positive list
            listed = listed or families.family_of(v.params, "positive") is not None
        name = format_params(v.params)
        if check_id == "1.6":
            if listed and v.status != Status.CHI_SLICE:
                problems.append(f"{name} is listed but classified {v.status.value} ({v.rule})")
            continue
        if check_id == "1.7":
            candidate = families.thm17_candidate(v.params) is not None
            if v.status == Status.CHI_SLICE and not (listed or candidate):
                problems.append(f"{name} certified but neither listed nor a candidate")
            if v.status == Status.UNKNOWN and not (candidate or v.reason == "truncated"):
                problems.append(f"{name} undecided without a candidate tag ({v.rule})")
            if listed and v.status == Status.NOT_CHI_SLICE:
                problems.append(f"{name} is listed but obstructed by {v.rule}")
            continue
        if listed and v.status != Status.CHI_SLICE:
            problems.append(f"{name} is listed but classified {v.status.value} ({v.rule})")
        if not listed and v.status == Status.CHI_SLICE:
            problems.append(f"{name} certified ({v.family or v.rule}) but not listed")
        if v.status == Status.UNKNOWN:
            tagged = isinstance(v.reason, ExceptionalTag) and v.reason.which in ("E", "F")
            if check_id == "1.4" and not tagged:
                problems.append(f"{name} undecided without an E/F tag ({v.rule})")
            if check_id == "1.2" and v.reason != "truncated":
                problems.append(f"{name} undecided ({v.rule})")
    return CrosscheckReport(check_id, len(verdicts), not problems, problems, _tally(verdicts))
