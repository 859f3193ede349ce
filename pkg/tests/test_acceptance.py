"""One test per acceptance criterion; each records a PASS/FAIL line."""

import itertools
import random
import time
from contextlib import contextmanager

import pytest

from conftest import ACCEPTANCE
from pretzel_chi import intmat
from pretzel_chi.classifier import ClassifierConfig, Status, classify, classify_many, crosscheck, enumerate_classes
from pretzel_chi.d_obstruction import coset_count_pm1
from pretzel_chi.families import chi_ribbon_certificate, replay, torus_chi_slice
from pretzel_chi.lattice_embed import brute_force_embeddings, find_embeddings, structural_check
from pretzel_chi.plumbing import build_plumbing, intersection_form, is_negative_definite
from pretzel_chi.pretzel_core import determinant, format_params, reciprocal_sum
from pretzel_chi.two_bridge import TwoBridgeFraction, is_chi_slice_two_bridge


@contextmanager
def criterion(number: int, title: str, budget: float):
    start = time.monotonic()
    ok = False
    detail = ""
    try:
        yield
        ok = True
    except AssertionError as exc:
        detail = f" -- {str(exc).splitlines()[0][:120]}" if str(exc) else ""
        raise
    finally:
        elapsed = time.monotonic() - start
        within = elapsed < budget
        status = "PASS" if ok and within else "FAIL"
        if ok and not within:
            detail = f" -- over budget ({budget:.0f} s)"
        ACCEPTANCE[number] = f"[{number:2d}] {status} {title} ({elapsed:.2f} s){detail}"
        if ok and not within:
            pytest.fail(f"criterion {number} took {elapsed:.1f} s, budget {budget} s")


def oriented(p):
    return p if reciprocal_sum(p) > 0 else tuple(-v for v in p)


def test_01_torus_sweep():
    with criterion(1, "T(2,a)=K(|a|,1) chi-slice exactly for |a|=4, 2<=|a|<=50", 1.0):
        hits = [a for a in range(2, 51) if is_chi_slice_two_bridge(TwoBridgeFraction(a, 1)).chi_slice]
        assert hits == [4], hits


def test_02_ones_and_a():
    with criterion(2, "P(1^[z],a) chi-slice iff a = z+-2, 1<=z<=10, 1<=a<=20", 5.0):
        wrong = []
        for z, a in itertools.product(range(1, 11), range(1, 21)):
            expect = a in (z + 2, z - 2)
            if z == 1:
                # a two-strand word is the torus link T(2, a+1)
                got = torus_chi_slice(1 + a)
            else:
                got = classify((1,) * z + (a,)).status == Status.CHI_SLICE
            if got != expect:
                wrong.append((z, a, got))
        assert not wrong, wrong


def test_03_three_strand_crosscheck():
    with criterion(3, "3-strand list crosscheck at |p|<=6 (YES-set, E/F-tagged unknowns)", 60.0):
        report = crosscheck("1.4", 6)
        assert report.passed, report.summary()


def test_04_positive_crosscheck():
    with criterion(4, "positive list crosscheck, m<=9, p<=4", 120.0):
        report = crosscheck("1.2", 4, max_strands=9)
        assert report.passed, report.summary()


def _four_strand_members(a, b):
    out = {(a, b, -b, -(a + 1)), (a, b, -b, -(a + 4))}
    out |= {(a, 2, 2, -1), (a, 2, 2, -a), (a, 2, 2, -(a + 4)), (a, 3, 1, -a), (a, 3, 1, -(a + 3)), (a, 1, -2, -2)}
    return out


def test_05_four_strand_families():
    with criterion(5, "4-strand families, 1<=a<=8, 1<=|b|<=5, certified with replayable trace", 60.0):
        members = set()
        for a in range(1, 9):
            for b in [x for x in range(-5, 6) if x]:
                members |= _four_strand_members(a, b)
        members |= {(1, 1, 1, 1), (1, 1, 1, 5), (2, 2, -3, -6), (1, 1, -2, -6)}
        bad = []
        for p in sorted(members):
            if any(v == 0 for v in p):
                continue
            v = classify(p)
            cert = chi_ribbon_certificate(p)
            if v.status != Status.CHI_SLICE or cert is None or not replay(cert, p):
                bad.append(format_params(p))
        assert not bad, bad


def test_06_greene_jabuka():
    with criterion(6, "P(2,2,-(1+l^2)): chi-slice l=1,2; GreeneJabuka l=3,4,5 with count<=4, |det At|=2l", 10.0):
        for lam in (1, 2):
            assert classify((2, 2, -(1 + lam * lam))).status == Status.CHI_SLICE, lam
        for lam in (3, 4, 5):
            p = (2, 2, -(1 + lam * lam))
            v = classify(p)
            assert v.status == Status.NOT_CHI_SLICE and v.rule == "GreeneJabuka", (lam, v.rule)
            g = build_plumbing(p)
            Q = intersection_form(g)
            search = find_embeddings(Q)
            reports = [(structural_check(e, Q, g), coset_count_pm1(e, early_exit=False)) for e in search]
            assert all(r.det_abs == 2 * lam for _, r in reports)
            assert all(r.fires for _, r in reports)
            crossing = [r for st, r in reports if st.k == 1]
            assert crossing and all(r.count <= 4 for r in crossing), (lam, [r.count for r in crossing])


def test_07_geometric():
    with criterion(7, "P(2,-3,2,-6) GeometricSpecial; all-even 3-strand p>1, q,r<-1, sum>0 obstructed", 10.0):
        assert classify((2, -3, 2, -6)).rule == "GeometricSpecial"
        assert classify((-2, 3, -2, 6)).rule == "GeometricSpecial"
        evens = [2, 4, 6, 8]
        checked = 0
        for p, q, r in itertools.product(evens, repeat=3):
            link = (p, -q, -r)
            if p > 1 and reciprocal_sum(link) > 0:
                checked += 1
                assert classify(link).status == Status.NOT_CHI_SLICE, link
        assert checked > 0


def test_08_determinant_identities():
    with criterion(8, "determinant identities for z,k,t<=6", 1.0):
        for z, k, t in itertools.product(range(7), repeat=3):
            word = (1,) * z + (2,) * (2 * k) + (t + 1,)
            if len(word) >= 3:
                assert abs(determinant(word)) == 4 ** k * ((t + 1) * (z + k) + 1), (z, k, t)
            word = (1,) * z + (2,) * (2 * k)
            if len(word) >= 3:
                assert abs(determinant(word)) == (z + k) * 4 ** k, (z, k)


def _small_forms():
    forms = {}
    values = [v for v in range(-5, 6) if v]
    for m in range(3, 6):
        for p in itertools.product(values, repeat=m):
            if determinant(p) == 0:
                continue
            q = intersection_form(build_plumbing(oriented(p))).Q
            if len(q) <= 5 and all(-q[i][i] <= 8 for i in range(len(q))):
                forms.setdefault(q, p)
    return forms


def test_09_embedding_oracle():
    with criterion(9, "pruned embedding search matches brute force (n<=5, |Q_ii|<=8, |p|<=5)", 300.0):
        forms = _small_forms()
        mismatches = []
        for q, p in forms.items():
            assert is_negative_definite(q)
            fast = {e.canonical() for e in find_embeddings(q, det_shortcut=False)}
            slow = brute_force_embeddings(q)
            if fast != slow:
                mismatches.append((format_params(p), len(fast), len(slow)))
        assert len(forms) > 50
        assert not mismatches, mismatches


def test_10_properties():
    with criterion(10, "HNF/coset signed-permutation invariance, |det At|^2=|det Q|, cert/obstruction exclusion", 300.0):
        rng = random.Random(2024)
        forms = list(_small_forms().keys())
        for q in forms:
            for e in find_embeddings(q):
                assert e.det() ** 2 == abs(intmat.det(q))
                base = coset_count_pm1(e).count
                perm = list(range(e.n))
                rng.shuffle(perm)
                signs = [rng.choice((1, -1)) for _ in perm]
                moved = [[signs[i] * v for v in e.At[perm[i]]] for i in range(e.n)]
                assert coset_count_pm1(moved).count == base
        config = ClassifierConfig(check_soundness=True)
        links = enumerate_classes(3, 6) + enumerate_classes(4, 6)
        verdicts = classify_many(links, config)  # raises SoundnessError on any overlap
        assert len(verdicts) == len(links)
