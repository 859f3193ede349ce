import itertools
import json

import pytest
from hypothesis import given, strategies as st

from pretzel_chi.families import (
    ExceptionalTag,
    apply_rule,
    chi_ribbon_certificate,
    exceptional_tag,
    family_of,
    replay,
    replay_json,
    thm17_candidate,
    verify_tag,
)
from pretzel_chi.pretzel_core import dihedral_images

from strategies import nonzero_det_params


def cert(p):
    c = chi_ribbon_certificate(p)
    assert c is not None, p
    assert replay(c, p)
    assert replay_json(json.loads(c.dumps()), p)
    return c


class TestCertificates:
    def test_positive_eight_twos(self):
        c = cert((2,) * 8)
        assert c.kind == "FamilyTag" and c.family == "P(2^[8])"

    def test_bb(self):
        c = cert((5, -3, 3))
        assert any(s.rule == "R-bb" for s in c.trace)
        assert "unlink" in c.trace[-1].result

    def test_four_strand_family(self):
        c = cert((7, 2, 2, -11))
        assert c.kind == "FamilyTag" and c.family == "P(a,2,2,-(a+4))"

    def test_special_ordering_not_certified(self):
        assert chi_ribbon_certificate((2, -3, 2, -6)) is None
        cert((2, 2, -3, -6))

    @pytest.mark.parametrize("p", [(1, 1, 4), (1, -2, -3), (1, -3, -6), (1, -2, -6), (2, 2, 3), (2, 2, -5),
                                   (1, 1, 1, 1), (1, 1, 1, 5), (1, 1, -2, -6), (3, -4, 4, 1)])
    def test_sporadic(self, p):
        cert(p)

    @pytest.mark.parametrize("rule,word,after", [
        ("R-422", (2, 2, 3, 5), (1, 3, 5)),
        ("R-422", (-2, -2, 3, 5), (-1, 3, 5)),
        ("R-22", (2, 2, 3, 5, 7), (1, 3, 5, 7)),
        ("R-2236", (2, 2, -3, -6), (1, -3, -6)),
        ("R-bb", (4, -3, 3), None),
        ("R-221a", (2, 2, -1, 6), None),
        ("R-13", (1, 3, 5, -8), None),
        ("R-3aa1", (3, -5, 5, 1), None),
    ])
    def test_rules(self, rule, word, after):
        out = apply_rule(rule, word)
        assert out is not None
        assert out[0] == after

    def test_r22a_torus_base(self):
        out = apply_rule("R-22a", (2, 2, -5))
        assert out is not None and out[2] == "T(2,-4)"
        assert apply_rule("R-22a", (2, 2, 7)) is None
        assert apply_rule("R-22", (2, 2, -5)) is None

    def test_tampered_trace_rejected(self):
        c = chi_ribbon_certificate((7, 2, 2, -11))
        data = json.loads(c.dumps())
        data["trace"][0]["before"] = "P(7,2,2,-12)"
        assert not replay_json(data, (7, 2, 2, -11))

    @given(nonzero_det_params(max_size=4, bound=5), st.randoms())
    def test_certificate_invariant_under_moves(self, p, rnd):
        c = chi_ribbon_certificate(p)
        q = rnd.choice(list(dihedral_images(p)))
        assert (chi_ribbon_certificate(q) is None) == (c is None)
        assert (chi_ribbon_certificate(tuple(-v for v in p)) is None) == (c is None)
        if c is not None:
            assert replay(c, p)


class TestFamilies:
    def test_lookup(self):
        assert family_of((2, 2, -5), "three-strand") == "3-strand sporadic"
        assert family_of((1, 5, -9)) == "P(1,a,-(a+4))"
        assert family_of((-6, 6, 2)) == "P(a,-a,b)"
        assert family_of((1, 1, 2, 2, 5)) == "P(1^[z],2^[2k],k+z±2)"
        assert family_of((2, -3, 2, -6)) is None

    @pytest.mark.parametrize("a,b", [(a, b) for a in range(1, 9) for b in (-5, -2, 1, 3, 5)])
    def test_listed_members_certified(self, a, b):
        for p in ((a, b, -b, -(a + 4)), (a, b, -b, -(a + 1))):
            if any(v == 0 for v in p):
                continue
            cert(p)


class TestExceptionalTags:
    def test_e(self):
        tag = exceptional_tag((97, -99, -4802))
        assert tag is not None and tag.which == "E"
        assert verify_tag(tag, (97, -99, -4802))
        assert exceptional_tag((97, -99, -4901)) is None or exceptional_tag((97, -99, -4901)).which != "E"

    def test_f(self):
        tag = exceptional_tag((1, -3, -3)) or exceptional_tag((3, -3, -1))
        # P(1,-3,-3) has odd parameters only, so the two-even rule keeps it out of F
        assert tag is None or tag.which != "F"
        tag = exceptional_tag((1, -3, -6))
        assert tag is None or verify_tag(tag, (1, -3, -6))

    def test_thm17_examples(self):
        tag = thm17_candidate((2, 7, 2, -7))
        assert tag is not None and tag.which == "ordering"
        tag = thm17_candidate((5, 3, -6, -3))
        assert tag is not None and tag.which == "ordering"

    def test_three_vector_reports_both_readings(self):
        found = []
        for a, (q, r, t) in itertools.product(range(1, 3), itertools.combinations_with_replacement(range(-9, -1), 3)):
            p = (a, q, r, t)
            tag = thm17_candidate(p)
            if tag and tag.which == "three-vector":
                found.append(tag)
                assert verify_tag(tag, p)
        assert found
        assert all(t.readings for t in found)

    @given(st.integers(1, 6), st.lists(st.integers(-3, 3), min_size=4, max_size=4))
    def test_f_round_trip(self, a, xy):
        x1, x2, y1, y2 = xy
        if x1 * y1 + x2 * y2 != -a or abs(x1 * y2 - x2 * y1) > 4:
            return
        p = (a, -a - x1 * x1 - x2 * x2, -a - y1 * y1 - y2 * y2)
        if sum(1 for v in p if v % 2 == 0) != 2:
            return
        tag = exceptional_tag(p)
        assert tag is not None and tag.which in ("E", "F")
        assert verify_tag(tag, p)

    @given(st.integers(0, 3))
    def test_e_round_trip(self, j):
        a = 120 * j + (1 if j % 2 else 97)
        p = (a, -(a + 2), -((a + 1) ** 2) // 2)
        tag = exceptional_tag(p)
        assert isinstance(tag, ExceptionalTag) and tag.which == "E" and verify_tag(tag, p)
