"""Continued fractions, dual strings and the chi-slice test for 2-bridge links.

K(p,q) is chi-slice exactly when the negative continued fraction string of
p/q, its reverse, its dual or the reverse of its dual has one of seven
shapes (forms "a".."g" below).  Pretzel links with enough +-1 parameters
are 2-bridge; pretzel_two_bridge_form finds their classifying fraction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

from .pretzel_core import Params, as_params, determinant, unit_first_words

CFString = tuple[int, ...]


class DivisionByZero(ZeroDivisionError):
    pass


class ZeroDeterminant(ValueError):
    pass


@dataclass(frozen=True)
class TwoBridgeFraction:
    """Classifying fraction p/q of K(p,q): gcd 1 and p > q > 0.

    The unknot is the single exception, stored as 1/1.
    """

    p: int
    q: int

    def __post_init__(self) -> None:
        if self.p == 1 and self.q == 1:
            return
        if not (self.p > self.q > 0) or gcd(self.p, self.q) != 1:
            raise ValueError(f"not a normalized fraction: {self.p}/{self.q}")

    @classmethod
    def from_rational(cls, value: Fraction | int) -> "TwoBridgeFraction":
        """Normalize any nonzero rational n/d to K(|n|, d*sign(n) mod |n|)."""
        value = Fraction(value)
        n, d = value.numerator, value.denominator
        if n == 0:
            raise ZeroDeterminant("classifying fraction 0: split 2-component unlink")
        p = abs(n)
        if p == 1:
            return cls(1, 1)
        q = (d if n > 0 else -d) % p
        return cls(p, q)

    @property
    def is_unknot(self) -> bool:
        return self.p == 1

    def equivalents(self) -> frozenset[int]:
        """All q' with K(p,q') isotopic to K(p,q) up to mirror image."""
        if self.p == 1:
            return frozenset({1})
        inv = pow(self.q, -1, self.p)
        return frozenset({self.q, inv, self.p - self.q, self.p - inv})

    def same_link_up_to_mirror(self, other: "TwoBridgeFraction") -> bool:
        return self.p == other.p and other.q in self.equivalents()

    def __str__(self) -> str:
        return f"K({self.p},{self.q})"


def cf_plus(entries: Sequence[int]) -> Fraction:
    return _cf(entries, 1)


def cf_minus(entries: Sequence[int]) -> Fraction:
    return _cf(entries, -1)


def _cf(entries: Sequence[int], sign: int) -> Fraction:
    if not entries:
        raise ValueError("empty continued fraction")
    value = Fraction(entries[-1])
    for x in reversed(entries[:-1]):
        if value == 0:
            raise DivisionByZero(f"tail evaluates to 0 in {list(entries)}")
        value = x + sign / value
    return value


def neg_cf_expand(p: int | TwoBridgeFraction, q: Optional[int] = None) -> CFString:
    """The unique string of entries >= 2 with [a1,...,an]^- = p/q."""
    if isinstance(p, TwoBridgeFraction):
        p, q = p.p, p.q
    if q is None or not (p > q > 0) or gcd(p, q) != 1:
        raise ValueError(f"expected coprime p > q > 0, got {p}/{q}")
    out = []
    while q:
        a = -(-p // q)
        out.append(a)
        p, q = q, a * q - p
    return tuple(out)


def dual_string(s: Sequence[int]) -> CFString:
    """Dual string via the block formula.

    Writing s = (2^[m1], 3+n1, ..., 2^[m_{j-1}], 3+n_{j-1}, 2^[mj], 2+nj) the
    dual is (2+m1, 2^[n1], 3+m2, 2^[n2], ..., 3+mj, 2^[nj]).
    """
    s = tuple(s)
    if not s or any(a < 2 for a in s):
        raise ValueError(f"dual string needs entries >= 2, got {s}")
    runs = [0]  # runs of 2s, separated by big entries in the prefix
    bigs = []
    for a in s[:-1]:
        if a == 2:
            runs[-1] += 1
        else:
            bigs.append(a - 3)
            runs.append(0)
    bigs.append(s[-1] - 2)
    out = [2 + runs[0]] + [2] * bigs[0]
    for m_i, n_i in zip(runs[1:], bigs[1:]):
        out += [3 + m_i] + [2] * n_i
    return tuple(out)


def reverse(s: Sequence[int]) -> CFString:
    return tuple(reversed(s))


# --- the seven shapes ---------------------------------------------------------


@dataclass(frozen=True)
class LiscaTag:
    family: str
    witness: tuple
    transform: str
    matched: CFString

    def instantiate(self) -> CFString:
        return instantiate(self.family, self.witness)


def instantiate(family: str, witness: tuple) -> CFString:
    if family == "a":
        b, c = witness
        return tuple(b) + (2,) + reverse(c)
    if family == "b":
        b, c = witness
        cr = list(reverse(c))
        cr[0] += 1
        return tuple(b[:-1]) + (b[-1] + 1, 2, 2) + tuple(cr)
    x, y = witness
    shapes = {
        "c": (2,) * x + (3, 2 + y, 2 + x, 3) + (2,) * y,
        "d": (2,) * x + (3 + y, 2, 2 + x, 3) + (2,) * y,
        "e": (2 + x, 2 + y, 3) + (2,) * x + (4,) + (2,) * y,
        "f": (2 + x, 2, 3 + y) + (2,) * x + (4,) + (2,) * y,
        "g": (3 + x, 2, 3 + y, 3) + (2,) * x + (3,) + (2,) * y,
    }
    return shapes[family]


# length of each shape minus x + y
_FIXED_LENGTH_OFFSET = {f: len(instantiate(f, (0, 0))) for f in "cdefg"}


def _match_form(s: CFString) -> Optional[tuple[str, tuple]]:
    n = len(s)
    # (a): b, 2, reverse(c) with b and c dual
    for k in range(1, n - 1):
        if s[k] == 2:
            b, c = s[:k], reverse(s[k + 1:])
            if dual_string(b) == c:
                return "a", (b, c)
    # (b): b with last entry +1, 2, 2, reverse(c) with first entry +1
    for k in range(1, n - 2):
        if s[k] == 2 and s[k + 1] == 2 and s[k - 1] >= 3 and k + 2 < n and s[k + 2] >= 3:
            b = s[:k - 1] + (s[k - 1] - 1,)
            tail = list(s[k + 2:])
            tail[0] -= 1
            c = reverse(tail)
            if dual_string(b) == c:
                return "b", (b, c)
    # (c)-(g): lengths fix x + y, so try every split
    for family, offset in _FIXED_LENGTH_OFFSET.items():
        total = n - offset
        for x in range(total + 1):
            witness = (x, total - x)
            if instantiate(family, witness) == s:
                return family, witness
    return None


def lisca_match(s: Sequence[int]) -> Optional[LiscaTag]:
    s = tuple(s)
    if not s or any(a < 2 for a in s):
        raise ValueError(f"expected entries >= 2, got {s}")
    d = dual_string(s)
    for transform, t in (
        ("identity", s),
        ("reverse", reverse(s)),
        ("dual", d),
        ("reverse-dual", reverse(d)),
    ):
        found = _match_form(t)
        if found:
            return LiscaTag(found[0], found[1], transform, t)
    return None


@dataclass(frozen=True)
class TwoBridgeVerdict:
    fraction: TwoBridgeFraction
    chi_slice: bool
    string: CFString = ()
    dual: CFString = ()
    tag: Optional[LiscaTag] = None


def is_chi_slice_two_bridge(f: TwoBridgeFraction) -> TwoBridgeVerdict:
    if f.is_unknot:
        return TwoBridgeVerdict(f, True)
    s = neg_cf_expand(f)
    tag = lisca_match(s)
    return TwoBridgeVerdict(f, tag is not None, s, dual_string(s), tag)


def torus_fraction(a: int) -> TwoBridgeFraction:
    """T(2,a) = C(a) has classifying fraction a/1."""
    return TwoBridgeFraction.from_rational(Fraction(a))


# --- pretzel links that are 2-bridge -----------------------------------------


@dataclass(frozen=True)
class TwoBridgeForm:
    fraction: TwoBridgeFraction
    pattern: str
    word: Params
    value: Fraction = field(compare=False)


def _ones_and_one(word: Params) -> Optional[tuple[str, Fraction]]:
    # P(1^[z], a) = C(z, a) with fraction [z, a]^+
    z = len(word) - 1
    if all(v == 1 for v in word[:-1]):
        return f"P(1^[{z}],a)", cf_plus((z, word[-1]))
    return None


def _one_a_b(word: Params) -> Optional[tuple[str, Fraction]]:
    # P(1,a,b) = K(-ab-a-b, b+1)
    if len(word) != 3 or word[0] != 1:
        return None
    a, b = word[1], word[2]
    if b == -1:
        return None
    return "P(1,a,b)", Fraction(-a * b - a - b, b + 1)


def _one_one_a_b(word: Params) -> Optional[tuple[str, Fraction]]:
    # P(1,1,a,b) = P(b,1,1,a) = C(-b,-2,-a)
    if len(word) != 4 or word[0] != 1 or word[1] != 1:
        return None
    a, b = word[2], word[3]
    try:
        return "P(1,1,a,b)", cf_plus((-b, -2, -a))
    except DivisionByZero:
        return None


_PATTERNS = (_ones_and_one, _one_a_b, _one_one_a_b)


def match_two_bridge_pattern(link) -> Optional[TwoBridgeForm]:
    """Find a 2-bridge description of a pretzel link, trying its mirror too.

    The numerator of the returned value always equals |det L|; this is
    asserted as a guard against sign-convention slips.
    """
    params = as_params(link)
    det = determinant(params)
    for sign, candidate in ((1, params), (-1, tuple(-v for v in params))):
        # every pattern starts with +-1 entries, and units move freely
        words = unit_first_words(candidate)
        for pattern in _PATTERNS:
            for word in words:
                found = pattern(word)
                if found is None:
                    continue
                name, value = found
                if value == 0 or det == 0:
                    raise ZeroDeterminant(f"{params} has determinant 0")
                if abs(value.numerator) != abs(det):
                    raise AssertionError(f"2-bridge numerator {value} disagrees with det {det} for {params}")
                value = sign * value  # fraction of L itself, not of its mirror
                return TwoBridgeForm(TwoBridgeFraction.from_rational(value), name, word, value)
    return None


def pretzel_two_bridge_form(link) -> Optional[TwoBridgeFraction]:
    form = match_two_bridge_pattern(link)
    return form.fraction if form else None
