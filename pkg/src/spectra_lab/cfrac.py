"""Continued fractions with eventually periodic tails.

A bi-infinite digit sequence carries a finite center block flanked by two
repeating periods.  Values of one-sided expansions are exact quadratic
surds; the two-sided height (right value plus reflected left value) is an
exact radical sum.  Bounded-digit expansions generate the regular Cantor
sets of the Gauss-map branches x -> 1/(a+x).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cantor import MoebiusBranch, RegularCantorSet
from .surds import QuadraticSurd, TailSum

__all__ = [
    "CFSequence",
    "DIGIT_CAP",
    "cf_value",
    "convergents",
    "gauss_cantor_set",
    "gauss_hull",
    "height_function",
]

DIGIT_CAP = 10**6


def _check_digit(a: int, allow_zero: bool = False) -> int:
    a = int(a)
    low = 0 if allow_zero else 1
    if not low <= a <= DIGIT_CAP:
        raise ValueError(f"digit {a} outside [{low}, {DIGIT_CAP}]")
    return a


@dataclass(frozen=True, slots=True)
class CFSequence:
    """Bi-infinite digit sequence: center block at positions -m..m, with
    the left period repeating leftward and the right period rightward.

    Tail phases are significant: position -m-1 reads the last entry of
    ``left_period`` and position m+1 reads the first of ``right_period``.
    """

    center: tuple[int, ...]
    left_period: tuple[int, ...]
    right_period: tuple[int, ...]

    @staticmethod
    def make(center: Sequence[int], left_period: Sequence[int],
             right_period: Sequence[int]) -> "CFSequence":
        c = tuple(_check_digit(a) for a in center)
        lp = tuple(_check_digit(a) for a in left_period)
        rp = tuple(_check_digit(a) for a in right_period)
        if len(c) % 2 == 0 or not c:
            raise ValueError("center must have odd length")
        if not lp or not rp:
            raise ValueError("tail periods must be nonempty")
        return CFSequence(c, lp, rp)

    @property
    def radius(self) -> int:
        return (len(self.center) - 1) // 2

    def digit(self, i: int) -> int:
        idx = i + self.radius
        if 0 <= idx < len(self.center):
            return self.center[idx]
        if idx < 0:
            return self.left_period[idx % len(self.left_period)]
        return self.right_period[(idx - len(self.center)) % len(self.right_period)]

    def digits(self, lo: int, hi: int) -> tuple[int, ...]:
        return tuple(self.digit(i) for i in range(lo, hi))

    def shifted(self, k: int) -> "CFSequence":
        """Sequence with digit(i) equal to this one's digit(i + k)."""
        if k == 0:
            return self
        m2 = self.radius + abs(k)
        center = tuple(self.digit(i + k) for i in range(-m2, m2 + 1))
        L, R = len(self.left_period), len(self.right_period)
        off_l = (k - abs(k)) % L
        off_r = (k + abs(k)) % R
        left = tuple(self.left_period[(j + off_l) % L] for j in range(L))
        right = tuple(self.right_period[(j + off_r) % R] for j in range(R))
        return CFSequence(center, left, right)

    def to_json(self) -> dict:
        return {
            "left_period": list(self.left_period),
            "center": list(self.center),
            "right_period": list(self.right_period),
        }

    @staticmethod
    def from_json(data: dict) -> "CFSequence":
        return CFSequence.make(data["center"], data["left_period"],
                               data["right_period"])


def cf_value(preperiod: Sequence[int], period: Sequence[int] | None = None) -> QuadraticSurd:
    """Exact value of [a0; a1, a2, ...] with an eventually periodic tail.

    The leading digit may be zero; a purely periodic tail solves its
    fixed-point quadratic exactly.
    """
    pre = tuple(int(a) for a in preperiod)
    per = tuple(int(a) for a in period) if period else ()
    for k, a in enumerate(pre):
        _check_digit(a, allow_zero=(k == 0))
    for a in per:
        _check_digit(a)
    if not pre and not per:
        raise ValueError("empty continued fraction")

    if per:
        # tail x = (p x + q)/(r x + s) from the period's digit matrix
        p, q, r, s = 1, 0, 0, 1
        for a in per:
            p, q, r, s = p * a + q, p, r * a + s, r
        disc = (p - s) * (p - s) + 4 * q * r
        val: QuadraticSurd = (QuadraticSurd.from_fraction(Fraction(p - s, 2 * r))
                              + QuadraticSurd.sqrt_of(Fraction(disc, 4 * r * r)))
    else:
        tail = Fraction(pre[-1])
        if len(pre) == 1:
            return QuadraticSurd.from_fraction(tail)
        if tail == 0:
            raise ValueError("zero digit inside a finite expansion")
        acc = tail
        for a in reversed(pre[:-1]):
            acc = a + 1 / acc
        return QuadraticSurd.from_fraction(acc)

    for a in reversed(pre):
        val = a + 1 / val
    return val


def convergents(digits: Sequence[int]):
    """Yield the convergents p_n/q_n of a finite digit list."""
    p0, q0, p1, q1 = 1, 0, int(digits[0]), 1
    yield Fraction(p1, q1)
    for a in digits[1:]:
        p0, q0, p1, q1 = p1, q1, int(a) * p1 + p0, int(a) * q1 + q0
        yield Fraction(p1, q1)


def height_function(seq: CFSequence, position: int = 0) -> TailSum:
    """Exact [a_pos; a_{pos+1}, ...] + [0; a_{pos-1}, a_{pos-2}, ...].

    The two one-sided values may live in different quadratic fields, so
    the result is a radical sum rather than a single surd; use
    ``as_surd()`` when both tails share a field.
    """
    s = seq.shifted(position) if position else seq
    m = s.radius
    right = cf_value(s.center[m:], s.right_period)
    left = cf_value((0,) + tuple(reversed(s.center[:m])),
                    tuple(reversed(s.left_period)))
    return TailSum.from_terms(right, left)


def _surd_brackets(x: QuadraticSurd) -> tuple[float, float]:
    """Outward float pair around an exact surd: a 40-digit decimal pins
    the value to well under an ulp, then two ulp steps absorb both the
    decimal truncation and the float conversion."""
    from decimal import Decimal

    f = float(Decimal(x.decimal(40)))
    lo = math.nextafter(math.nextafter(f, -math.inf), -math.inf)
    hi = math.nextafter(math.nextafter(f, math.inf), math.inf)
    return lo, hi


def gauss_hull(n: int) -> tuple[QuadraticSurd, QuadraticSurd]:
    """Exact endpoints of the digit-bounded expansion set: the periodic
    points [0; n,1,n,1,...] and [0; 1,n,1,n,...]."""
    if n < 1:
        raise ValueError("need at least digit 1")
    if n == 1:
        fixed = cf_value((0,), (1,))
        return fixed, fixed
    return cf_value((0,), (n, 1)), cf_value((0,), (1, n))


def gauss_cantor_set(n: int) -> RegularCantorSet:
    """Regular Cantor set of expansions with digits 1..n, carried by the
    inverse branches x -> 1/(a+x) with exact surd interval endpoints."""
    if not 1 <= n <= 1000:
        raise ValueError("digit bound outside [1, 1000]")
    y_min, y_max = gauss_hull(n)
    branches = []
    brackets = []
    for a in range(1, n + 1):
        lo = 1 / (y_max + a)
        hi = 1 / (y_min + a)
        lo_lo, lo_hi = _surd_brackets(lo)
        hi_lo, hi_hi = _surd_brackets(hi)
        branches.append(MoebiusBranch(a))
        brackets.append((lo_lo, lo_hi, hi_lo, hi_hi))
    transitions = frozenset((i, j) for i in range(n) for j in range(n))
    return RegularCantorSet(tuple(str(a) for a in range(1, n + 1)),
                            tuple(branches), tuple(brackets), transitions,
                            None, True, f"cf-digits-1-{n}")
