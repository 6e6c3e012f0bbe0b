"""Exact arithmetic in real quadratic fields.

A ``QuadraticSurd`` stores (p + q*sqrt(d))/r with integer p, q, r and
square-free d, canonically reduced.  Values from different fields can be
compared exactly: an ordering question reduces to the sign of
A + B*sqrt(m) + C*sqrt(n), which is decided by nested squaring over the
rationals, never by floating point.
"""
from __future__ import annotations

import decimal
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

__all__ = [
    "QuadraticSurd",
    "TailSum",
    "sign_of_radical_sum",
    "squarefree_decompose",
]


@lru_cache(maxsize=4096)
def squarefree_decompose(d: int) -> tuple[int, int]:
    """Return (k, d0) with d == k*k*d0 and d0 square-free."""
    if d < 0:
        raise ValueError("negative radicand")
    if d in (0, 1):
        return 1, d
    k, rest = 1, d
    f = 2
    while f * f <= rest:
        ff = f * f
        while rest % ff == 0:
            rest //= ff
            k *= f
        f += 1 if f == 2 else 2
    return k, rest


def _sign(x: Fraction | int) -> int:
    return (x > 0) - (x < 0)


def sign_of_radical_sum(rational: Fraction, terms: list[tuple[Fraction, int]]) -> int:
    """Exact sign of rational + sum of coeff*sqrt(d) over ``terms``.

    Each d must be square-free and > 1; at most two distinct radicals are
    supported (all comparisons in this package reduce to that case).
    """
    merged: dict[int, Fraction] = {}
    for coeff, d in terms:
        if coeff == 0:
            continue
        if d in (0, 1):
            rational += coeff * (1 if d else 0)
            continue
        merged[d] = merged.get(d, Fraction(0)) + coeff
    live = [(c, d) for d, c in sorted(merged.items()) if c != 0]

    if not live:
        return _sign(rational)
    if len(live) == 1:
        (b, m), = live
        if rational == 0:
            return _sign(b)
        sa, sb = _sign(rational), _sign(b)
        if sa == sb:
            return sa
        cmp = _sign(rational * rational - b * b * m)
        return sa if cmp > 0 else (sb if cmp < 0 else 0)
    if len(live) == 2:
        (b, m), (c, n) = live
        # sign of u = b*sqrt(m) + c*sqrt(n)
        sb, sc = _sign(b), _sign(c)
        if sb == sc:
            su = sb
        else:
            cmp = _sign(b * b * m - c * c * n)
            su = sb if cmp > 0 else (sc if cmp < 0 else 0)
        if rational == 0:
            return su
        sa = _sign(rational)
        if sa == su or su == 0:
            return sa
        # compare rational^2 with u^2 = b^2 m + c^2 n + 2bc*sqrt(mn)
        g = math.gcd(m, n)
        rad = (m // g) * (n // g)  # coprime square-free parts: rad square-free
        inner = sign_of_radical_sum(
            b * b * m + c * c * n - rational * rational,
            [(2 * b * c * g, rad)],
        )
        return su if inner > 0 else (sa if inner < 0 else 0)
    raise ValueError("more than two distinct radicals is not supported")


@dataclass(frozen=True, slots=True)
class QuadraticSurd:
    """(p + q*sqrt(d))/r, canonical: r > 0, gcd(p,q,r) = 1, d square-free."""

    p: int
    q: int
    r: int
    d: int

    @staticmethod
    def make(p: int | Fraction, q: int | Fraction, r: int | Fraction, d: int) -> "QuadraticSurd":
        if r == 0:
            raise ZeroDivisionError("zero denominator")
        if d < 0:
            raise ValueError("negative radicand")
        p, q, r = Fraction(p), Fraction(q), Fraction(r)
        scale = p.denominator * q.denominator * r.denominator
        p, q, r = int(p * scale), int(q * scale), int(r * scale)
        k, d0 = squarefree_decompose(d)
        q, d = q * k, d0
        if d == 1:
            p, q, d = p + q, 0, 0
        if q == 0:
            d = 0
        if r < 0:
            p, q, r = -p, -q, -r
        g = math.gcd(math.gcd(abs(p), abs(q)), r)
        return QuadraticSurd(p // g, q // g, r // g, d)

    @staticmethod
    def from_fraction(x: Fraction | int) -> "QuadraticSurd":
        f = Fraction(x)
        return QuadraticSurd.make(f.numerator, 0, f.denominator, 0)

    @staticmethod
    def sqrt_of(x: Fraction | int) -> "QuadraticSurd":
        """Exact sqrt(x) for a nonnegative rational x."""
        f = Fraction(x)
        if f < 0:
            raise ValueError("negative radicand")
        # sqrt(a/b) = sqrt(a*b)/b
        return QuadraticSurd.make(0, 1, f.denominator, f.numerator * f.denominator)

    # -- field helpers -------------------------------------------------
    @property
    def is_rational(self) -> bool:
        return self.q == 0

    def _coerce(self, other) -> "QuadraticSurd":
        if isinstance(other, QuadraticSurd):
            return other
        if isinstance(other, (int, Fraction)):
            return QuadraticSurd.from_fraction(other)
        return NotImplemented  # type: ignore[return-value]

    def _join(self, other: "QuadraticSurd") -> int:
        """Common field discriminant, or raise for genuinely mixed fields."""
        if self.d == 0 or self.d == other.d:
            return other.d if self.d == 0 else self.d
        if other.d == 0:
            return self.d
        raise ValueError(f"mixed fields sqrt({self.d}) and sqrt({other.d})")

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        d = self._join(o)
        return QuadraticSurd.make(
            self.p * o.r + o.p * self.r, self.q * o.r + o.q * self.r, self.r * o.r, d
        )

    __radd__ = __add__

    def __neg__(self):
        return QuadraticSurd(-self.p, -self.q, self.r, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        d = self._join(o)
        return QuadraticSurd.make(
            self.p * o.p + self.q * o.q * d,
            self.p * o.q + self.q * o.p,
            self.r * o.r,
            d,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        d = self._join(o)
        norm = o.p * o.p - o.q * o.q * d
        if norm == 0:
            raise ZeroDivisionError("division by zero surd")
        # 1/((p+q*sqrt(d))/r) = r*(p - q*sqrt(d))/(p^2 - q^2 d)
        inv = QuadraticSurd.make(o.r * o.p, -o.r * o.q, norm, d)
        return self * inv

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return o / self

    # -- exact ordering (cross-field allowed) ---------------------------
    def _terms(self) -> tuple[Fraction, list[tuple[Fraction, int]]]:
        rat = Fraction(self.p, self.r)
        if self.q == 0:
            return rat, []
        return rat, [(Fraction(self.q, self.r), self.d)]

    def compare(self, other) -> int:
        o = self._coerce(other)
        if o is NotImplemented:
            raise TypeError(f"cannot compare QuadraticSurd with {type(other)!r}")
        ra, ta = self._terms()
        rb, tb = o._terms()
        return sign_of_radical_sum(ra - rb, ta + [(-c, d) for c, d in tb])

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def __eq__(self, other):
        if isinstance(other, (QuadraticSurd, int, Fraction)):
            return self.compare(other) == 0
        return NotImplemented

    def __hash__(self):
        # canonical representation makes structural hash consistent with ==
        return hash((self.p, self.q, self.r, self.d))

    # -- numeric views ---------------------------------------------------
    def __float__(self) -> float:
        return (self.p + self.q * math.sqrt(self.d)) / self.r

    def as_fraction(self) -> Fraction:
        if self.q != 0:
            raise ValueError("irrational surd has no Fraction form")
        return Fraction(self.p, self.r)

    def decimal(self, digits: int = 80) -> str:
        with decimal.localcontext() as ctx:
            ctx.prec = digits
            v = (decimal.Decimal(self.p) + decimal.Decimal(self.q) * decimal.Decimal(self.d).sqrt()) / decimal.Decimal(self.r)
            return str(v)

    def __repr__(self) -> str:
        if self.q == 0:
            return f"{self.p}/{self.r}" if self.r != 1 else f"{self.p}"
        qpart = f"{self.q}*sqrt({self.d})" if self.q != 1 else f"sqrt({self.d})"
        core = f"{self.p}+{qpart}" if self.p else qpart
        return f"({core})/{self.r}" if self.r != 1 else f"({core})"


@dataclass(frozen=True, slots=True)
class TailSum:
    """Exact value rational + sum of coeff*sqrt(d) over at most a few
    distinct square-free d.

    Sums of two quadratic surds from different fields live here; ordering
    stays exact as long as a difference involves at most two distinct
    radicals, which covers every comparison this package performs.
    """

    rational: Fraction
    radicals: tuple[tuple[Fraction, int], ...]

    @staticmethod
    def make(rational: Fraction | int = 0, radicals=()) -> "TailSum":
        rat = Fraction(rational)
        merged: dict[int, Fraction] = {}
        for coeff, d in radicals:
            c = Fraction(coeff)
            if c == 0:
                continue
            k, d0 = squarefree_decompose(int(d))
            if d0 in (0, 1):
                rat += c * k * (1 if d0 else 0)
                continue
            merged[d0] = merged.get(d0, Fraction(0)) + c * k
        live = tuple((c, d) for d, c in sorted(merged.items()) if c != 0)
        return TailSum(rat, live)

    @staticmethod
    def from_terms(*values) -> "TailSum":
        total = TailSum.make()
        for v in values:
            total = total + v
        return total

    @staticmethod
    def _coerce(other) -> "TailSum":
        if isinstance(other, TailSum):
            return other
        if isinstance(other, QuadraticSurd):
            rat, terms = other._terms()
            return TailSum.make(rat, terms)
        if isinstance(other, (int, Fraction)):
            return TailSum.make(other)
        return NotImplemented  # type: ignore[return-value]

    @property
    def is_rational(self) -> bool:
        return not self.radicals

    def __add__(self, other):
        o = TailSum._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return TailSum.make(self.rational + o.rational, self.radicals + o.radicals)

    __radd__ = __add__

    def __neg__(self):
        return TailSum(-self.rational, tuple((-c, d) for c, d in self.radicals))

    def __sub__(self, other):
        o = TailSum._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def compare(self, other) -> int:
        o = TailSum._coerce(other)
        if o is NotImplemented:
            raise TypeError(f"cannot compare TailSum with {type(other)!r}")
        diff = self - o
        return sign_of_radical_sum(diff.rational, list(diff.radicals))

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def __eq__(self, other):
        if isinstance(other, (TailSum, QuadraticSurd, int, Fraction)):
            return self.compare(other) == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.rational, self.radicals))

    def as_surd(self) -> QuadraticSurd:
        """Single-field view; raises when two or more radicals remain."""
        if not self.radicals:
            return QuadraticSurd.from_fraction(self.rational)
        if len(self.radicals) == 1:
            (c, d), = self.radicals
            num = self.rational + c * QuadraticSurd.sqrt_of(d)
            return num
        raise ValueError("sum spans more than one quadratic field")

    def __float__(self) -> float:
        total = float(self.rational)
        for c, d in self.radicals:
            total += float(c) * math.sqrt(d)
        return total

    def decimal(self, digits: int = 80) -> str:
        with decimal.localcontext() as ctx:
            ctx.prec = digits
            total = (decimal.Decimal(self.rational.numerator)
                     / decimal.Decimal(self.rational.denominator))
            for c, d in self.radicals:
                coeff = decimal.Decimal(c.numerator) / decimal.Decimal(c.denominator)
                total += coeff * decimal.Decimal(d).sqrt()
            return str(total)

    def __repr__(self) -> str:
        parts = [] if self.rational == 0 else [str(self.rational)]
        for c, d in self.radicals:
            parts.append(f"{c}*sqrt({d})" if c != 1 else f"sqrt({d})")
        return " + ".join(parts) if parts else "0"
