"""Exact real algebraic numbers and rational enclosures.

An :class:`AlgebraicReal` is a squarefree integer polynomial together with
a rational interval containing exactly one of its roots.  Comparisons are
exact: disjoint intervals decide immediately, shared roots are detected
through the gcd of the defining polynomials, and otherwise both numbers are
refined until their intervals separate.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import threading
from contextlib import contextmanager

from mpmath import iv, libmp

from . import polynomials as P
from .words import Ordering

RationalLike = Union[int, Fraction]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def format_rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())


@dataclass(frozen=True)
class Enclosure:
    """Closed rational interval [lo, hi] certified to contain some real."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = _frac(self.lo), _frac(self.hi)
        if lo > hi:
            raise ValueError(f"empty enclosure [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, x) -> "Enclosure":
        x = _frac(x)
        return cls(x, x)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        if isinstance(x, Enclosure):
            return self.lo <= x.lo and x.hi <= self.hi
        if isinstance(x, float):
            x = Fraction(x)
        return self.lo <= x <= self.hi

    def __float__(self) -> float:
        return float(self.mid)

    def _coerce(self, other) -> "Enclosure":
        if isinstance(other, Enclosure):
            return other
        return Enclosure.point(other)

    def __add__(self, other):
        o = self._coerce(other)
        return Enclosure(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return Enclosure(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        c = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Enclosure(min(c), max(c))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.lo <= 0 <= o.hi:
            raise ZeroDivisionError("divisor enclosure contains zero")
        return self * Enclosure(1 / o.hi, 1 / o.lo)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def decimal(self, digits: int = 10) -> tuple[str, str]:
        """Outward-rounded decimal strings for lo and hi."""
        scale = 10**digits
        lo = math.floor(self.lo * scale)
        hi = math.ceil(self.hi * scale)
        return _fixed(lo, digits), _fixed(hi, digits)

    def rounded(self, digits: int) -> str | None:
        """The common round-half-even decimal of every point, if one exists."""
        a = _round_fraction(self.lo, digits)
        b = _round_fraction(self.hi, digits)
        return a if a == b else None

    def __str__(self) -> str:
        lo, hi = self.decimal(12)
        return f"[{lo}, {hi}]"


def _fixed(n: int, digits: int) -> str:
    sign = "-" if n < 0 else ""
    n = abs(n)
    if digits == 0:
        return f"{sign}{n}"
    s = str(n).rjust(digits + 1, "0")
    return f"{sign}{s[:-digits]}.{s[-digits:]}"


def _round_fraction(x: Fraction, digits: int) -> str:
    return _fixed(round(x * 10**digits), digits)


class AlgebraicReal:
    """A real root of a squarefree integer polynomial, isolated in [lo, hi].

    Either lo == hi (a rational, stored with its linear polynomial) or
    lo < hi and the polynomial changes sign strictly between the endpoints.
    Instances are immutable; refinement returns new instances.
    """

    __slots__ = ("poly", "lo", "hi")

    def __init__(self, poly, lo, hi, *, _trusted: bool = False):
        lo, hi = _frac(lo), _frac(hi)
        if not _trusted:
            poly = P.squarefree(P.trim(int(c) for c in poly))
            if len(poly) < 2:
                raise ValueError("defining polynomial must have positive degree")
            if lo > hi:
                raise ValueError("empty isolating interval")
            roots = isolate_roots(poly, (lo, hi))
            if len(roots) != 1:
                raise ValueError(
                    f"interval [{lo}, {hi}] contains {len(roots)} roots, expected 1"
                )
            r = roots[0]
            poly, lo, hi = r.poly, r.lo, r.hi
        object.__setattr__(self, "poly", tuple(poly))
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def __setattr__(self, name, value):
        raise AttributeError("AlgebraicReal is immutable")

    @classmethod
    def from_rational(cls, x) -> "AlgebraicReal":
        x = _frac(x)
        return cls((-x.numerator, x.denominator), x, x, _trusted=True)

    @property
    def is_rational(self) -> bool:
        return self.lo == self.hi

    def as_rational(self) -> Fraction | None:
        if self.lo == self.hi:
            return self.lo
        if len(self.poly) == 2:
            return Fraction(-self.poly[0], self.poly[1])
        return None

    @property
    def degree(self) -> int:
        return len(self.poly) - 1

    def enclosure(self) -> Enclosure:
        return Enclosure(self.lo, self.hi)

    def _sign_lo(self) -> int:
        return P.sign_at(self.poly, self.lo)

    def bisect(self, steps: int = 1) -> "AlgebraicReal":
        if self.lo == self.hi:
            return self
        lo, hi = self.lo, self.hi
        slo = P.sign_at(self.poly, lo)
        for _ in range(steps):
            mid = (lo + hi) / 2
            s = P.sign_at(self.poly, mid)
            if s == 0:
                return AlgebraicReal(self.poly, mid, mid, _trusted=True)
            if s == slo:
                lo = mid
            else:
                hi = mid
        return AlgebraicReal(self.poly, lo, hi, _trusted=True)

    def refined(self, eps) -> "AlgebraicReal":
        """A copy whose isolating interval has width at most eps."""
        eps = _frac(eps)
        if eps <= 0:
            raise ValueError("eps must be positive")
        x = self
        while x.hi - x.lo > eps:
            w = x.hi - x.lo
            steps = max(1, math.ceil(math.log2(w / eps)) if w > 0 else 1)
            x = x._secant_step() or x.bisect(min(steps, 8))
        return x

    def _secant_step(self):
        # Regula-falsi guess checked by a sign change on a tiny bracket;
        # returns None when unhelpful.
        lo, hi = self.lo, self.hi
        w = hi - lo
        if w > Fraction(1, 2**16):
            return None
        D = math.lcm(lo.denominator, hi.denominator)
        a, b = lo.numerator * (D // lo.denominator), hi.numerator * (D // hi.denominator)
        fa = P.eval_homogeneous(self.poly, a, D)
        fb = P.eval_homogeneous(self.poly, b, D)
        if fa == fb:
            return None
        k = 60
        t = (fa << k) // (fa - fb)
        g = lo + w * Fraction(t, 1 << k)
        delta = w / 2**12
        a, b = g - delta, g + delta
        if not (lo < a < b < hi):
            return None
        sa, sb = P.sign_at(self.poly, a), P.sign_at(self.poly, b)
        if sa == 0:
            return AlgebraicReal(self.poly, a, a, _trusted=True)
        if sb == 0:
            return AlgebraicReal(self.poly, b, b, _trusted=True)
        if sa != sb:
            return AlgebraicReal(self.poly, a, b, _trusted=True)
        return None

    def refine(self, eps) -> Enclosure:
        return self.refined(eps).enclosure()

    def sign_of(self, g) -> int:
        """Exact sign of the integer polynomial g at this number."""
        g = P.trim(g)
        if not g:
            return 0
        r = self.as_rational()
        if r is not None:
            return P.sign_at(g, r)
        x = self
        for _ in range(4):
            lo, hi = P.range_bounds(g, x.lo, x.hi)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            x = x.bisect(16)
        h = P.gcd(g, x.poly)
        if len(h) > 1 and h[-1] != 0:
            s_lo, s_hi = P.sign_at(h, x.lo), P.sign_at(h, x.hi)
            if s_lo * s_hi < 0:
                return 0
        while True:
            x = x.bisect(16)
            if x.is_rational:
                return P.sign_at(g, x.lo)
            lo, hi = P.range_bounds(g, x.lo, x.hi)
            if lo > 0:
                return 1
            if hi < 0:
                return -1

    def compare(self, other) -> Ordering:
        return compare(self, other)

    def minimal(self) -> "AlgebraicReal":
        """Same number, defined by its irreducible (minimal) polynomial."""
        if self.as_rational() is not None:
            return AlgebraicReal.from_rational(self.as_rational())
        for f in P.factor(self.poly):
            if len(f) == len(self.poly):
                return self
            if P.sign_at(f, self.lo) * P.sign_at(f, self.hi) < 0:
                return AlgebraicReal(f, self.lo, self.hi, _trusted=True)
        raise AssertionError("no irreducible factor vanishes in the interval")

    def reciprocal(self) -> "AlgebraicReal":
        if self.lo <= 0 <= self.hi:
            if self.lo == self.hi == 0:
                raise ZeroDivisionError("reciprocal of zero")
            x = self
            while x.lo <= 0 <= x.hi:
                x = x.bisect()
                if x.lo == x.hi == 0:
                    raise ZeroDivisionError("reciprocal of zero")
            return x.reciprocal()
        poly = P.primitive(P.reverse(self.poly))
        return AlgebraicReal(poly, 1 / self.hi, 1 / self.lo, _trusted=True)

    def __float__(self) -> float:
        x = self.refined(Fraction(1, 2**60) * max(1, abs(self.hi)))
        return float((x.lo + x.hi) / 2)

    def __repr__(self) -> str:
        return f"AlgebraicReal({self.to_string()})"

    def __eq__(self, other):
        if not isinstance(other, AlgebraicReal):
            return NotImplemented
        return (self.poly, self.lo, self.hi) == (other.poly, other.lo, other.hi)

    def __hash__(self):
        return hash((self.poly, self.lo, self.hi))

    def __reduce__(self):
        return (_rebuild, (self.poly, self.lo, self.hi))

    def to_string(self) -> str:
        return (
            f"poly:{P.format_poly(self.poly)};"
            f"interval:[{format_rational(self.lo)},{format_rational(self.hi)}]"
        )

    __str__ = to_string

    @classmethod
    def parse(cls, text: str) -> "AlgebraicReal":
        m = re.fullmatch(
            r"\s*poly:([-0-9,\s]+);interval:\[?\s*([-0-9/]+)\s*,\s*([-0-9/]+)\s*\]?\s*", text
        )
        if not m:
            raise ValueError(f"cannot parse algebraic number {text!r}")
        poly = P.parse_poly(m.group(1))
        lo, hi = parse_rational(m.group(2)), parse_rational(m.group(3))
        sq = P.squarefree(poly)
        if sq == poly and len(poly) >= 2:
            if lo == hi and P.sign_at(poly, lo) == 0:
                return cls(poly, lo, hi, _trusted=True)
            if lo < hi and P.sign_at(poly, lo) * P.sign_at(poly, hi) < 0:
                if P.descartes_count(poly, lo, hi) == 1:
                    return cls(poly, lo, hi, _trusted=True)
        return cls(poly, lo, hi)


def _rebuild(poly, lo, hi):
    return AlgebraicReal(poly, lo, hi, _trusted=True)


def _as_algebraic(x) -> AlgebraicReal:
    if isinstance(x, AlgebraicReal):
        return x
    return AlgebraicReal.from_rational(_frac(x))


def isolate_roots(poly, search) -> list[AlgebraicReal]:
    """All real roots of poly in the closed interval search=(lo, hi)."""
    poly = P.trim(int(c) for c in poly)
    if not poly:
        raise ValueError("zero polynomial")
    lo, hi = _frac(search[0]), _frac(search[1])
    if lo > hi:
        return []
    f = P.squarefree(poly)
    if len(f) < 2:
        return []
    roots: list[AlgebraicReal] = []
    for e in {lo, hi}:
        if P.sign_at(f, e) == 0:
            roots.append(AlgebraicReal(f, e, e, _trusted=True))
    if lo == hi:
        return roots
    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        v = P.descartes_count(f, a, b)
        if v == 0:
            continue
        if v == 1 and P.sign_at(f, a) != 0 and P.sign_at(f, b) != 0:
            roots.append(AlgebraicReal(f, a, b, _trusted=True))
            continue
        c = (a + b) / 2
        if P.sign_at(f, c) == 0:
            roots.append(AlgebraicReal(f, c, c, _trusted=True))
        stack.append((c, b))
        stack.append((a, c))
    roots.sort(key=lambda r: r.lo)
    return roots


def unique_root(poly, search) -> AlgebraicReal:
    roots = isolate_roots(poly, search)
    if len(roots) != 1:
        raise ValueError(f"expected exactly one root in {search}, found {len(roots)}")
    return roots[0]


def refine(x: AlgebraicReal, eps) -> Enclosure:
    return x.refine(eps)


def compare(x, y) -> Ordering:
    """Exact ordering of two algebraic (or rational) numbers."""
    x, y = _as_algebraic(x), _as_algebraic(y)
    rx, ry = x.as_rational(), y.as_rational()
    if rx is not None and ry is not None:
        return Ordering.of(rx, ry)
    if ry is not None:
        return _order_vs_rational(x, ry)
    if rx is not None:
        return Ordering(-_order_vs_rational(y, rx))
    for _ in range(3):
        if x.hi < y.lo:
            return Ordering.LT
        if y.hi < x.lo:
            return Ordering.GT
        x, y = x.bisect(8), y.bisect(8)
        if x.is_rational or y.is_rational:
            return compare(x, y)
    if max(x.lo, y.lo) <= min(x.hi, y.hi):
        g = P.gcd(x.poly, y.poly)
        # g is squarefree; a root of g inside x's interval can only be x.
        if len(g) > 1 and _is_root(g, x) and _is_root(g, y):
            span = (min(x.lo, y.lo), max(x.hi, y.hi))
            if len(isolate_roots(g, span)) == 1:
                return Ordering.EQ
    while True:
        if x.hi < y.lo:
            return Ordering.LT
        if y.hi < x.lo:
            return Ordering.GT
        x, y = x.bisect(8), y.bisect(8)
        if x.is_rational or y.is_rational:
            return compare(x, y)


def _is_root(g, x: AlgebraicReal) -> bool:
    return P.sign_at(g, x.lo) * P.sign_at(g, x.hi) < 0


def _order_vs_rational(x: AlgebraicReal, r: Fraction) -> Ordering:
    if x.hi < r:
        return Ordering.LT
    if x.lo > r:
        return Ordering.GT
    s_r = P.sign_at(x.poly, r)
    if s_r == 0:
        return Ordering.EQ
    # the root sits on the side of r where the sign differs from sign(r)
    return Ordering.GT if s_r == P.sign_at(x.poly, x.lo) else Ordering.LT


# ---------------------------------------------------------------------------
# Certified logarithms


def _prec_for(eps: Fraction) -> int:
    return max(64, int(math.ceil(-math.log2(float(eps)))) + 24) if eps < 1 else 64


_iv_lock = threading.RLock()


@contextmanager
def _iv_prec(prec: int):
    # mpmath's interval context keeps a global precision
    with _iv_lock:
        old = iv.prec
        iv.prec = prec
        try:
            yield
        finally:
            iv.prec = old


def _iv_to_enclosure(v) -> Enclosure:
    a, b = v._mpi_
    pa, qa = libmp.to_rational(a)
    pb, qb = libmp.to_rational(b)
    return Enclosure(Fraction(pa, qa), Fraction(pb, qb))


def _log_rational_interval(lo: Fraction, hi: Fraction, prec: int) -> Enclosure:
    with _iv_prec(prec):
        a = iv.log(iv.mpf(lo.numerator) / iv.mpf(lo.denominator))
        b = iv.log(iv.mpf(hi.numerator) / iv.mpf(hi.denominator))
        ea, eb = _iv_to_enclosure(a), _iv_to_enclosure(b)
    return Enclosure(ea.lo, eb.hi)


def log_enclosure(x, eps=Fraction(1, 10**12)) -> Enclosure:
    """Certified enclosure of the natural log of a positive number.

    Accepts AlgebraicReal, rationals or Enclosure.  The returned width is at
    most eps when x is exact; for an Enclosure input it reflects x's width.
    """
    eps = _frac(eps)
    prec = _prec_for(eps)
    if isinstance(x, Enclosure):
        if x.lo <= 0:
            raise ValueError("log of a non-positive enclosure")
        return _log_rational_interval(x.lo, x.hi, prec)
    x = _as_algebraic(x)
    r = x.as_rational()
    if r is not None:
        if r <= 0:
            raise ValueError("log of a non-positive number")
        e = _log_rational_interval(r, r, prec)
        return e
    if x.hi <= 0:
        raise ValueError("log of a non-positive number")
    while x.lo <= 0:
        x = x.bisect()
    # d(log) = dx/x, so a relative width of eps/2 suffices
    y = x.refined(eps * x.lo / 2)
    return _log_rational_interval(y.lo, y.hi, prec)


def sqrt_enclosure(x, eps=Fraction(1, 10**12)) -> Enclosure:
    x = _frac(x)
    if x < 0:
        raise ValueError("sqrt of a negative number")
    prec = _prec_for(_frac(eps))
    with _iv_prec(prec):
        v = iv.sqrt(iv.mpf(x.numerator) / iv.mpf(x.denominator))
        return _iv_to_enclosure(v)


def log_ratio(num, den, eps=Fraction(1, 10**12), factor: int = 1) -> Enclosure:
    """Enclosure of log(num) / (factor * log(den)) with width <= eps."""
    eps = _frac(eps)
    inner = eps / 8
    for _ in range(12):
        a = log_enclosure(num, inner)
        b = log_enclosure(den, inner) * factor
        if b.lo <= 0 <= b.hi:
            inner /= 2**16
            continue
        r = a / b
        if r.width <= eps:
            return r
        inner /= 2**16
    return r
