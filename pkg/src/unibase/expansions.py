"""Greedy and quasi-greedy q-expansions with exact digit decisions.

Digits are produced from the scaled remainders
    r_0 = x,   r_k = q r_{k-1} - a_k,
which for an algebraic base are kept as polynomials in q reduced modulo the
minimal polynomial of q.  Reduced remainders are canonical, so a repeated
remainder certifies eventual periodicity of the expansion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Sequence, Union

from sympy import Poly as SymPoly, resultant, symbols

from . import polynomials as P
from .algebraic import AlgebraicReal, Enclosure, compare, unique_root
from .words import (
    EPS,
    EventuallyPeriodicSequence,
    Ordering,
    check_alphabet,
    closure_U_condition,
    is_admissible_alpha,
    lex_compare,
)

Base = Union[AlgebraicReal, Fraction, int]
DEFAULT_DEPTH = 512


def as_base(q) -> AlgebraicReal:
    if isinstance(q, AlgebraicReal):
        return q
    if isinstance(q, (int, Fraction)):
        return AlgebraicReal.from_rational(Fraction(q))
    raise TypeError(f"unsupported base type {type(q).__name__}")


class _Field:
    """Arithmetic in Q(q) with exact sign decisions."""

    def __init__(self, q: AlgebraicReal):
        self.rational = q.as_rational()
        if self.rational is None:
            q = q.minimal()
            self.f = q.poly
            self.d = len(self.f) - 1
        self.x = q

    def const(self, c):
        c = Fraction(c)
        return c if self.rational is not None else ((c,) if c else ())

    def mul_q(self, e):
        if self.rational is not None:
            return e * self.rational
        e = (Fraction(0),) + tuple(e) if e else ()
        if len(e) > self.d:
            c = e[self.d] / self.f[self.d]
            e = tuple(a - c * b for a, b in zip(e, self.f))[: self.d]
        return P.trim(e)

    def sub_const(self, e, c):
        if self.rational is not None:
            return e - c
        if not c:
            return e
        e = list(e) or [Fraction(0)]
        e[0] -= c
        return P.trim(e)

    def key(self, e):
        return e

    def approx(self, e) -> float:
        if self.rational is not None:
            return float(e)
        qf = float((self.x.lo + self.x.hi) / 2)
        return float(sum(float(c) * qf**i for i, c in enumerate(e)))

    def sign(self, e) -> int:
        if self.rational is not None:
            return (e > 0) - (e < 0)
        if not e:
            return 0
        den = math.lcm(*(Fraction(c).denominator for c in e))
        g = tuple(int(c * den) for c in e)
        # g has degree below the minimal polynomial, so g(q) != 0
        while True:
            lo, hi = P.range_bounds(g, self.x.lo, self.x.hi)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            self.x = self.x.bisect(8)


def _choose_digit(F: _Field, t, M: int, greedy: bool) -> int:
    est = F.approx(t)
    if greedy:
        c = math.floor(est)
    else:
        c = math.ceil(est) - 1
    c = min(max(c, 0), M)

    def low_ok(c):
        if c == 0:
            return True
        s = F.sign(F.sub_const(t, c))
        return s >= 0 if greedy else s > 0

    def high_ok(c):
        if c == M:
            return True
        s = F.sign(F.sub_const(t, c + 1))
        return s < 0 if greedy else s <= 0

    while True:
        if not low_ok(c):
            c -= 1
        elif not high_ok(c):
            c += 1
        else:
            return c


@dataclass(frozen=True)
class Expansion:
    """A computed expansion: a prefix, and the full sequence when a period
    was certified within the digit budget."""

    digits: tuple
    sequence: EventuallyPeriodicSequence | None
    M: int

    @property
    def is_periodic(self) -> bool:
        return self.sequence is not None

    def prefix(self, n: int) -> tuple:
        if self.sequence is not None:
            return self.sequence.prefix(n)
        if n > len(self.digits):
            raise ValueError(f"only {len(self.digits)} digits known")
        return self.digits[:n]

    def known(self):
        """The sequence if certified, else the known prefix."""
        return self.sequence if self.sequence is not None else self.digits


@dataclass(frozen=True)
class ExpansionContext:
    M: int
    q: AlgebraicReal

    def __post_init__(self):
        check_alphabet(self.M)
        q = as_base(self.q)
        object.__setattr__(self, "q", q)
        if compare(q, 1) is not Ordering.GT or compare(q, self.M + 1) is Ordering.GT:
            raise ValueError(f"base must lie in (1, {self.M + 1}]")

    @cached_property
    def _field(self) -> _Field:
        return _Field(self.q)

    def interval_end(self) -> Enclosure:
        """Enclosure of M/(q-1), the right end of I_q."""
        e = self.q.refine(Fraction(1, 10**12)) - 1
        return Fraction(self.M) / e


def _check_x(ctx: ExpansionContext, x, allow_zero: bool) -> Fraction:
    x = Fraction(x)
    if x < 0 or (x == 0 and not allow_zero):
        raise ValueError("x out of range")
    # x <= M/(q-1)  <=>  q <= 1 + M/x
    if x > 0 and compare(ctx.q, 1 + Fraction(ctx.M) / x) is Ordering.GT:
        raise ValueError("x exceeds M/(q-1)")
    return x


def expand(ctx: ExpansionContext, x=1, *, greedy: bool = False, max_digits: int = DEFAULT_DEPTH,
           detect_period: bool = True) -> Expansion:
    x = _check_x(ctx, x, allow_zero=greedy)
    F = ctx._field
    M = ctx.M
    r = F.const(x)
    seen: dict = {}
    digits: list[int] = []
    for k in range(max_digits):
        if detect_period:
            key = F.key(r)
            if key in seen:
                i = seen[key]
                seq = EventuallyPeriodicSequence(tuple(digits[:i]), tuple(digits[i:]), M)
                return Expansion(tuple(digits), seq, M)
            seen[key] = k
        t = F.mul_q(r)
        d = _choose_digit(F, t, M, greedy)
        digits.append(d)
        r = F.sub_const(t, d)
    return Expansion(tuple(digits), None, M)


def quasi_greedy(ctx: ExpansionContext, x=1, n: int = 16) -> tuple:
    e = expand(ctx, x, greedy=False, max_digits=n, detect_period=True)
    return e.prefix(n) if e.sequence is not None else e.digits[:n]


def greedy(ctx: ExpansionContext, x=1, n: int = 16) -> tuple:
    e = expand(ctx, x, greedy=True, max_digits=n, detect_period=True)
    return e.prefix(n) if e.sequence is not None else e.digits[:n]


def alpha(q, M: int, depth: int = DEFAULT_DEPTH) -> Expansion:
    return expand(ExpansionContext(M, q), 1, greedy=False, max_digits=depth)


def beta(q, M: int, depth: int = DEFAULT_DEPTH) -> Expansion:
    return expand(ExpansionContext(M, q), 1, greedy=True, max_digits=depth)


def rational_expansion(q: Fraction, M: int, n: int, greedy: bool = False, x=1) -> tuple:
    """First n digits for a rational base (fast path, no validation)."""
    q = Fraction(q)
    r = Fraction(x)
    out = []
    for _ in range(n):
        t = q * r
        if greedy:
            d = min(M, math.floor(t))
        else:
            d = min(M, max(0, math.ceil(t) - 1))
        out.append(d)
        r = t - d
    return tuple(out)


def enclosure_expansion(base: Enclosure, M: int, n: int, greedy: bool = False, x=1) -> tuple:
    """Digits shared by every base in the enclosure (at most n of them)."""
    if base.lo <= 1 or base.hi > M + 1:
        raise ValueError(f"base enclosure must lie in (1, {M + 1}]")
    a = rational_expansion(base.lo, M, n, greedy, x)
    b = rational_expansion(base.hi, M, n, greedy, x)
    out = []
    for u, v in zip(a, b):
        if u != v:
            break
        out.append(u)
    return tuple(out)


# ---------------------------------------------------------------------------
# Projection and the inverse of q -> alpha(q)


def _project_rational(q: Fraction, s: EPS) -> Fraction:
    inv = 1 / q
    head = sum(Fraction(d) * inv ** (i + 1) for i, d in enumerate(s.preperiod))
    k, p = len(s.preperiod), len(s.period)
    per = sum(Fraction(d) * inv ** (j + 1) for j, d in enumerate(s.period))
    return head + inv**k * per / (1 - inv**p)


def project(ctx: ExpansionContext, s: EPS, eps=Fraction(1, 10**12)) -> Enclosure:
    """Enclosure of sum s_i q^-i (decreasing in q, so endpoint images bound it)."""
    if s.M != ctx.M:
        raise ValueError("alphabet mismatch")
    eps = Fraction(eps)
    r = ctx.q.as_rational()
    if r is not None:
        return Enclosure.point(_project_rational(r, s))
    if s.period == (0,) and not any(s.preperiod):
        return Enclosure.point(0)
    exact = _rational_value(ctx, s)
    if exact is not None:
        return Enclosure.point(exact)
    w = eps
    while True:
        e = ctx.q.refine(w)
        lo = max(e.lo, Fraction(1) + Fraction(1, 10**30))
        out = Enclosure(_project_rational(e.hi, s), _project_rational(lo, s))
        if out.width <= eps:
            return out
        w /= 2**8


def _rational_function(s: EPS):
    """(N, D) integer polynomials in q with pi_q(s) = N(q)/D(q)."""
    k, p = len(s.preperiod), len(s.period)
    # multiply the series by q^(k+p) - q^k
    digits = s.preperiod + s.period
    N = [0] * (k + p + 1)
    for i, d in enumerate(digits):
        N[k + p - 1 - i] += d
    for i, d in enumerate(s.preperiod):
        N[k - 1 - i] -= d
    D = [0] * (k + p + 1)
    D[k + p] += 1
    D[k] -= 1
    return P.trim(N), P.trim(D)


def _rational_value(ctx: ExpansionContext, s: EPS) -> Fraction | None:
    """pi_q(s) when it happens to be rational, verified exactly in Q(q)."""
    f = ctx.q.minimal().poly
    N, D = _rational_function(s)
    guess = float(_project_rational(Fraction(float(ctx.q)), s))
    cand = Fraction(guess).limit_denominator(10**6)
    # N - cand*D must vanish at q, i.e. be divisible by the minimal polynomial
    diff = P.to_integer(P.sub(P.scale(N, cand.denominator), P.scale(D, cand.numerator)))
    if not diff:
        return cand
    _, r = P.divmod_poly(diff, f)
    return cand if not r else None


def project_exact(ctx: ExpansionContext, s: EPS) -> AlgebraicReal:
    """pi_q(s) as an exact algebraic number."""
    enc = project(ctx, s, Fraction(1, 10**6))
    r = ctx.q.as_rational()
    if r is not None:
        return AlgebraicReal.from_rational(enc.lo)
    q = ctx.q.minimal()
    N, D = _rational_function(s)
    X, Y = symbols("X Y")
    f = SymPoly(list(reversed(q.poly)), X)
    g = SymPoly(list(reversed(D)), X) * Y - SymPoly(list(reversed(N)), X)
    R = SymPoly(resultant(f.as_expr(), g.as_expr(), X), Y)
    poly = P.trim(int(c) for c in reversed(R.all_coeffs()))
    width = Fraction(1, 10**6)
    while True:
        roots = [z for z in _roots_in(poly, enc)]
        if len(roots) == 1:
            return roots[0]
        width /= 2**20
        enc = project(ctx, s, width)


def _roots_in(poly, enc: Enclosure):
    from .algebraic import isolate_roots

    return isolate_roots(poly, (enc.lo, enc.hi))


def alpha_polynomial(s: EPS) -> tuple:
    """Integer polynomial in x = 1/q whose root in (0, 1) gives alpha^-1(s)."""
    k, p = len(s.preperiod), len(s.period)
    U = (0,) + s.preperiod
    V = (0,) + s.period
    one_minus_xp = P.trim((1,) + (0,) * (p - 1) + (-1,))
    one_minus_U = P.sub((1,), P.trim(U))
    return P.trim(P.sub(P.mul(one_minus_xp, one_minus_U), P.shift_up(P.trim(V), k)))


def alpha_inverse(s: EPS, M: int | None = None) -> AlgebraicReal:
    """The unique base q in (1, M+1] with alpha(q) = s."""
    if M is not None and M != s.M:
        raise ValueError("alphabet mismatch")
    if not is_admissible_alpha(s):
        raise ValueError(f"{s} is not a quasi-greedy expansion of 1")
    f = alpha_polynomial(s)
    x = unique_root(f, (Fraction(1, s.M + 1), Fraction(1)))
    return x.reciprocal()


# ---------------------------------------------------------------------------
# Membership


class Verdict(Enum):
    YES = "YES"
    NO = "NO"
    UNKNOWN = "UNKNOWN"

    def __and__(self, other: "Verdict") -> "Verdict":
        if self is Verdict.NO or other is Verdict.NO:
            return Verdict.NO
        if self is Verdict.YES and other is Verdict.YES:
            return Verdict.YES
        return Verdict.UNKNOWN

    def __invert__(self) -> "Verdict":
        return {Verdict.YES: Verdict.NO, Verdict.NO: Verdict.YES}.get(self, Verdict.UNKNOWN)


@dataclass(frozen=True)
class MembershipVerdict:
    verdict: Verdict
    certificate_depth: int = 0
    witness: int | None = None

    def to_record(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "certificate_depth": self.certificate_depth,
            "witness": self.witness,
        }


Known = Union[EventuallyPeriodicSequence, tuple]


def _digits(x: Known, start: int, n: int) -> tuple:
    if isinstance(x, EventuallyPeriodicSequence):
        return x.prefix(start + n)[start:]
    return tuple(x[start : start + n])


def _avail(x: Known, start: int):
    return None if isinstance(x, EventuallyPeriodicSequence) else max(0, len(x) - start)


def tail_compare(x: Known, n: int, y: Known, m: int = 0) -> Ordering | None:
    """Compare sigma^n x with sigma^m y; None if the known digits agree."""
    if isinstance(x, EventuallyPeriodicSequence) and isinstance(y, EventuallyPeriodicSequence):
        return lex_compare(x.shift(n), y.shift(m))
    ax, ay = _avail(x, n), _avail(y, m)
    L = min(a for a in (ax, ay) if a is not None)
    a, b = _digits(x, n, L), _digits(y, m, L)
    for u, v in zip(a, b):
        if u != v:
            return Ordering.LT if u < v else Ordering.GT
    return None


def _reflect_known(x: Known, M: int) -> Known:
    if isinstance(x, EventuallyPeriodicSequence):
        return x.reflect()
    return tuple(M - d for d in x)


def _positions(s: Known, start: int) -> range:
    if isinstance(s, EventuallyPeriodicSequence):
        return range(start, s.horizon + len(s.period) + 1)
    return range(start, len(s))


def _depth(a: Known) -> int:
    return a.horizon if isinstance(a, EventuallyPeriodicSequence) else len(a)


def univoque_check(s: Known, a: Known, M: int) -> MembershipVerdict:
    """Sequence-level test of membership in U_q given alpha(q) = a."""
    abar = _reflect_known(a, M)
    unknown = False
    for n in _positions(s, 1):
        prev = s.digit(n - 1) if isinstance(s, EventuallyPeriodicSequence) else s[n - 1]
        if prev < M:
            o = tail_compare(s, n, a)
            if o is None:
                unknown = True
            elif o is not Ordering.LT:
                return MembershipVerdict(Verdict.NO, _depth(a), n)
        if prev > 0:
            o = tail_compare(s, n, abar)
            if o is None:
                unknown = True
            elif o is not Ordering.GT:
                return MembershipVerdict(Verdict.NO, _depth(a), n)
    if unknown or not isinstance(s, EventuallyPeriodicSequence):
        return MembershipVerdict(Verdict.UNKNOWN, _depth(a))
    return MembershipVerdict(Verdict.YES, _depth(a))


def v_check(s: Known, a: Known, M: int) -> MembershipVerdict:
    abar = _reflect_known(a, M)
    unknown = False
    for n in _positions(s, 0):
        hi = tail_compare(s, n, a)
        lo = tail_compare(s, n, abar)
        if hi is Ordering.GT or lo is Ordering.LT:
            return MembershipVerdict(Verdict.NO, _depth(a), n)
        if hi is None or lo is None:
            unknown = True
    if unknown or not isinstance(s, EventuallyPeriodicSequence):
        return MembershipVerdict(Verdict.UNKNOWN, _depth(a))
    return MembershipVerdict(Verdict.YES, _depth(a))


def is_univoque_point(ctx: ExpansionContext, s: Known, alpha_prefix_depth: int = DEFAULT_DEPTH) -> MembershipVerdict:
    a = alpha(ctx.q, ctx.M, alpha_prefix_depth).known()
    return univoque_check(s, a, ctx.M)


def in_V_q(ctx: ExpansionContext, s: Known, alpha_prefix_depth: int = DEFAULT_DEPTH) -> MembershipVerdict:
    a = alpha(ctx.q, ctx.M, alpha_prefix_depth).known()
    return v_check(s, a, ctx.M)


def in_U(q, M: int, depth: int = DEFAULT_DEPTH) -> MembershipVerdict:
    ctx = ExpansionContext(M, q)
    b = expand(ctx, 1, greedy=True, max_digits=depth).known()
    a = expand(ctx, 1, greedy=False, max_digits=depth).known()
    return univoque_check(b, a, M)


def closure_check(a: Known, M: int) -> MembershipVerdict:
    if isinstance(a, EventuallyPeriodicSequence):
        ok = closure_U_condition(a)
        return MembershipVerdict(Verdict.YES if ok else Verdict.NO, a.horizon)
    abar = _reflect_known(a, M)
    for n in range(1, len(a)):
        o_hi = tail_compare(a, n, a)
        o_lo = tail_compare(a, n, abar)
        if o_hi is Ordering.GT or o_lo in (Ordering.LT, Ordering.EQ):
            return MembershipVerdict(Verdict.NO, len(a), n)
    return MembershipVerdict(Verdict.UNKNOWN, len(a))


def in_closure_U(q, M: int, depth: int = DEFAULT_DEPTH) -> MembershipVerdict:
    a = alpha(q, M, depth).known()
    return closure_check(a, M)
