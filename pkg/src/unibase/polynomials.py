"""Dense integer polynomials, stored low-to-high as tuples of ints.

Includes exact evaluation at rationals, certified range bounds on
nonnegative intervals, and Descartes-rule root counting used by the
root isolator in :mod:`unibase.algebraic`.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Sequence

from sympy.polys.domains import ZZ
from sympy.polys.euclidtools import dup_gcd
from sympy.polys.factortools import dup_factor_list
from sympy.polys.sqfreetools import dup_sqf_part

Poly = tuple


def trim(p: Sequence[int]) -> Poly:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def degree(p: Poly) -> int:
    return len(trim(p)) - 1


def to_integer(p: Sequence) -> Poly:
    """Scale a rational-coefficient polynomial to a primitive integer one."""
    p = [Fraction(c) for c in p]
    den = reduce(math.lcm, (c.denominator for c in p), 1)
    return primitive(tuple(int(c * den) for c in p))


def primitive(p: Sequence[int]) -> Poly:
    """Divide out the content; make the leading coefficient positive."""
    p = trim(p)
    if not p:
        return p
    g = reduce(math.gcd, p)
    if p[-1] < 0:
        g = -g
    return tuple(c // g for c in p)


def add(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    return trim(
        (p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)
    )


def neg(p: Poly) -> Poly:
    return tuple(-c for c in p)


def sub(p: Poly, q: Poly) -> Poly:
    return add(p, neg(q))


def mul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ()
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return trim(out)


def scale(p: Poly, c) -> Poly:
    return trim(c * x for x in p)


def shift_up(p: Poly, k: int) -> Poly:
    """Multiply by x^k."""
    return trim((0,) * k + tuple(p)) if p else ()


def derivative(p: Poly) -> Poly:
    return trim(i * c for i, c in enumerate(p) if i > 0)


def reverse(p: Poly, d: int | None = None) -> Poly:
    """x^d p(1/x); d defaults to deg p."""
    p = trim(p)
    if d is None:
        d = len(p) - 1
    return trim(tuple(reversed(p + (0,) * (d + 1 - len(p)))))


def divmod_poly(p: Sequence, q: Sequence) -> tuple[Poly, Poly]:
    """Division with remainder over the rationals."""
    q = trim(q)
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    r = [Fraction(c) for c in trim(p)]
    quo = [Fraction(0)] * max(len(r) - len(q) + 1, 0)
    lead = Fraction(q[-1])
    while len(r) >= len(q) and r:
        c = r[-1] / lead
        k = len(r) - len(q)
        quo[k] = c
        for i, b in enumerate(q):
            r[k + i] -= c * b
        while r and r[-1] == 0:
            r.pop()
    return trim(quo), trim(r)


def _dup(p: Poly):
    return [ZZ(c) for c in reversed(trim(p))]


def _undup(f) -> Poly:
    return trim(int(c) for c in reversed(f))


def gcd(p: Poly, q: Poly) -> Poly:
    if not trim(p):
        return primitive(q)
    if not trim(q):
        return primitive(p)
    h = dup_gcd(_dup(p), _dup(q), ZZ)
    return primitive(_undup(h))


def squarefree(p: Poly) -> Poly:
    p = trim(p)
    if len(p) <= 2:
        return primitive(p)
    return primitive(_undup(dup_sqf_part(_dup(p), ZZ)))


def factor(p: Poly) -> list[Poly]:
    """Distinct irreducible factors over the integers (positive degree)."""
    _, facs = dup_factor_list(_dup(p), ZZ)
    return [primitive(_undup(f)) for f, _ in facs if len(f) > 1]


def evaluate(p: Poly, x):
    """Exact Horner evaluation (int, Fraction or any ring element)."""
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def eval_homogeneous(p: Poly, a: int, b: int) -> int:
    """b^d p(a/b) as an integer, d = deg p, b > 0."""
    p = trim(p)
    if not p:
        return 0
    acc = 0
    bpow = 1
    for c in reversed(p):
        acc = acc * a + c * bpow
        bpow *= b
    return acc


def sign_at(p: Poly, x) -> int:
    x = Fraction(x)
    v = eval_homogeneous(p, x.numerator, x.denominator)
    return (v > 0) - (v < 0)


def _split(p: Poly) -> tuple[Poly, Poly]:
    pos = tuple(c if c > 0 else 0 for c in p)
    negp = tuple(-c if c < 0 else 0 for c in p)
    return pos, negp


def range_bounds(p: Poly, lo, hi) -> tuple[Fraction, Fraction]:
    """Certified [min, max] bracket for p on [lo, hi]."""
    lo, hi = Fraction(lo), Fraction(hi)
    if lo > hi:
        raise ValueError("empty interval")
    if lo >= 0:
        pos, negp = _split(p)
        return (
            Fraction(evaluate(pos, lo)) - evaluate(negp, hi),
            Fraction(evaluate(pos, hi)) - evaluate(negp, lo),
        )
    if hi <= 0:
        q = tuple(c if i % 2 == 0 else -c for i, c in enumerate(p))
        return range_bounds(q, -hi, -lo)
    a = range_bounds(p, lo, Fraction(0))
    b = range_bounds(p, Fraction(0), hi)
    return min(a[0], b[0]), max(a[1], b[1])


def sign_variations(coeffs: Sequence[int]) -> int:
    v = 0
    last = 0
    for c in coeffs:
        if c:
            if last and (c > 0) != (last > 0):
                v += 1
            last = c
    return v


def taylor_shift_one(p: Sequence[int]) -> Poly:
    """p(x + 1)."""
    c = list(p)
    n = len(c)
    for i in range(n):
        for j in range(n - 2, i - 1, -1):
            c[j] += c[j + 1]
    return tuple(c)


def compose_affine(p: Poly, num: int, width: int, den: int) -> Poly:
    """den^d p((num + width*y)/den) as an integer polynomial in y."""
    p = trim(p)
    d = len(p) - 1
    acc: list[int] = [p[-1]]
    dpow = 1
    for i in range(d - 1, -1, -1):
        dpow *= den
        new = [0] * (len(acc) + 1)
        for k, a in enumerate(acc):
            new[k] += a * num
            new[k + 1] += a * width
        new[0] += p[i] * dpow
        acc = new
    return tuple(acc)


def descartes_count(p: Poly, lo: Fraction, hi: Fraction) -> int:
    """Sign-variation bound on the number of roots in the open (lo, hi)."""
    lo, hi = Fraction(lo), Fraction(hi)
    den = math.lcm(lo.denominator, hi.denominator)
    a = lo.numerator * (den // lo.denominator)
    w = hi.numerator * (den // hi.denominator) - a
    h = compose_affine(p, a, w, den)
    return sign_variations(taylor_shift_one(tuple(reversed(h))))


def companion_matrix(p: Poly) -> list[list[int]]:
    """Companion matrix of a monic integer polynomial."""
    p = trim(p)
    if p[-1] != 1:
        raise ValueError("polynomial must be monic")
    d = len(p) - 1
    rows = [[0] * d for _ in range(d)]
    for i in range(1, d):
        rows[i][i - 1] = 1
    for i in range(d):
        rows[i][d - 1] = -p[i]
    return rows


def format_poly(p: Poly) -> str:
    return ",".join(str(c) for c in p)


def parse_poly(text: str) -> Poly:
    try:
        return trim(int(c) for c in text.split(",") if c.strip())
    except ValueError:
        raise ValueError(f"bad coefficient list {text!r}") from None
