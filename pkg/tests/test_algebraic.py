import math
from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given, strategies as st

from unibase import polynomials as P
from unibase.algebraic import (
    AlgebraicReal,
    Enclosure,
    compare,
    isolate_roots,
    log_enclosure,
    log_ratio,
    sqrt_enclosure,
    unique_root,
)
from unibase.words import Ordering

X = sympy.Symbol("x")
SQRT2 = unique_root((-2, 0, 1), (1, 2))
GOLDEN = unique_root((-1, -1, 1), (1, 2))


def hp(x: Fraction) -> mpmath.mpf:
    return mpmath.mpf(x.numerator) / x.denominator


@given(st.lists(st.integers(-12, 12), min_size=2, max_size=7))
def test_isolation_matches_sympy(coeffs):
    p = P.trim(coeffs)
    if len(p) < 2:
        return
    expected = sorted(r for r in sympy.Poly(list(reversed(p)), X).real_roots() if -20 <= r <= 20)
    expected = sorted(set(expected))
    roots = isolate_roots(p, (-20, 20))
    assert len(roots) == len(expected)
    for r, e in zip(roots, expected):
        enc = r.refine(Fraction(1, 10**12))
        v = sympy.Rational(enc.lo.numerator, enc.lo.denominator)
        w = sympy.Rational(enc.hi.numerator, enc.hi.denominator)
        assert v <= e <= w


def test_endpoint_roots_are_isolated():
    # (x-1)(x^2-x-1)(x^2+x+1): the root 1 sits on the search boundary
    roots = isolate_roots((1, 1, -1, -1, -1, 1), (1, 2))
    assert len(roots) == 2
    assert roots[0].as_rational() == 1
    assert roots[1] == GOLDEN or compare(roots[1], GOLDEN) is Ordering.EQ


def test_rational_roots_are_exact():
    roots = isolate_roots((0, -1, 0, 1), (-1, 1))
    assert [r.as_rational() for r in roots] == [-1, 0, 1]


def test_compare_equal_numbers_different_polynomials():
    # sqrt2 as a root of x^4 - 4 and of (x^2 - 2)(x - 5)
    a = unique_root((-4, 0, 0, 0, 1), (1, 2))
    b = unique_root(P.mul((-2, 0, 1), (-5, 1)), (1, 2))
    assert compare(a, b) is Ordering.EQ
    assert compare(a, SQRT2) is Ordering.EQ


def test_compare_close_numbers():
    # sqrt2 vs 99/70 (differs by ~7e-5) and vs 1393/985 (~4e-7)
    assert compare(SQRT2, Fraction(99, 70)) is Ordering.LT
    assert compare(SQRT2, Fraction(1393, 985)) is Ordering.GT
    assert compare(GOLDEN, SQRT2) is Ordering.GT


def test_minimal_polynomial():
    a = unique_root(P.mul((-2, 0, 1), (-1, -1, 1)), (1, Fraction(3, 2)))
    assert a.minimal().poly == (-2, 0, 1)


def test_reciprocal():
    # 1/phi = phi - 1, the positive root of x^2 + x - 1
    assert compare(GOLDEN.reciprocal(), unique_root((-1, 1, 1), (0, 1))) is Ordering.EQ


@given(st.fractions(min_value=Fraction(1, 30), max_value=20, max_denominator=30))
def test_rational_embedding(x):
    a = AlgebraicReal.from_rational(x)
    assert a.as_rational() == x
    assert compare(a, x) is Ordering.EQ


@given(st.integers(1, 60))
def test_refine_width(k):
    eps = Fraction(1, 2**k)
    e = SQRT2.refine(eps)
    assert e.width <= eps
    assert e.lo**2 <= 2 <= e.hi**2


def test_string_round_trip():
    for a in (SQRT2, GOLDEN, AlgebraicReal.from_rational(Fraction(3, 7))):
        assert AlgebraicReal.parse(a.to_string()) == a
    with pytest.raises(ValueError):
        AlgebraicReal.parse("poly:-2,0,1;interval:[2,3]")


def test_untrusted_interval_rejected():
    with pytest.raises(ValueError):
        AlgebraicReal((-2, 0, 1), Fraction(-2), Fraction(2))


def test_enclosure_arithmetic():
    a, b = Enclosure(1, 2), Enclosure(-1, 3)
    assert a + b == Enclosure(0, 5)
    assert a - b == Enclosure(-2, 3)
    assert a * b == Enclosure(-2, 6)
    assert a / Enclosure(2, 4) == Enclosure(Fraction(1, 4), 1)
    with pytest.raises(ZeroDivisionError):
        a / b
    assert Enclosure(Fraction(12345, 10**5), Fraction(12346, 10**5)).rounded(3) == "0.123"
    assert Enclosure(Fraction(12349, 10**5), Fraction(12351, 10**5)).rounded(3) is None


@given(st.fractions(min_value=Fraction(1, 50), max_value=100, max_denominator=50))
def test_log_enclosure_oracle(x):
    e = log_enclosure(x, Fraction(1, 10**15))
    with mpmath.workdps(40):
        v = mpmath.log(hp(x))
        assert hp(e.lo) <= v <= hp(e.hi)
    assert e.width <= Fraction(1, 10**15)


def test_log_enclosure_algebraic():
    e = log_enclosure(GOLDEN, Fraction(1, 10**20))
    with mpmath.workdps(50):
        v = mpmath.log((1 + mpmath.sqrt(5)) / 2)
        assert hp(e.lo) <= v <= hp(e.hi)
    assert e.width <= Fraction(1, 10**20)


def test_log_ratio_and_sqrt():
    r = log_ratio(2, SQRT2, Fraction(1, 10**12))
    assert r.lo <= 2 <= r.hi
    s = sqrt_enclosure(2, Fraction(1, 10**20))
    assert s.lo**2 <= 2 <= s.hi**2
    third = log_ratio(2, 2, Fraction(1, 10**12), factor=3)
    assert third.lo <= Fraction(1, 3) <= third.hi


def test_float_conversion():
    assert math.isclose(float(GOLDEN), (1 + math.sqrt(5)) / 2, rel_tol=1e-14)
