"""Entropy plateaus [p_L, p_R], the bases q_n and q-hat inside them,
q_star(M), the Komornik-Loreti constant, and transversality checks."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cmp_to_key, lru_cache
from typing import Sequence

from . import polynomials as P
from .algebraic import AlgebraicReal, Enclosure, compare, log_enclosure, unique_root
from .automata import phi_N
from .expansions import alpha as alpha_expansion, alpha_inverse, as_base, quasi_greedy, ExpansionContext
from .words import (
    EPS,
    Ordering,
    check_alphabet,
    check_plateau_word,
    check_word,
    format_word,
    lambda_sequence,
    lex_compare,
    reflect_word,
    thue_morse_type,
    word_minus,
    word_plus,
)


class PlateauStatus(Enum):
    CONFIRMED = "CONFIRMED"
    CANDIDATE = "CANDIDATE"


class Position(Enum):
    LEFT_ENDPOINT = "LEFT_ENDPOINT"
    INTERIOR = "INTERIOR"
    RIGHT_ENDPOINT = "RIGHT_ENDPOINT"


def _valid(word, M) -> tuple:
    w = check_word(word, M)
    if not check_plateau_word(M, w):
        raise ValueError(f"{format_word(w, M)} is not a plateau word for M={M}")
    return w


def left_sequence(word, M) -> EPS:
    """alpha(p_L) = w^inf."""
    return EPS((), tuple(word), M)


def right_sequence(word, M) -> EPS:
    """alpha(p_R) = w+ reflect(w)^inf."""
    return EPS(word_plus(word, M), reflect_word(word, M), M)


def qn_sequence(word, M, n: int) -> EPS:
    """alpha(q_n) = (w+ reflect(w)^(n-1) reflect(w+))^inf."""
    if n < 1:
        raise ValueError("n must be positive")
    wp = word_plus(word, M)
    return EPS((), wp + reflect_word(word, M) * (n - 1) + reflect_word(wp, M), M)


def P_polynomial(word, M) -> tuple:
    """P(x), low-to-high; 1/p_R is its zero in [1/(M+1), 1]."""
    w = tuple(word)
    m = len(w)
    wp = word_plus(w, M)
    c = [0] * (2 * m + 1)
    c[0] = -1
    for i in range(1, m):
        c[i] = w[i - 1]
        c[m + i] = (M - w[i - 1]) - w[i - 1]
    c[m] = 1 + wp[-1]
    c[2 * m] = (M - w[-1]) - wp[-1]
    return P.trim(c)


def Q_polynomial(word, M, n: int) -> tuple:
    """Q_n(x) = P(x) - x^(m(n+1)) * sum reflect(a_i) x^i."""
    w = tuple(word)
    m = len(w)
    wbar = (0,) + reflect_word(w, M)
    return P.sub(P_polynomial(w, M), P.shift_up(P.trim(wbar), m * (n + 1)))


def _root_as_base(poly, M, lo_x=None, hi_x=None) -> AlgebraicReal:
    lo_x = Fraction(1, M + 1) if lo_x is None else lo_x
    hi_x = Fraction(1) if hi_x is None else hi_x
    return unique_root(poly, (lo_x, hi_x)).reciprocal()


def compute_pL(word, M) -> AlgebraicReal:
    w = _valid(word, M)
    return alpha_inverse(left_sequence(w, M))


def compute_pR(word, M, cross_check: bool = False) -> AlgebraicReal:
    w = _valid(word, M)
    q = _root_as_base(P_polynomial(w, M), M)
    if cross_check and compare(q, alpha_inverse(right_sequence(w, M))) is not Ordering.EQ:
        raise AssertionError("p_R routes disagree")
    return q


def compute_qn(word, M, n: int, bracket: tuple | None = None) -> AlgebraicReal:
    """q_n from the zero of Q_n.  ``bracket`` may give a rational x-interval
    already known to contain 1/q_n (speeds up isolation)."""
    w = _valid(word, M)
    poly = Q_polynomial(w, M, n)
    if bracket is None:
        bracket = plateau_bracket(w, M)
    return _root_as_base(poly, M, bracket[0], bracket[1])


def compute_qn_alpha(word, M, n: int) -> AlgebraicReal:
    return alpha_inverse(qn_sequence(_valid(word, M), M, n))


def q_star(M: int) -> AlgebraicReal:
    check_alphabet(M)
    k = M // 2
    c = 2 if M % 2 else 3
    poly = (c, -(k + 3), 1)
    return unique_root(poly, (Fraction(k + 3, 2) + Fraction(1, 10**9), Fraction(k + 3))).minimal()


# ---------------------------------------------------------------------------
# Bases with non-periodic alpha, enclosed by truncation


def _series(t: Sequence[int], q: Fraction) -> Fraction:
    inv = 1 / q
    acc = Fraction(0)
    for d in reversed(t):
        acc = (acc + d) * inv
    return acc


def _bisect_decreasing(f, lo: Fraction, hi: Fraction, tol: Fraction, keep: str) -> Fraction:
    """f decreasing, f(lo) > 1 > f(hi) assumed; return a bound of the root."""
    while hi - lo > tol:
        mid = (lo + hi) / 2
        mid = Fraction(round(mid * 2**80), 2**80) if mid.denominator > 2**80 else mid
        if not lo < mid < hi:
            mid = (lo + hi) / 2
        if f(mid) > 1:
            lo = mid
        else:
            hi = mid
    return lo if keep == "lo" else hi


def enclose_alpha_inverse(prefix_fn, M: int, eps) -> Enclosure:
    """Enclosure of the base whose alpha has prefixes prefix_fn(L)."""
    eps = Fraction(eps)
    L = 32
    while True:
        t = prefix_fn(L)
        lo_f = lambda q: _series(t, q)
        hi_f = lambda q: _series(t, q) + M / (q**L * (q - 1))
        one = Fraction(1) + Fraction(1, 10**9)
        lo = _bisect_decreasing(lo_f, one, Fraction(M + 1), eps / 4, "lo")
        hi = _bisect_decreasing(hi_f, one, Fraction(M + 1), eps / 4, "hi")
        if hi - lo <= eps:
            return Enclosure(lo, hi)
        L *= 2
        if L > 1 << 14:
            raise RuntimeError("truncation did not reach the requested width")


def komornik_loreti(M: int, eps=Fraction(1, 10**12)) -> Enclosure:
    check_alphabet(M)
    enc = enclose_alpha_inverse(lambda L: lambda_sequence(M, L), M, eps)
    if enc.hi < Fraction(M + 2, 2):
        raise AssertionError("q_KL below (M+2)/2")
    return enc


def qhat_sequence(word, M, n: int) -> tuple:
    return thue_morse_type(word_plus(tuple(word), M), M, n)


def compute_qhat(word, M, eps=Fraction(1, 10**12)) -> Enclosure:
    w = _valid(word, M)
    return enclose_alpha_inverse(lambda L: qhat_sequence(w, M, L), M, eps)


# ---------------------------------------------------------------------------
# Plateau catalog


@dataclass(frozen=True)
class Plateau:
    word: tuple
    M: int
    p_L: AlgebraicReal
    p_R: AlgebraicReal
    status: PlateauStatus = PlateauStatus.CONFIRMED

    @property
    def m(self) -> int:
        return len(self.word)

    @property
    def P_poly(self) -> tuple:
        return P_polynomial(self.word, self.M)

    @property
    def left_alpha(self) -> EPS:
        return left_sequence(self.word, self.M)

    @property
    def right_alpha(self) -> EPS:
        return right_sequence(self.word, self.M)

    @property
    def word_text(self) -> str:
        return format_word(self.word, self.M)

    def to_record(self, digits: int = 10) -> dict:
        eps = Fraction(1, 10 ** (digits + 2))
        pl, pr = self.p_L.refine(eps), self.p_R.refine(eps)
        return {
            "word": self.word_text,
            "M": self.M,
            "m": self.m,
            "status": self.status.value,
            "p_L": {"poly": list(self.p_L.poly), "lo": pl.decimal(digits)[0], "hi": pl.decimal(digits)[1]},
            "p_R": {"poly": list(self.p_R.poly), "lo": pr.decimal(digits)[0], "hi": pr.decimal(digits)[1]},
            "P_poly": list(self.P_poly),
        }


def make_plateau(word, M, status=PlateauStatus.CONFIRMED) -> Plateau:
    w = _valid(word, M)
    return Plateau(w, M, compute_pL(w, M), compute_pR(w, M), status)


def candidate_words(M: int, m_max: int):
    """Words passing the necessary conditions, by increasing m then lex."""
    check_alphabet(M)
    for m in range(1, m_max + 1):
        for head in range(M // 2 + 1, M + 1):
            for rest in itertools.product(range(M + 1), repeat=m - 1):
                w = (head,) + rest
                if check_plateau_word(M, w):
                    yield w


def _interval_cmp(a, b):
    # left endpoints ascending, then right endpoints descending
    o = lex_compare(a[1], b[1])
    if o is not Ordering.EQ:
        return int(o)
    return -int(lex_compare(a[2], b[2]))


def maximal_words(M: int, m_max: int) -> list[tuple]:
    """Candidate words whose intervals are not inside another candidate's."""
    cands = [(w, left_sequence(w, M), right_sequence(w, M)) for w in candidate_words(M, m_max)]
    cands.sort(key=cmp_to_key(_interval_cmp))
    survivors = []
    reach = None
    for w, left, right in cands:
        if reach is not None and lex_compare(right, reach) is not Ordering.GT:
            continue
        if reach is not None and lex_compare(left, reach) is not Ordering.GT:
            raise AssertionError(f"overlapping plateau candidates at {format_word(w, M)}")
        survivors.append(w)
        reach = right
    return survivors


def enumerate_plateaus(M: int, m_max: int) -> list[Plateau]:
    """Plateaus generated by words of period <= m_max, ordered by p_L.

    Any interval containing a candidate's interval shares its first m digits
    of alpha, so its period is at most m; every survivor is thus CONFIRMED.
    """
    return [make_plateau(w, M) for w in maximal_words(M, m_max)]


def locate_plateau(q, M: int, m_max: int):
    """(plateau, position) for the plateau of period <= m_max containing q."""
    q = as_base(q)
    ctx = ExpansionContext(M, q)
    a = quasi_greedy(ctx, 1, m_max)
    for m in range(1, m_max + 1):
        t = tuple(a[:m])
        words = [t]
        if t[-1] > 0:
            words.append(word_minus(t))
        for w in words:
            if not check_plateau_word(M, w):
                continue
            pl = make_plateau(w, M)
            lo = compare(q, pl.p_L)
            if lo is Ordering.LT:
                continue
            hi = compare(q, pl.p_R)
            if hi is Ordering.GT:
                continue
            if lo is Ordering.EQ:
                return pl, Position.LEFT_ENDPOINT
            if hi is Ordering.EQ:
                return pl, Position.RIGHT_ENDPOINT
            return pl, Position.INTERIOR
    return None


# ---------------------------------------------------------------------------
# Transversality


@dataclass(frozen=True)
class MarginRecord:
    n: int
    margin: Fraction
    ok: bool


@dataclass
class TransversalityReport:
    word: tuple
    M: int
    derivative_ok: bool
    derivative_margin: Fraction | None
    derivative_failure: tuple | None
    margins: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.derivative_ok and all(r.ok for r in self.margins)

    def to_record(self) -> dict:
        return {
            "word": format_word(self.word, self.M),
            "M": self.M,
            "derivative_ok": self.derivative_ok,
            "derivative_margin": float(self.derivative_margin) if self.derivative_margin is not None else None,
            "derivative_failure": [str(x) for x in self.derivative_failure] if self.derivative_failure else None,
            "inequalities": [{"n": r.n, "margin": float(r.margin), "ok": r.ok} for r in self.margins],
            "ok": self.ok,
        }


def certify_lower_bound(g: tuple, lo: Fraction, hi: Fraction, min_width=Fraction(1, 2**40), max_leaves: int = 100000):
    """Certified lower bound of g on [lo, hi] (lo >= 0) if it can be shown
    nonnegative by subdivision; otherwise (None, failing interval)."""
    stack = [(lo, hi)]
    best = None
    leaves = 0
    while stack:
        a, b = stack.pop()
        lb, _ = P.range_bounds(g, a, b)
        if lb >= 0:
            best = lb if best is None else min(best, lb)
            leaves += 1
            continue
        if b - a < min_width or leaves > max_leaves:
            return None, (a, b)
        c = (a + b) / 2
        stack += [(c, b), (a, c)]
    return best, None


def plateau_bracket(word, M, p_L=None, p_R=None) -> tuple[Fraction, Fraction]:
    """Dyadic x-interval containing [1/p_R, 1/p_L]."""
    eps = Fraction(1, 2**40)
    pl = (compute_pL(word, M) if p_L is None else p_L).refine(eps)
    pr = (compute_pR(word, M) if p_R is None else p_R).refine(eps)
    # small denominators keep Descartes isolation cheap
    return _dyadic_out(1 / pr.hi, 1 / pl.lo)


@lru_cache(maxsize=None)
def _log_phi(N: int, eps: Fraction) -> Enclosure:
    return log_enclosure(phi_N(N), eps)


def _dyadic_out(lo: Fraction, hi: Fraction, bits: int = 32) -> tuple[Fraction, Fraction]:
    s = 1 << bits
    return Fraction(math.floor(lo * s), s), Fraction(math.ceil(hi * s), s)


def verify_transversality(word, M: int, n_max: int = 20, eps=Fraction(1, 10**12)) -> TransversalityReport:
    w = _valid(word, M)
    eps = Fraction(eps)
    p_L = compute_pL(w, M)
    p_R = compute_pR(w, M)
    x_lo, x_hi = plateau_bracket(w, M, p_L, p_R)
    g = P.sub(P.derivative(P_polynomial(w, M)), (w[0],))
    margin, fail = certify_lower_bound(g, x_lo, x_hi)
    report = TransversalityReport(w, M, margin is not None, margin, fail)
    log2 = log_enclosure(2, eps)
    log_pr = log_enclosure(p_R, eps)
    for n in range(1, n_max + 1):
        qn = compute_qn(w, M, n, bracket=(x_lo, x_hi))
        lhs = _log_phi(n + 1, eps) / log2
        rhs = log_enclosure(qn, eps) / log_pr
        m = rhs.lo - lhs.hi
        report.margins.append(MarginRecord(n, m, m > 0))
    return report
