"""Randomised consistency suites shared by the CLI and the test-suite."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .automata import build_Vq_automaton, count_words, raw_counts
from .expansions import Verdict, alpha, alpha_inverse, rational_expansion, univoque_check
from .words import EPS, Ordering, format_word, is_admissible_alpha, lex_compare


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    skipped: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_record(self) -> dict:
        return {
            "suite": self.name,
            "cases": self.cases,
            "skipped": self.skipped,
            "failures": self.failures,
            "ok": self.ok,
        }


def random_admissible_alpha(rng: random.Random, M: int, max_pre: int = 3, max_per: int = 4) -> EPS:
    """A random eventually periodic quasi-greedy expansion over {0..M}."""
    while True:
        pre = tuple(rng.randint(0, M) for _ in range(rng.randint(0, max_pre)))
        per = tuple(rng.randint(0, M) for _ in range(rng.randint(1, max_per)))
        s = EPS(pre, per, M)
        if is_admissible_alpha(s):
            return s


def random_sequence(rng: random.Random, M: int, max_pre: int = 4, max_per: int = 4) -> EPS:
    pre = tuple(rng.randint(0, M) for _ in range(rng.randint(0, max_pre)))
    per = tuple(rng.randint(0, M) for _ in range(rng.randint(1, max_per)))
    return EPS(pre, per, M)


def random_base(rng: random.Random, M: int, den: int = 1000) -> Fraction:
    return Fraction(rng.randint(den + 1, (M + 1) * den), den)


def entropy_oracle(M: int, seed: int = 0, samples: int = 20, n_max: int = 16,
                   cap: int = 2_000_000) -> SuiteResult:
    """Automaton word counts against brute-force enumeration."""
    rng = random.Random(seed)
    res = SuiteResult("entropy-oracle")
    seen = set()
    attempts = 0
    while res.cases < samples and attempts < 50 * samples:
        attempts += 1
        a = random_admissible_alpha(rng, M)
        if a in seen:
            continue
        seen.add(a)
        try:
            raw = raw_counts(a, n_max, cap)
        except MemoryError:
            res.skipped += 1
            continue
        aut = build_Vq_automaton(a)
        res.cases += 1
        for n in range(n_max + 1):
            c = count_words(aut, n)
            if c != raw[n]:
                res.failures.append({"alpha": str(a), "n": n, "automaton": c, "brute_force": raw[n]})
                break
    return res


def round_trip(M: int, seed: int = 0, samples: int = 50) -> SuiteResult:
    """alpha(alpha^-1(s)) == s for admissible eventually periodic s."""
    rng = random.Random(seed)
    res = SuiteResult("round-trip")
    seen = set()
    for _ in range(100 * samples):
        if len(seen) == samples:
            break
        s = random_admissible_alpha(rng, M, max_pre=4, max_per=6)
        if s in seen:
            continue
        seen.add(s)
        q = alpha_inverse(s, M)
        back = alpha(q, M).known()
        res.cases += 1
        if back != s:
            res.failures.append({"alpha": str(s), "got": str(back)})
    return res


def alpha_monotone(M: int, seed: int = 0, samples: int = 50, depth: int = 256) -> SuiteResult:
    """p < q implies alpha(p) < alpha(q), checked on rational bases."""
    rng = random.Random(seed)
    res = SuiteResult("alpha-monotone")
    for _ in range(samples):
        p, q = random_base(rng, M), random_base(rng, M)
        if p == q:
            continue
        p, q = min(p, q), max(p, q)
        a = rational_expansion(p, M, depth)
        b = rational_expansion(q, M, depth)
        res.cases += 1
        if not a < b:
            res.failures.append({"p": str(p), "q": str(q), "alpha_p": format_word(a[:32], M),
                                 "alpha_q": format_word(b[:32], M)})
    return res


def u_nesting(M: int, seed: int = 0, samples: int = 30, attempts: int = 200_000) -> SuiteResult:
    """p < q and s in U_p imply s in U_q (sequence level).

    Triples are redrawn until s is in U_p, so every case is non-vacuous.
    """
    rng = random.Random(seed)
    res = SuiteResult("U-nesting")
    for _ in range(attempts):
        if res.cases == samples:
            break
        a, b = random_admissible_alpha(rng, M, 4, 6), random_admissible_alpha(rng, M, 4, 6)
        o = lex_compare(a, b)
        if o is Ordering.EQ:
            continue
        if o is Ordering.GT:
            a, b = b, a
        s = random_sequence(rng, M)
        if univoque_check(s, a, M).verdict is not Verdict.YES:
            continue
        res.cases += 1
        if univoque_check(s, b, M).verdict is not Verdict.YES:
            res.failures.append({"s": str(s), "alpha_p": str(a), "alpha_q": str(b)})
    res.skipped = samples - res.cases
    return res


def invariants(M: int, seed: int = 0) -> list[SuiteResult]:
    return [round_trip(M, seed), alpha_monotone(M, seed), u_nesting(M, seed)]
