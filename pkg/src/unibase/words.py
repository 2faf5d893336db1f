"""Words and eventually periodic sequences over the alphabet {0, ..., M}.

Words are plain tuples of ints.  Infinite sequences are represented by
:class:`EventuallyPeriodicSequence`, kept in canonical form so that
structural equality coincides with equality of the underlying sequences.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from enum import IntEnum
from typing import Iterable, Sequence

Word = tuple


class Ordering(IntEnum):
    LT = -1
    EQ = 0
    GT = 1

    @classmethod
    def of(cls, a, b) -> "Ordering":
        return cls.LT if a < b else cls.GT if a > b else cls.EQ


def check_alphabet(M: int) -> int:
    if not isinstance(M, int) or isinstance(M, bool) or M < 1:
        raise ValueError(f"alphabet bound must be a positive integer, got {M!r}")
    return M


def check_word(w: Iterable[int], M: int) -> Word:
    check_alphabet(M)
    w = tuple(int(d) for d in w)
    for d in w:
        if d < 0 or d > M:
            raise ValueError(f"digit {d} outside alphabet 0..{M}")
    return w


def reflect_word(w: Sequence[int], M: int) -> Word:
    return tuple(M - d for d in w)


def word_plus(w: Sequence[int], M: int) -> Word:
    w = check_word(w, M)
    if not w or w[-1] >= M:
        raise ValueError("word_plus needs a nonempty word whose last digit is below M")
    return w[:-1] + (w[-1] + 1,)


def word_minus(w: Sequence[int], M: int | None = None) -> Word:
    w = tuple(w) if M is None else check_word(w, M)
    if not w or w[-1] <= 0:
        raise ValueError("word_minus needs a nonempty word whose last digit is positive")
    return w[:-1] + (w[-1] - 1,)


def word_compare(a: Sequence[int], b: Sequence[int]) -> Ordering:
    """Lexicographic comparison of two words of equal length."""
    if len(a) != len(b):
        raise ValueError("words must have equal length")
    for x, y in zip(a, b):
        if x != y:
            return Ordering.LT if x < y else Ordering.GT
    return Ordering.EQ


def format_word(w: Sequence[int], M: int) -> str:
    sep = "," if M > 9 else ""
    return sep.join(str(d) for d in w)


def parse_word(text: str, M: int) -> Word:
    text = text.strip()
    if not text:
        return ()
    if M > 9 or "," in text:
        parts = [p for p in text.split(",") if p.strip() != ""]
    else:
        parts = list(text)
    try:
        return check_word((int(p) for p in parts), M)
    except ValueError as exc:
        raise ValueError(f"cannot parse word {text!r}: {exc}") from None


def _primitive_root(w: Word) -> Word:
    n = len(w)
    for p in range(1, n + 1):
        if n % p == 0 and w[:p] * (n // p) == w:
            return w[:p]
    return w


@dataclass(frozen=True)
class EventuallyPeriodicSequence:
    """The sequence ``preperiod period period ...`` over {0, ..., M}."""

    preperiod: Word
    period: Word
    M: int

    def __post_init__(self):
        M = check_alphabet(self.M)
        pre = check_word(self.preperiod, M)
        per = check_word(self.period, M)
        if not per:
            raise ValueError("period must be nonempty")
        per = _primitive_root(per)
        while pre and pre[-1] == per[-1]:
            per = (pre[-1],) + per[:-1]
            pre = pre[:-1]
        object.__setattr__(self, "preperiod", pre)
        object.__setattr__(self, "period", per)

    @classmethod
    def periodic(cls, period: Sequence[int], M: int) -> "EventuallyPeriodicSequence":
        return cls((), tuple(period), M)

    @classmethod
    def constant(cls, d: int, M: int) -> "EventuallyPeriodicSequence":
        return cls((), (d,), M)

    @property
    def horizon(self) -> int:
        return len(self.preperiod) + len(self.period)

    def digit(self, i: int) -> int:
        """Digit at 0-based position i."""
        k = len(self.preperiod)
        if i < k:
            return self.preperiod[i]
        return self.period[(i - k) % len(self.period)]

    def prefix(self, n: int) -> Word:
        k = len(self.preperiod)
        if n <= k:
            return self.preperiod[:n]
        reps = (n - k) // len(self.period) + 1
        return (self.preperiod + self.period * reps)[:n]

    def shift(self, n: int = 1) -> "EventuallyPeriodicSequence":
        if n < 0:
            raise ValueError("shift amount must be nonnegative")
        k = len(self.preperiod)
        if n <= k:
            return EventuallyPeriodicSequence(self.preperiod[n:], self.period, self.M)
        r = (n - k) % len(self.period)
        return EventuallyPeriodicSequence((), self.period[r:] + self.period[:r], self.M)

    def shifts(self):
        """All distinct shifts sigma^n(self), n >= 0."""
        return [self.shift(n) for n in range(self.horizon)]

    def reflect(self) -> "EventuallyPeriodicSequence":
        M = self.M
        return EventuallyPeriodicSequence(
            reflect_word(self.preperiod, M), reflect_word(self.period, M), M
        )

    def ends_in_zeros(self) -> bool:
        return self.period == (0,)

    def compare(self, other: "EventuallyPeriodicSequence") -> Ordering:
        return lex_compare(self, other)

    def __lt__(self, other):
        return lex_compare(self, other) is Ordering.LT

    def __le__(self, other):
        return lex_compare(self, other) is not Ordering.GT

    def __gt__(self, other):
        return lex_compare(self, other) is Ordering.GT

    def __ge__(self, other):
        return lex_compare(self, other) is not Ordering.LT

    def __str__(self) -> str:
        M = self.M
        pre = format_word(self.preperiod, M)
        if pre and M > 9:
            pre += ","
        return f"{pre}({format_word(self.period, M)})^inf"

    @classmethod
    def parse(cls, text: str, M: int) -> "EventuallyPeriodicSequence":
        m = re.fullmatch(r"\s*([0-9,]*)\((.+)\)\^inf\s*", text)
        if not m:
            raise ValueError(f"not an eventually periodic sequence: {text!r}")
        return cls(parse_word(m.group(1), M), parse_word(m.group(2), M), M)


EPS = EventuallyPeriodicSequence


def lex_compare(a: EPS, b: EPS) -> Ordering:
    if a.M != b.M:
        raise ValueError(f"alphabet mismatch: M={a.M} vs M={b.M}")
    n = max(len(a.preperiod), len(b.preperiod)) + math.lcm(len(a.period), len(b.period))
    for i in range(n):
        x, y = a.digit(i), b.digit(i)
        if x != y:
            return Ordering.LT if x < y else Ordering.GT
    return Ordering.EQ


def compare_with_word(s: EPS, w: Sequence[int]) -> Ordering:
    """Compare the first len(w) digits of s with w."""
    return word_compare(s.prefix(len(w)), w)


def reflect(x, M: int | None = None):
    if isinstance(x, EventuallyPeriodicSequence):
        return x.reflect()
    if M is None:
        raise ValueError("reflecting a word needs M")
    return reflect_word(check_word(x, M), M)


def shift(s: EPS, n: int) -> EPS:
    return s.shift(n)


def thue_morse(i: int) -> int:
    if i < 0:
        raise ValueError("index must be nonnegative")
    return bin(i).count("1") & 1


def lambda_sequence(M: int, n: int) -> Word:
    """First n terms of the generalized Thue-Morse sequence (lambda_i)."""
    check_alphabet(M)
    if n < 1:
        raise ValueError("n must be positive")
    k = M // 2
    if M % 2:
        return tuple(k + thue_morse(i) for i in range(1, n + 1))
    return tuple(k + thue_morse(i) - thue_morse(i - 1) for i in range(1, n + 1))


def thue_morse_type(block: Sequence[int], M: int, n: int) -> Word:
    """Prefix of length n of the sequence obtained from ``block`` by the
    doubling rule  x_{L+1..2L} = reflect(x_{1..L})^+ ."""
    out = check_word(block, M)
    if not out:
        raise ValueError("block must be nonempty")
    while len(out) < n:
        out = out + word_plus(reflect_word(out, M), M)
    return out[:n]


def compare_with_lambda(s: EPS, max_len: int = 1 << 16) -> Ordering:
    """Compare s with the (never eventually periodic) lambda sequence."""
    M = s.M
    length = max(16, 2 * s.horizon)
    while length <= max_len:
        lam = lambda_sequence(M, length)
        o = word_compare(s.prefix(length), lam)
        if o is not Ordering.EQ:
            return o
        length *= 2
    raise RuntimeError("comparison with lambda sequence did not terminate")


def is_admissible_alpha(s: EPS) -> bool:
    if s.ends_in_zeros():
        return False
    for n in range(1, s.horizon + len(s.period)):
        if lex_compare(s.shift(n), s) is Ordering.GT:
            return False
    return True


def closure_U_condition(s: EPS) -> bool:
    if not is_admissible_alpha(s):
        raise ValueError(f"{s} is not a quasi-greedy expansion")
    r = s.reflect()
    for n in range(1, s.horizon + len(s.period)):
        t = s.shift(n)
        if lex_compare(r, t) is not Ordering.LT or lex_compare(t, s) is Ordering.GT:
            return False
    return True


def check_plateau_word(M: int, word: Sequence[int]) -> bool:
    """Necessary conditions for a word to generate an entropy plateau."""
    check_alphabet(M)
    try:
        w = check_word(word, M)
    except ValueError:
        return False
    m = len(w)
    if m == 0 or not (M - w[0] < w[0]) or w[-1] >= M:
        return False
    for i in range(1, m):
        tail = w[i:]
        head = w[: m - i]
        if word_compare(reflect_word(head, M), tail) is Ordering.GT:
            return False
        if word_compare(tail, head) is not Ordering.LT:
            return False
    return compare_with_lambda(EPS((), w, M)) is Ordering.GT
