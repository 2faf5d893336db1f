"""Labeled automata for the subshifts X_G, X_{G,N} and V_q, word counts
and certified topological entropy.

Entropies are natural-log values.  Conversion to base-(M+1) units happens
only when a dimension is formed.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Hashable, Sequence

import numpy as np

from .algebraic import AlgebraicReal, Enclosure, log_enclosure, unique_root
from .expansions import alpha as alpha_expansion, as_base, compare
from .spectral import IntegerMatrix, perron_root, spectral_radius
from .words import (
    EPS,
    EventuallyPeriodicSequence,
    Ordering,
    check_plateau_word,
    check_word,
    format_word,
    is_admissible_alpha,
    reflect_word,
    word_plus,
)

DEFAULT_EPS = Fraction(1, 10**12)
EXACT_STATE_LIMIT = 60


@dataclass(frozen=True)
class LabeledAutomaton:
    """States, word-labeled edges and an optional start state.

    With ``start`` set, words are read along paths leaving ``start``.
    Without it the automaton is vertex-labeled (each edge carries the label
    of its target) and a word is any label sequence along a path.
    """

    states: tuple
    edges: tuple
    M: int
    start: Hashable | None = None

    def __post_init__(self):
        idx = set(self.states)
        for a, b, lab in self.edges:
            if a not in idx or b not in idx:
                raise ValueError(f"edge ({a!r}, {b!r}) uses an unknown state")
            check_word(lab, self.M)

    @property
    def index(self) -> dict:
        return {s: i for i, s in enumerate(self.states)}

    def adjacency(self, exclude_start: bool = False) -> IntegerMatrix:
        states = [s for s in self.states if not (exclude_start and s == self.start)]
        ix = {s: i for i, s in enumerate(states)}
        rows = [[0] * len(states) for _ in states]
        for a, b, _ in self.edges:
            if a in ix and b in ix:
                rows[ix[a]][ix[b]] += 1
        return IntegerMatrix(tuple(map(tuple, rows)))

    def out_edges(self) -> dict:
        out = defaultdict(list)
        for a, b, lab in self.edges:
            out[a].append((b, lab))
        return out

    def digit_automaton(self) -> "LabeledAutomaton":
        """Expand word labels into single-digit edges, sharing prefixes."""
        states = list(self.states)
        edges = []
        for src, outs in self.out_edges().items():
            trie: dict = {}
            for dst, lab in outs:
                if not lab:
                    raise ValueError("empty edge label cannot be expanded")
                node = src
                for k, d in enumerate(lab[:-1]):
                    key = (src, tuple(lab[: k + 1]))
                    if key not in trie:
                        trie[key] = ("mid", src, tuple(lab[: k + 1]))
                        states.append(trie[key])
                        edges.append((node, trie[key], (d,)))
                    node = trie[key]
                edges.append((node, dst, (lab[-1],)))
        return LabeledAutomaton(tuple(states), tuple(edges), self.M, self.start)

    def is_deterministic(self) -> bool:
        for outs in self.out_edges().values():
            labels = [lab for _, lab in outs]
            if len(labels) != len(set(labels)):
                return False
            for a in labels:
                for b in labels:
                    if a != b and b[: len(a)] == a:
                        return False
        return True

    def dump(self) -> str:
        ix = self.index
        lines = [f"states {len(self.states)} start {ix.get(self.start, '-')}"]
        for i, s in enumerate(self.states):
            lines.append(f"state {i} {s!r}")
        for a, b, lab in sorted(self.edges, key=lambda e: (ix[e[0]], ix[e[1]], e[2])):
            lines.append(f"edge {ix[a]} {ix[b]} {format_word(lab, self.M)}")
        return "\n".join(lines)


@dataclass(frozen=True)
class EntropyResult:
    """value encloses h (natural log); exact, if present, is (rho, m) with
    h = log(rho) / m."""

    value: Enclosure
    exact: tuple | None = None

    def to_record(self) -> dict:
        rec = {"lo": str(self.value.lo), "hi": str(self.value.hi)}
        if self.exact is not None:
            rec["exact"] = {"log_of": self.exact[0].to_string(), "divided_by": self.exact[1]}
        return rec


def _entropy_from_radius(rho: Enclosure, m: int = 1, eps=DEFAULT_EPS) -> Enclosure:
    lo = log_enclosure(rho.lo, eps).lo if rho.lo > 1 else Fraction(0)
    hi = log_enclosure(rho.hi, eps).hi if rho.hi > 1 else Fraction(0)
    return Enclosure(max(lo, Fraction(0)) / m, hi / m)


def entropy_of_automaton(aut: LabeledAutomaton, m: int = 1, exact: bool | None = None,
                         eps=DEFAULT_EPS) -> EntropyResult:
    """Entropy log(rho(A))/m of an automaton's adjacency matrix."""
    A = aut.adjacency()
    want_exact = exact if exact is not None else A.n <= EXACT_STATE_LIMIT
    if want_exact:
        rho = perron_root(A)
        r = rho.as_rational()
        if r is not None and r <= 1:
            return EntropyResult(Enclosure(0, 0), (rho, m))
        return EntropyResult(log_enclosure(rho, eps * m) * Fraction(1, m), (rho, m))
    rho_enc = spectral_radius(A, eps / 4)
    return EntropyResult(_entropy_from_radius(rho_enc, m, eps))


# ---------------------------------------------------------------------------
# X_G and X_{G,N}


def _blocks(word: Sequence[int], M: int):
    w = tuple(word)
    wp = word_plus(w, M)
    return {"w": w, "w+": wp, "wb": reflect_word(w, M), "wb+": reflect_word(wp, M)}


_XG_STATES = ("w", "w+", "wb", "wb+")
_XG_NEXT = {"w": ("w", "w+"), "w+": ("wb", "wb+"), "wb": ("wb", "wb+"), "wb+": ("w", "w+")}


def _validated(word, M):
    w = check_word(word, M)
    if not check_plateau_word(M, w):
        raise ValueError(f"{format_word(w, M)} does not satisfy the plateau word conditions")
    return w


def build_XG(word: Sequence[int], M: int) -> LabeledAutomaton:
    """The 4-state block graph on w, w+, reflect(w), reflect(w+)."""
    w = _validated(word, M)
    B = _blocks(w, M)
    edges = tuple((a, b, B[b]) for a in _XG_STATES for b in _XG_NEXT[a])
    return LabeledAutomaton(_XG_STATES, edges, M)


A_G = IntegerMatrix(((1, 1, 0, 0), (0, 0, 1, 1), (0, 0, 1, 1), (1, 1, 0, 0)))


def entropy_XG(m: int, eps=DEFAULT_EPS) -> EntropyResult:
    if m < 1:
        raise ValueError("m must be positive")
    two = AlgebraicReal.from_rational(2)
    return EntropyResult(log_enclosure(two, eps * m) * Fraction(1, m), (two, m))


@lru_cache(maxsize=None)
def phi_N(N: int) -> AlgebraicReal:
    """Root in (1, 2) of 1 + x + ... + x^(N-1) = x^N."""
    if N < 2:
        raise ValueError("N must be at least 2")
    poly = tuple([-1] * N + [1])
    return unique_root(poly, (Fraction(1), Fraction(2)))


def entropy_XGN(m: int, N: int, eps=DEFAULT_EPS) -> EntropyResult:
    if m < 1:
        raise ValueError("m must be positive")
    phi = phi_N(N)
    return EntropyResult(log_enclosure(phi, eps * m) * Fraction(1, m), (phi, m))


def build_XGN(word: Sequence[int], N: int, M: int) -> LabeledAutomaton:
    """X_G without the block runs w+ reflect(w)^N and reflect(w+) w^N.

    States are (block, r) with r the number of plain blocks since the last
    plus-block (None before any plus-block).  A synthetic start state
    makes the presentation deterministic.
    """
    if N < 1:
        raise ValueError("N must be positive")
    w = _validated(word, M)
    B = _blocks(w, M)
    plain_of = {"w+": "wb", "wb+": "w", "w": "w", "wb": "wb"}
    plus_of = {"w+": "wb+", "wb+": "w+", "w": "w+", "wb": "wb+"}

    def succ(state):
        blk, r = state
        out = [(plus_of[blk], 0)]
        if blk in ("w+", "wb+"):
            if N >= 2:
                out.append((plain_of[blk], 1))
        elif r is None:
            out.append((blk, None))
        elif r + 1 <= N - 1:
            out.append((blk, r + 1))
        return out

    start = ("start", None)
    initial = [("w", None), ("w+", 0), ("wb", None), ("wb+", 0)]
    states = [start]
    edges = []
    seen = {start}
    todo = []
    for s in initial:
        edges.append((start, s, B[s[0]]))
        if s not in seen:
            seen.add(s)
            states.append(s)
            todo.append(s)
    while todo:
        s = todo.pop()
        for t in succ(s):
            edges.append((s, t, B[t[0]]))
            if t not in seen:
                seen.add(t)
                states.append(t)
                todo.append(t)
    return LabeledAutomaton(tuple(states), tuple(edges), M, start)


def avoiding_count(N: int, n: int) -> int:
    """Binary words of length n avoiding 1 0^N (brute force)."""
    bad = "1" + "0" * N
    return sum(1 for i in range(2**n) if bad not in format(i, f"0{n}b")) if n else 1


# ---------------------------------------------------------------------------
# V_q follower automaton


def _advance(seq: EPS, pos: int) -> int:
    pos += 1
    if pos == seq.horizon:
        pos = len(seq.preperiod)
    return pos


def constraint_automaton(upper: EPS, lower: EPS) -> LabeledAutomaton:
    """Minimal DFA for words x with lower <= every tail of x <= upper
    (tails compared with prefixes of the same length)."""
    if upper.M != lower.M:
        raise ValueError("alphabet mismatch")
    M = upper.M
    seqs = {"U": upper, "L": lower}
    fresh = frozenset({("U", 0), ("L", 0)})

    def step(S, d):
        nxt = set()
        for kind, pos in S | fresh:
            e = seqs[kind].digit(pos)
            if kind == "U":
                if d > e:
                    return None
                if d == e:
                    nxt.add(("U", _advance(upper, pos)))
            else:
                if d < e:
                    return None
                if d == e:
                    nxt.add(("L", _advance(lower, pos)))
        return frozenset(nxt)

    start = frozenset()
    order = [start]
    index = {start: 0}
    trans: list[dict] = []
    i = 0
    while i < len(order):
        S = order[i]
        row = {}
        for d in range(M + 1):
            T = step(S, d)
            if T is None:
                continue
            if T not in index:
                index[T] = len(order)
                order.append(T)
            row[d] = index[T]
        trans.append(row)
        i += 1
    return _minimize(trans, M)


def _minimize(trans: list[dict], M: int) -> LabeledAutomaton:
    n = len(trans)
    cls = [0] * n
    while True:
        sigs = {}
        new = []
        for s in range(n):
            sig = (cls[s],) + tuple(cls[trans[s][d]] if d in trans[s] else -1 for d in range(M + 1))
            new.append(sigs.setdefault(sig, len(sigs)))
        if len(sigs) == len(set(cls)):
            cls = new
            break
        cls = new
    # renumber so that the start class is 0 and numbering follows BFS order
    remap: dict[int, int] = {}
    for s in range(n):
        remap.setdefault(cls[s], len(remap))
    k = len(remap)
    edges = set()
    for s in range(n):
        for d, t in trans[s].items():
            edges.add((remap[cls[s]], remap[cls[t]], (d,)))
    return LabeledAutomaton(tuple(range(k)), tuple(sorted(edges)), M, 0)


def build_Vq_automaton(alpha: EPS) -> LabeledAutomaton:
    if not is_admissible_alpha(alpha):
        raise ValueError(f"{alpha} is not a quasi-greedy expansion")
    return constraint_automaton(alpha, alpha.reflect())


# ---------------------------------------------------------------------------
# Counting


def count_words(aut: LabeledAutomaton, n: int) -> int:
    if n < 0:
        raise ValueError("n must be nonnegative")
    if aut.start is not None:
        return _count_from(aut, {aut.start: 1}, n)
    if n == 0:
        return 1
    has_in = {b for _, b, _ in aut.edges}
    return _count_from(aut, {s: 1 for s in aut.states if s in has_in}, n - 1)


def _count_from(aut: LabeledAutomaton, vec: dict, n: int) -> int:
    outs = aut.out_edges()
    for _ in range(n):
        nxt: dict = defaultdict(int)
        for s, c in vec.items():
            for t, _ in outs.get(s, ()):
                nxt[t] += c
        vec = nxt
    return sum(vec.values())


def raw_counts(alpha: EPS, n: int, cap: int = 20_000_000) -> list[int]:
    """Brute-force counts, for k = 0..n, of length-k words whose every
    tail lies between the equal-length prefixes of reflect(alpha) and alpha.

    Words are grown one digit at a time (the language is prefix-closed)
    and every tail is re-checked against the prefix conditions directly.
    """
    M = alpha.M
    base = M + 1
    if base**n >= 2**62:
        raise OverflowError("word codes exceed 62 bits")
    up = alpha.prefix(n)
    lo = alpha.reflect().prefix(n)

    def codes(w):
        out = [0]
        for d in w:
            out.append(out[-1] * base + d)
        return out

    up_c, lo_c = codes(up), codes(lo)
    words = np.zeros(1, dtype=np.int64)
    counts = [1]
    for k in range(1, n + 1):
        ext = (words[:, None] * base + np.arange(base, dtype=np.int64)[None, :]).ravel()
        ok = np.ones(ext.shape, dtype=bool)
        mod = 1
        for length in range(1, k + 1):
            mod *= base
            tail = ext % mod
            ok &= (tail <= up_c[length]) & (tail >= lo_c[length])
        words = ext[ok]
        counts.append(int(words.size))
        if words.size > cap:
            raise MemoryError(f"more than {cap} words at length {k}")
    return counts


def count_words_raw(alpha: EPS, n: int, cap: int = 20_000_000) -> int:
    return raw_counts(alpha, n, cap)[-1]


# ---------------------------------------------------------------------------
# Entropy of a base


def entropy_of_base(q, M: int, depth: int = 256, eps=DEFAULT_EPS) -> EntropyResult:
    """H(q): the entropy of V_q (equal to that of U_q)."""
    from .plateaus import komornik_loreti

    q = as_base(q)
    if compare(q, M + 1) is Ordering.EQ:
        return entropy_of_automaton(build_Vq_automaton(EPS.constant(M, M)), eps=eps)
    kl = komornik_loreti(M, Fraction(1, 10**12))
    if compare(q, kl.lo) is Ordering.LT:
        # H vanishes on (1, q_KL]
        return EntropyResult(Enclosure(0, 0), (AlgebraicReal.from_rational(1), 1))
    a = alpha_expansion(q, M, depth)
    if a.sequence is not None:
        return entropy_of_automaton(build_Vq_automaton(a.sequence), eps=eps)
    return _bracket_entropy(a.digits, M, eps)


def _bracket_entropy(prefix: tuple, M: int, eps) -> EntropyResult:
    best = None
    for L in (16, 32, 64):
        if L > len(prefix):
            break
        t = tuple(prefix[:L])
        low = EPS(t, (0,), M)
        high = EPS(t, (M,), M)
        h_lo = entropy_of_automaton(constraint_automaton(low, low.reflect()), exact=False, eps=eps)
        h_hi = entropy_of_automaton(constraint_automaton(high, high.reflect()), exact=False, eps=eps)
        enc = Enclosure(h_lo.value.lo, max(h_hi.value.hi, h_lo.value.lo))
        if best is None or enc.width < best.width:
            best = enc
        if best.width <= eps:
            break
    return EntropyResult(best)
