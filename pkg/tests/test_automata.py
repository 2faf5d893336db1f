import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from unibase.algebraic import compare, unique_root
from unibase.automata import (
    A_G,
    avoiding_count,
    build_Vq_automaton,
    build_XG,
    build_XGN,
    count_words,
    count_words_raw,
    entropy_of_automaton,
    entropy_of_base,
    entropy_XG,
    entropy_XGN,
    phi_N,
    raw_counts,
)
from unibase.spectral import spectral_radius
from unibase.words import EPS, Ordering, closure_U_condition, reflect_word, word_plus

from strategies import admissible_alphas

LOG2 = math.log(2)


def contains(enc, x, tol=1e-12):
    return float(enc.lo) - tol <= x <= float(enc.hi) + tol


def test_XG_structure():
    aut = build_XG((1, 1, 0), 1)
    labels = {lab for _, _, lab in aut.edges}
    assert labels == {(1, 1, 0), (1, 1, 1), (0, 0, 1), (0, 0, 0)}
    assert len(aut.edges) == 8
    for word, M in [((1, 1, 0), 1), ((2, 1), 2), ((2,), 3), ((3,), 4)]:
        assert build_XG(word, M).adjacency() == A_G
    with pytest.raises(ValueError):
        build_XG((1, 0), 1)


def test_XG_entropy():
    assert spectral_radius(A_G).lo == spectral_radius(A_G).hi == 2
    assert contains(entropy_XG(3).value, LOG2 / 3)
    assert contains(entropy_XG(1).value, LOG2)
    assert [count_words(build_XG((1, 1, 0), 1), n) for n in range(1, 6)] == [4 * 2 ** (n - 1) for n in range(1, 6)]


def test_phi():
    assert phi_N(2).poly == (-1, -1, 1)
    assert abs(float(phi_N(3)) - 1.839286755) < 1e-9
    with pytest.raises(ValueError):
        phi_N(1)
    assert contains(entropy_XGN(1, 2).value, math.log((1 + math.sqrt(5)) / 2))


def test_XGN_entropy_monotone_below_XG():
    for m in (1, 2, 3):
        bound = entropy_XG(m).value
        prev = None
        for N in range(2, 13):
            h = entropy_XGN(m, N).value
            assert h.hi < bound.lo
            if prev is not None:
                assert prev.hi < h.lo
            prev = h


@pytest.mark.parametrize("N", [1, 2, 3, 4])
def test_XGN_counts_are_twice_avoiding_counts(N):
    aut = build_XGN((1, 1, 0), N, 1)
    for n in range(1, 10):
        assert count_words(aut, n) == 2 * avoiding_count(N, n)


def test_avoiding_count_oracle():
    for N in (1, 2, 3):
        for n in range(0, 9):
            bad = "1" + "0" * N
            brute = sum(1 for w in itertools.product("01", repeat=n) if bad not in "".join(w))
            assert avoiding_count(N, n) == brute


@pytest.mark.parametrize("N", [2, 3, 4])
def test_XGN_automaton_entropy_matches_phi(N):
    aut = build_XGN((1, 1, 0), N, 1)
    h = entropy_of_automaton(aut, m=3)
    assert h.exact is not None
    assert compare(h.exact[0], phi_N(N)) is Ordering.EQ


def test_Vq_full_shift_and_golden():
    for M in (1, 2, 3):
        aut = build_Vq_automaton(EPS.constant(M, M))
        assert count_words(aut, 5) == (M + 1) ** 5
        assert contains(entropy_of_automaton(aut).value, math.log(M + 1))
    golden = build_Vq_automaton(EPS((), (1, 0), 1))
    counts = [count_words(golden, n) for n in range(1, 30)]
    assert counts[-1] <= 4 * 29  # polynomial growth
    assert entropy_of_automaton(golden).value.hi < Fraction(1, 10**6)


def test_Vq_entropy_constant_on_plateau():
    # H is log(golden ratio) on the plateau of 110, at both endpoints
    golden = math.log((1 + math.sqrt(5)) / 2)
    right = entropy_of_automaton(build_Vq_automaton(EPS((1, 1, 1), (0, 0, 1), 1)))
    left = entropy_of_automaton(build_Vq_automaton(EPS((), (1, 1, 0), 1)))
    assert contains(right.value, golden) and contains(left.value, golden)
    assert compare(right.exact[0], left.exact[0]) is Ordering.EQ


def test_plateau_entropy_at_least_XG_entropy():
    from unibase.plateaus import enumerate_plateaus

    for M in (1, 2, 3):
        for p in enumerate_plateaus(M, 3):
            h = entropy_of_automaton(build_Vq_automaton(p.left_alpha)).value
            xg = entropy_XG(p.m).value
            if M % 2 == 1 and p.word == ((M + 1) // 2,):
                assert contains(h, LOG2)   # equality case a1 = k + 1
            else:
                assert h.lo > xg.hi


@given(admissible_alphas(M=1))
def test_Vq_counts_match_brute_force_M1(a):
    aut = build_Vq_automaton(a)
    raw = raw_counts(a, 14)
    assert [count_words(aut, n) for n in range(15)] == raw


@given(admissible_alphas(M=2))
def test_Vq_counts_match_brute_force_M2(a):
    aut = build_Vq_automaton(a)
    assert [count_words(aut, n) for n in range(10)] == raw_counts(a, 9)


@given(admissible_alphas(M=2))
def test_counts_submultiplicative(a):
    aut = build_Vq_automaton(a)
    c = [count_words(aut, n) for n in range(12)]
    for n in range(1, 6):
        for m in range(1, 6):
            assert c[n + m] <= c[n] * c[m]


def test_raw_count_small_case():
    # (10)^inf: words between (01)-prefix and (10)-prefix constraints
    assert count_words_raw(EPS((), (1, 0), 1), 4) == count_words(build_Vq_automaton(EPS((), (1, 0), 1)), 4)


def test_entropy_of_base_examples():
    assert contains(entropy_of_base(2, 1).value, LOG2)
    assert contains(entropy_of_base(4, 3).value, math.log(4))
    assert entropy_of_base(Fraction(3, 2), 1).value.hi == 0
    # M = 3, p_L = 3 of word 2: h = log(2 a1 - M + 1) = log 2
    h = entropy_of_base(3, 3)
    assert h.exact is not None and h.exact[0].as_rational() == 2 and h.exact[1] == 1


def test_entropy_non_decreasing_in_q():
    bases = [Fraction(k, 100) for k in range(180, 201, 4)]
    vals = [entropy_of_base(q, 1, eps=Fraction(1, 10**6)).value for q in bases]
    for a, b in zip(vals, vals[1:]):
        assert a.lo <= b.hi


def test_entropy_bracket_for_aperiodic_alpha():
    # sqrt(7/2) lies inside the plateau of 110, where H = log(golden ratio)
    golden = math.log((1 + math.sqrt(5)) / 2)
    q = unique_root((-7, 0, 2), (1, 2))
    h = entropy_of_base(q, 1, eps=Fraction(1, 10**4))
    assert h.exact is None
    assert contains(h.value, golden, tol=0)
    q = unique_root((-19, 0, 5), (1, 2))
    h = entropy_of_base(q, 1, eps=Fraction(1, 10**4))
    assert golden < h.value.lo and h.value.hi < LOG2


PLATEAU_WORDS = [((1, 1, 0), 1), ((2, 1), 2), ((2,), 3), ((1, 1, 1, 0), 1)]
NEXT = {"w": ("w", "w+"), "w+": ("wb", "wb+"), "wb": ("wb", "wb+"), "wb+": ("w", "w+")}


def _route(a, b):
    """Shortest non-empty block path from a to b."""
    paths = [[s] for s in NEXT[a]]
    while True:
        for p in paths:
            if p[-1] == b:
                return p
        paths = [p + [s] for p in paths for s in NEXT[p[-1]]]


def _contains(seq, word):
    k = len(word)
    return any(tuple(seq[i:i + k]) == tuple(word) for i in range(len(seq) - k + 1))


@given(st.sampled_from(PLATEAU_WORDS), st.integers(2, 4),
       st.lists(st.booleans(), max_size=12), st.lists(st.booleans(), min_size=1, max_size=12))
def test_lambda_N_sequences_in_closure_U(case, N, walk, loop):
    word, M = case
    w = tuple(word)
    blocks = {"w": w, "w+": word_plus(w, M), "wb": reflect_word(w, M), "wb+": reflect_word(word_plus(w, M), M)}
    prefix = blocks["w+"] + blocks["wb"] * (N - 1)
    state = "wb"
    path = []
    for b in walk:
        state = NEXT[state][b]
        path.append(state)
    start = state
    cycle = []
    for b in loop:
        state = NEXT[state][b]
        cycle.append(state)
    if state != start:
        cycle += _route(state, start)
    digits = lambda names: tuple(d for s in names for d in blocks[s])
    seq = EPS(prefix + digits(path), digits(cycle), M)
    tail = seq.shift(len(prefix)).prefix(len(path) * len(w) + 3 * len(cycle) * len(w) + len(prefix) + 2)
    bad1 = blocks["w+"] + blocks["wb"] * (N - 1)
    bad2 = blocks["wb+"] + blocks["w"] * (N - 1)
    if _contains(tail, bad1) or _contains(tail, bad2):
        return
    assert closure_U_condition(seq)
