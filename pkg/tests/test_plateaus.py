import math
from fractions import Fraction

import pytest

from unibase import polynomials as P
from unibase.algebraic import compare, unique_root
from unibase.expansions import Verdict, alpha, alpha_inverse, in_closure_U, in_U
from unibase.plateaus import (
    PlateauStatus,
    Position,
    P_polynomial,
    Q_polynomial,
    candidate_words,
    compute_pL,
    compute_pR,
    compute_qhat,
    compute_qn,
    compute_qn_alpha,
    enumerate_plateaus,
    komornik_loreti,
    locate_plateau,
    make_plateau,
    q_star,
    qhat_sequence,
    right_sequence,
    verify_transversality,
)
from unibase.words import EPS, Ordering, format_word, reflect_word

LAMBDA_STAR_POLY = (1, 1, -2, -1, -1, 1)   # x^5 - x^4 - x^3 - 2x^2 + x + 1
GAMMA_STAR_POLY = (1, 2, -3, -2, 1)        # x^4 - 2x^3 - 3x^2 + 2x + 1


def near(x, value, tol):
    e = x.refine(Fraction(1, 10**12)) if hasattr(x, "refine") else x
    return abs(float(e.lo) - value) <= tol and abs(float(e.hi) - value) <= tol


@pytest.mark.parametrize("M, value", [(1, 1.78723), (2, 2.53595), (3, 2.91002)])
def test_komornik_loreti(M, value):
    enc = komornik_loreti(M, Fraction(1, 10**6))
    assert enc.width <= Fraction(1, 10**6)
    assert abs(float(enc.lo) - value) <= 5e-6 and abs(float(enc.hi) - value) <= 5e-6


def test_first_plateaus():
    p = make_plateau((1, 1, 0), 1)
    assert p.p_L.poly == (-1, -1, -1, 1)
    assert p.p_R.poly == LAMBDA_STAR_POLY
    assert near(p.p_L, 1.83929, 1e-5) and near(p.p_R, 1.87135, 1e-5)
    g = make_plateau((2, 1), 2)
    assert g.p_R.poly == GAMMA_STAR_POLY
    assert near(g.p_L, 1 + math.sqrt(3), 1e-10) and near(g.p_R, 2.77462, 1e-5)


def test_symmetric_single_digit_plateaus():
    # M = 2k+1, word (k+1): p_L = k+2
    for k in range(1, 4):
        M = 2 * k + 1
        assert compute_pL((k + 1,), M).as_rational() == k + 2
    assert compare(compute_pR((2,), 3), unique_root((2, -4, 1), (3, 4))) is Ordering.EQ


def test_q_star():
    assert q_star(1).as_rational() == 2
    assert compare(q_star(3), unique_root((2, -4, 1), (3, 4))) is Ordering.EQ
    assert near(q_star(4), (5 + math.sqrt(13)) / 2, 1e-10)
    assert near(q_star(8), (7 + math.sqrt(37)) / 2, 1e-10)


def test_pR_dual_route_for_all_enumerated_words():
    for M in (1, 2, 3):
        for p in enumerate_plateaus(M, 4):
            assert compare(p.p_R, alpha_inverse(right_sequence(p.word, M))) is Ordering.EQ


def test_Q_identity():
    for word, M in [((1, 1, 0), 1), ((2, 1), 2), ((2,), 3), ((1, 1, 1, 0), 1)]:
        m = len(word)
        tail = (0,) + reflect_word(word, M)
        for n in range(1, 6):
            expected = P.sub(P_polynomial(word, M), P.shift_up(tail, m * (n + 1)))
            assert Q_polynomial(word, M, n) == expected


def test_qn_sequence_structure():
    w = (1, 1, 0)
    p = make_plateau(w, 1)
    qs = [compute_qn(w, 1, n) for n in range(1, 11)]
    qhat = compute_qhat(w, 1, Fraction(1, 10**15))
    assert compare(qs[0], qhat.lo) is Ordering.LT and compare(qs[1], qhat.hi) is Ordering.GT
    for a, b in zip(qs, qs[1:]):
        assert compare(a, b) is Ordering.LT
    assert compare(qs[-1], p.p_R) is Ordering.LT
    assert compare(p.p_L, qs[0]) is Ordering.LT
    for n, q in enumerate(qs, 1):
        assert compare(q, compute_qn_alpha(w, 1, n)) is Ordering.EQ


def test_q1_expansion():
    q1 = compute_qn((1, 1, 0), 1, 1)
    assert alpha(q1, 1).sequence == EPS((), (1, 1, 1, 0, 0, 0), 1)
    q2 = compute_qn((1, 1, 0), 1, 2)
    assert alpha(q2, 1).sequence == EPS((), (1, 1, 1, 0, 0, 1, 0, 0, 0), 1)


def test_qhat_prefix():
    assert format_word(qhat_sequence((1, 1, 0), 1, 12), 1) == "111001000111"


def test_qn_converges_to_pR():
    w = (1, 1, 0)
    pR = compute_pR(w, 1).refine(Fraction(1, 10**30))
    gaps = [pR.lo - compute_qn(w, 1, n).refine(Fraction(1, 10**30)).hi for n in range(1, 9)]
    assert all(g > 0 for g in gaps)
    assert all(b < a for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] < Fraction(1, 10**5)


def test_enumeration_M1():
    ps = enumerate_plateaus(1, 3)
    assert [p.word for p in ps] == [(1, 1, 0)]
    assert ps[0].status is PlateauStatus.CONFIRMED
    words6 = [p.word for p in enumerate_plateaus(1, 6)]
    assert (1, 1, 1, 0, 0, 0) in list(candidate_words(1, 6))
    assert (1, 1, 1, 0, 0, 0) not in words6


def test_enumeration_M2():
    assert (2, 1) in [p.word for p in enumerate_plateaus(2, 2)]


def test_plateaus_disjoint_and_above_kl():
    for M in (1, 2, 3):
        kl = komornik_loreti(M)
        ps = sorted(enumerate_plateaus(M, 5), key=lambda p: p.p_L.refine(Fraction(1, 10**12)).lo)
        for a, b in zip(ps, ps[1:]):
            assert compare(a.p_R, b.p_L) is Ordering.LT
        for p in ps:
            assert compare(p.p_L, kl.hi) is Ordering.GT
            assert compare(p.p_R, M + 1) is Ordering.LT


def test_endpoint_membership():
    for M in (1, 2, 3):
        for p in enumerate_plateaus(M, 3):
            assert in_U(p.p_L, M).verdict is Verdict.NO
            assert in_closure_U(p.p_L, M).verdict is Verdict.YES
            assert in_U(p.p_R, M).verdict is Verdict.YES


def test_locate_plateau():
    lam = alpha_inverse(EPS((1, 1, 1), (0, 0, 1), 1))
    pl, pos = locate_plateau(lam, 1, 4)
    assert pl.word == (1, 1, 0) and pos is Position.RIGHT_ENDPOINT
    pl, pos = locate_plateau(Fraction(185, 100), 1, 4)
    assert pl.word == (1, 1, 0) and pos is Position.INTERIOR
    pl, pos = locate_plateau(compute_pL((1, 1, 0), 1), 1, 4)
    assert pos is Position.LEFT_ENDPOINT
    assert locate_plateau(2, 1, 4) is None
    assert locate_plateau(Fraction(179, 100), 1, 4) is None


def test_transversality_small():
    r = verify_transversality((1, 1, 0), 1, 20)
    assert r.ok and r.derivative_margin > 0
    margins = [x.margin for x in r.margins]
    assert all(m > 0 for m in margins)
    # margins shrink roughly geometrically with ratio 1/2
    for a, b in zip(margins[2:], margins[3:]):
        assert Fraction(1, 4) < b / a < Fraction(3, 4)
    assert verify_transversality((2,), 3, 10).ok


def test_plateau_record():
    rec = make_plateau((1, 1, 0), 1).to_record(6)
    assert rec["word"] == "110" and rec["m"] == 3 and rec["status"] == "CONFIRMED"
    assert rec["p_R"]["poly"] == list(LAMBDA_STAR_POLY)
    assert rec["p_L"]["lo"] <= "1.839287" <= rec["p_L"]["hi"]
