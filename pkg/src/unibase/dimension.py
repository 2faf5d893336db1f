"""Hausdorff dimensions of univoque sets and classification of bases with
respect to the bifurcation sets B, B^L and B^R."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebraic import AlgebraicReal, Enclosure, compare, log_enclosure, log_ratio
from .automata import EntropyResult, build_Vq_automaton, entropy_of_automaton, entropy_of_base, phi_N
from .expansions import (
    MembershipVerdict,
    Verdict,
    alpha as alpha_expansion,
    as_base,
    closure_check,
    univoque_check,
    expand,
    ExpansionContext,
)
from .plateaus import (
    Plateau,
    Position,
    enumerate_plateaus,
    komornik_loreti,
    locate_plateau,
    make_plateau,
    q_star,
)
from .words import EPS, Ordering, format_word, lex_compare, reflect_word, word_plus

DEFAULT_EPS = Fraction(1, 10**10)


@dataclass(frozen=True)
class LogRatio:
    """log(num) / (factor * log(den))."""

    num: AlgebraicReal
    den: AlgebraicReal
    factor: int = 1

    def __str__(self) -> str:
        f = f"{self.factor}*" if self.factor != 1 else ""
        return f"log({self.num})/({f}log({self.den}))"


@dataclass(frozen=True)
class DimensionValue:
    value: Enclosure
    exact_form: LogRatio | None = None

    def rounded(self, digits: int = 4) -> str | None:
        return self.value.rounded(digits)

    def to_record(self, digits: int = 10) -> dict:
        lo, hi = self.value.decimal(digits)
        rec = {"lo": lo, "hi": hi}
        if self.exact_form is not None:
            rec["exact"] = {
                "log_of": self.exact_form.num.to_string(),
                "over_log_of": self.exact_form.den.to_string(),
                "factor": self.exact_form.factor,
            }
        return rec


def _dimension(num, den, factor: int, eps) -> DimensionValue:
    num, den = as_base(num), as_base(den)
    return DimensionValue(log_ratio(num, den, eps, factor), LogRatio(num, den, factor))


def dim_univoque_set(q, M: int, symbolic: bool = False, eps=DEFAULT_EPS) -> DimensionValue:
    """h(U_q)/log q, or h(U_q)/log(M+1) for the symbolic space."""
    q = as_base(q)
    H = entropy_of_base(q, M, eps=eps / 4)
    den = AlgebraicReal.from_rational(M + 1) if symbolic else q
    return _entropy_over_log(H, den, eps)


def _entropy_over_log(H: EntropyResult, den: AlgebraicReal, eps) -> DimensionValue:
    if H.value.hi == 0:
        return DimensionValue(Enclosure(0, 0))
    if H.exact is not None:
        return _dimension(H.exact[0], den, H.exact[1], eps)
    return DimensionValue(H.value / log_enclosure(den, eps / 8))


def dim_U_in_plateau(plateau: Plateau, eps=DEFAULT_EPS) -> DimensionValue:
    """dim(U cap [p_L, p_R]) = log 2 / (m log p_R)."""
    return _dimension(2, plateau.p_R, plateau.m, eps)


@dataclass
class UMinusBResult:
    M: int
    m_max: int
    value: DimensionValue
    witness: Plateau
    partial: bool
    closed_form: DimensionValue | None
    dominations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(ok for _, ok in self.dominations)

    def to_record(self, digits: int = 4) -> dict:
        return {
            "M": self.M,
            "m_max": self.m_max,
            "dimension": self.value.rounded(digits),
            "enclosure": self.value.to_record(12),
            "witness": self.witness.word_text,
            "witness_m": self.witness.m,
            "partial": self.partial,
            "closed_form": self.closed_form.rounded(digits) if self.closed_form else None,
            "dominations": [{"check": n, "ok": ok} for n, ok in self.dominations],
        }


_WITNESS_PERIOD = {1: 3, 2: 2}


def dim_U_minus_B(M: int, m_max: int, eps=DEFAULT_EPS) -> UMinusBResult:
    """Supremum of dim(U cap plateau) over plateaus of period <= m_max."""
    plateaus = enumerate_plateaus(M, m_max)
    if not plateaus:
        raise ValueError(f"no plateaus of period <= {m_max} for M={M}")
    # the supremum minimises m * log p_R
    keyed = [(log_enclosure(p.p_R, eps / 16) * p.m, p) for p in plateaus]
    best_enc, best = min(keyed, key=lambda kp: kp[0].lo)
    for enc, p in keyed:
        if p is not best and not enc.lo > best_enc.hi:
            # near tie: decide exactly on p_R^m
            if compare(_power(p.p_R, p.m), _power(best.p_R, best.m)) is Ordering.LT:
                best_enc, best = enc, p
    value = dim_U_in_plateau(best, eps)
    partial = m_max < _WITNESS_PERIOD.get(M, 1)
    closed = _dimension(2, q_star(M), 1, eps) if M >= 3 else None
    dominations = _domination_checks(M, plateaus, best, eps)
    if closed is not None:
        agree = closed.value.lo <= value.value.hi and value.value.lo <= closed.value.hi
        dominations.append(("supremum equals log2/log q_star(M)", agree))
    return UMinusBResult(M, m_max, value, best, partial, closed, dominations)


def _power(x: AlgebraicReal, m: int) -> AlgebraicReal:
    """x^m as an algebraic number (via the polynomial in y = x^m)."""
    if m == 1:
        return x
    from sympy import Poly as SymPoly, resultant, symbols

    from . import polynomials as P
    from .algebraic import isolate_roots

    X, Y = symbols("X Y")
    f = SymPoly(list(reversed(x.poly)), X).as_expr()
    R = SymPoly(resultant(f, Y - X**m, X), Y)
    poly = P.trim(int(c) for c in reversed(R.all_coeffs()))
    w = Fraction(1, 10**6)
    while True:
        e = x.refine(w)
        roots = isolate_roots(poly, (e.lo**m, e.hi**m))
        if len(roots) == 1:
            return roots[0]
        w /= 2**16


def _domination_checks(M: int, plateaus, best: Plateau, eps) -> list:
    kl = komornik_loreti(M, Fraction(1, 10**12))
    log_kl_lo = log_enclosure(kl.lo, eps).lo
    top = dim_U_in_plateau(best, eps).value
    out = []
    k0 = {1: 4, 2: 3}.get(M, 2)
    # every plateau of period >= k0 lies above q_KL, so its dimension is below
    # log 2 / (k0 log q_KL), which must undercut the witnessing value
    bound = log_enclosure(2, eps).hi / (k0 * log_kl_lo)
    out.append((f"log2/({k0} log q_KL) < supremum", bound < top.lo))
    for p in plateaus:
        if p.m >= k0:
            v = dim_U_in_plateau(p, eps).value
            if not v.hi < bound:
                out.append((f"plateau {p.word_text} below log2/({k0} log q_KL)", False))
    small = [p for p in plateaus if p.m < k0 and p is not best]
    for p in small:
        v = dim_U_in_plateau(p, eps).value
        if not v.hi <= top.lo:
            out.append((f"plateau {p.word_text} does not exceed the witness", False))
    return out


@dataclass(frozen=True)
class DimensionBounds:
    upper: DimensionValue
    entropy: EntropyResult
    exact: bool
    N: int | None


def dim_V_difference_bounds(plateau: Plateau, p, q, eps=DEFAULT_EPS) -> DimensionBounds:
    """Bound for dim(V_q minus V_p) in the symbolic space (base M+1 logs)."""
    p, q = as_base(p), as_base(q)
    M, m = plateau.M, plateau.m
    if compare(p, plateau.p_L) is Ordering.LT or compare(q, plateau.p_R) is Ordering.GT:
        raise ValueError("bases outside the plateau")
    if compare(p, q) is not Ordering.LT:
        raise ValueError("need p < q")
    base = AlgebraicReal.from_rational(M + 1)
    two = AlgebraicReal.from_rational(2)
    if compare(q, plateau.p_R) is Ordering.EQ:
        H = EntropyResult(log_enclosure(two, eps) * Fraction(1, m), (two, m))
        return DimensionBounds(_dimension(two, base, m, eps), H, True, None)
    a = alpha_expansion(q, M, 4096).known()
    wp = word_plus(plateau.word, M)
    wbar = reflect_word(plateau.word, M)
    N = 1
    while True:
        bound = EPS(wp + wbar * N, (0,), M)
        n = len(bound.preperiod)
        pre = a.prefix(n + 1) if isinstance(a, EPS) else a[: n + 1]
        if tuple(pre[:n]) < bound.preperiod or (isinstance(a, EPS) and lex_compare(a, bound) is Ordering.LT):
            break
        N += 1
        if N > 10_000:
            raise RuntimeError("run length bound not found")
    N = max(N, 2)
    phi = phi_N(N)
    H = EntropyResult(log_enclosure(phi, eps) * Fraction(1, m), (phi, m))
    return DimensionBounds(_dimension(phi, base, m, eps), H, False, N)


# ---------------------------------------------------------------------------
# Classification


@dataclass
class ClassificationReport:
    q: str
    M: int
    m_max: int
    in_U: MembershipVerdict
    in_closure_U: MembershipVerdict
    in_B: MembershipVerdict
    in_B_L: MembershipVerdict
    in_B_R: MembershipVerdict
    plateau: tuple | None
    H_q: EntropyResult | None
    dim_Uq: DimensionValue | None
    caveat: str | None = None

    def to_record(self, digits: int = 10) -> dict:
        pl = None
        if self.plateau is not None:
            p, pos = self.plateau
            pl = {"word": p.word_text, "m": p.m, "position": pos.value}
        return {
            "q": self.q,
            "M": self.M,
            "m_max": self.m_max,
            "in_U": self.in_U.to_record(),
            "in_closure_U": self.in_closure_U.to_record(),
            "in_B": self.in_B.to_record(),
            "in_B_L": self.in_B_L.to_record(),
            "in_B_R": self.in_B_R.to_record(),
            "plateau": pl,
            "H_q": self.H_q.to_record() if self.H_q else None,
            "dim_Uq": self.dim_Uq.to_record(digits) if self.dim_Uq else None,
            "caveat": self.caveat,
        }


def _v(verdict: Verdict, depth: int = 0, witness=None) -> MembershipVerdict:
    return MembershipVerdict(verdict, depth, witness)


YES, NO, UNKNOWN = Verdict.YES, Verdict.NO, Verdict.UNKNOWN


def classify_base(q, M: int, m_max: int = 4, depth: int = 512, with_entropy: bool = True,
                  eps=DEFAULT_EPS) -> ClassificationReport:
    if isinstance(q, Enclosure) or q == "kl":
        return _classify_kl(M, m_max)
    q = as_base(q)
    label = q.to_string()
    ctx = ExpansionContext(M, q)
    kl = komornik_loreti(M, Fraction(1, 10**12))
    w = Fraction(1, 10**12)
    while kl.lo <= q.hi and q.lo <= kl.hi and not (compare(q, kl.lo) is Ordering.LT or compare(q, kl.hi) is Ordering.GT):
        w /= 10**6
        kl = komornik_loreti(M, w)
    if compare(q, kl.lo) is Ordering.LT:
        zero = EntropyResult(Enclosure(0, 0))
        a = expand(ctx, 1, max_digits=depth).known()
        b = expand(ctx, 1, greedy=True, max_digits=depth).known()
        return ClassificationReport(
            label, M, m_max, univoque_check(b, a, M), closure_check(a, M),
            _v(NO), _v(NO), _v(NO), None,
            zero if with_entropy else None,
            DimensionValue(Enclosure(0, 0)) if with_entropy else None,
            "q lies below the Komornik-Loreti constant",
        )
    a = expand(ctx, 1, max_digits=depth).known()
    b = expand(ctx, 1, greedy=True, max_digits=depth).known()
    inU = univoque_check(b, a, M)
    inCl = closure_check(a, M)
    located = None if compare(q, M + 1) is Ordering.EQ else locate_plateau(q, M, m_max)
    caveat = None
    if compare(q, M + 1) is Ordering.EQ:
        B, BL, BR = YES, YES, YES
    elif located is not None:
        pos = located[1]
        B = NO
        BL = YES if pos is Position.LEFT_ENDPOINT else NO
        BR = YES if pos is Position.RIGHT_ENDPOINT else NO
    elif inCl.verdict is NO:
        # outside the closure of U, hence inside some plateau
        B, BL, BR = NO, NO, NO
        caveat = f"inside a plateau of period > {m_max}"
    elif inU.verdict is NO:
        # a point of closure(U) minus U can only be a left endpoint
        B, BL, BR = NO, UNKNOWN, NO
        caveat = f"not in U; no plateau of period <= {m_max} has q as left endpoint"
    elif inU.verdict is YES:
        B, BL, BR = YES, YES, YES
        caveat = f"no plateau of period <= {m_max} contains q"
    else:
        B, BL, BR = UNKNOWN, UNKNOWN, UNKNOWN
        caveat = f"membership undecided at depth {depth}"
    H = dim = None
    if with_entropy:
        if located is not None:
            H = entropy_of_automaton(build_Vq_automaton(located[0].right_alpha), eps=eps)
        else:
            H = entropy_of_base(q, M, eps=eps)
        dim = _entropy_over_log(H, q, eps)
    return ClassificationReport(label, M, m_max, inU, inCl, _v(B), _v(BL), _v(BR), located, H, dim, caveat)


def _classify_kl(M: int, m_max: int) -> ClassificationReport:
    kl = komornik_loreti(M, Fraction(1, 10**12))
    return ClassificationReport(
        f"kl:[{kl.lo},{kl.hi}]", M, m_max,
        _v(UNKNOWN, 0), _v(UNKNOWN, 0),
        _v(NO), _v(NO), _v(YES), None,
        EntropyResult(Enclosure(0, 0)), DimensionValue(Enclosure(0, 0)),
        "alpha(q_KL) is not eventually periodic; U membership reported at finite depth",
    )
