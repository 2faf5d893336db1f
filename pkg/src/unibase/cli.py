"""Command-line front end.

Every command writes one JSON object per line to stdout; ``--format table``
switches to a human-readable rendering.  Exit codes: 0 success, 1 failed
verification, 2 invalid input, 3 UNKNOWN verdict under ``--strict``.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import polynomials as P
from .algebraic import AlgebraicReal, isolate_roots
from .dimension import classify_base, dim_U_minus_B
from .expansions import ExpansionContext, Verdict, as_base, enclosure_expansion, expand
from .plateaus import enumerate_plateaus, komornik_loreti, verify_transversality
from .verification import entropy_oracle, invariants
from .words import format_word

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_UNKNOWN = 0, 1, 2, 3
DEFAULT_PRECISION = "1e-8"


class InputError(ValueError):
    pass


def parse_precision(text: str) -> Fraction:
    try:
        eps = Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise InputError(f"invalid precision {text!r}") from None
    if not 0 < eps < 1:
        raise InputError("precision must lie in (0, 1)")
    return eps


def digits_for(eps: Fraction) -> int:
    return max(1, math.ceil(-math.log10(eps)))


def parse_base(text: str, M: int):
    """Base grammar: ``poly:c0,c1,...[;interval:lo,hi]``, ``dec:<decimal>``,
    ``kl``, or a bare rational such as ``2`` or ``37/20``."""
    text = text.strip()
    if text == "kl":
        return "kl"
    try:
        if text.startswith("poly:"):
            if ";interval:" in text:
                q = AlgebraicReal.parse(text)
            else:
                poly = P.parse_poly(text[len("poly:"):])
                roots = [r for r in isolate_roots(poly, (1, M + 1)) if r.hi > 1 or r.lo > 1]
                roots = [r for r in roots if not (r.lo == r.hi == 1)]
                if len(roots) != 1:
                    raise InputError(
                        f"polynomial has {len(roots)} roots in (1, {M + 1}]; add ;interval:lo,hi"
                    )
                q = roots[0]
        elif text.startswith("dec:"):
            if not re.fullmatch(r"[0-9]+(\.[0-9]+)?", text[4:]):
                raise InputError(f"invalid decimal {text[4:]!r}")
            q = as_base(Fraction(text[4:]))
        else:
            q = as_base(Fraction(text))
        ExpansionContext(M, q)
    except InputError:
        raise
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"invalid base {text!r}: {exc}") from None
    return q


def emit(records, fmt: str, render=None, out=None) -> None:
    out = out or sys.stdout
    for rec in records:
        if fmt == "table" and render is not None:
            print(render(rec), file=out)
        else:
            print(json.dumps(rec, sort_keys=False), file=out)


# ---------------------------------------------------------------------------
# commands


def cmd_expand(args) -> int:
    M = args.M
    q = parse_base(args.base, M)
    greedy = args.mode == "greedy"
    try:
        x = Fraction(args.x)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"invalid x {args.x!r}") from None
    rec = {"M": M, "base": args.base, "x": str(x), "mode": args.mode}
    if q == "kl":
        eps = Fraction(1, 10**6)
        while True:
            enc = komornik_loreti(M, eps)
            digits = enclosure_expansion(enc, M, args.digits, greedy, x)
            if len(digits) >= args.digits:
                break
            eps /= 10**4
        rec.update(digits=format_word(digits, M), periodic=None)
    else:
        try:
            e = expand(ExpansionContext(M, q), x, greedy=greedy, max_digits=max(args.digits, 1) * 8)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        rec.update(digits=format_word(e.prefix(args.digits) if e.is_periodic else e.digits[: args.digits], M),
                   periodic=str(e.sequence) if e.sequence is not None else None)
    emit([rec], args.format, lambda r: r["digits"] + (f"  {r['periodic']}" if r["periodic"] else ""))
    return EXIT_OK


def cmd_plateaus(args) -> int:
    digits = digits_for(args.precision)
    plats = enumerate_plateaus(args.M, args.max_period)
    recs = [p.to_record(digits) for p in plats]

    def render(r):
        return f"{r['word']:>12}  m={r['m']}  {r['status']}  [{r['p_L']['lo']}, {r['p_R']['hi']}]"

    emit(recs, args.format, render)
    return EXIT_OK


def cmd_classify(args) -> int:
    q = parse_base(args.base, args.M)
    rep = classify_base(q, args.M, args.max_period, depth=args.depth, with_entropy=not args.no_entropy,
                        eps=args.precision)
    rec = rep.to_record(digits_for(args.precision))
    if q != "kl":
        rec["q"] = args.base

    def render(r):
        lines = [f"q = {r['q']}  (M={r['M']}, plateaus up to period {r['m_max']})"]
        for k in ("in_U", "in_closure_U", "in_B", "in_B_L", "in_B_R"):
            lines.append(f"  {k:<13}{r[k]['verdict']}")
        if r["plateau"]:
            lines.append(f"  plateau      {r['plateau']['word']} {r['plateau']['position']}")
        if r["dim_Uq"]:
            lines.append(f"  dim U_q      [{r['dim_Uq']['lo']}, {r['dim_Uq']['hi']}]")
        if r["caveat"]:
            lines.append(f"  note: {r['caveat']}")
        return "\n".join(lines)

    emit([rec], args.format, render)
    verdicts = (rep.in_U, rep.in_closure_U, rep.in_B, rep.in_B_L, rep.in_B_R)
    if args.strict and any(v.verdict is Verdict.UNKNOWN for v in verdicts):
        return EXIT_UNKNOWN
    return EXIT_OK


def parse_range(text: str) -> range:
    m = re.fullmatch(r"\s*(\d+)\s*(?:\.\.\s*(\d+))?\s*", text)
    if not m:
        raise InputError(f"invalid range {text!r}; expected a..b")
    a = int(m.group(1))
    b = int(m.group(2)) if m.group(2) else a
    if a < 1 or b < a:
        raise InputError(f"invalid range {text!r}")
    return range(a, b + 1)


def _table1_row(job):
    M, m_max = job
    return dim_U_minus_B(M, m_max).to_record(4)


def cmd_table1(args) -> int:
    Ms = parse_range(args.M_range)
    jobs = [(M, args.max_period) for M in Ms]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            recs = list(pool.map(_table1_row, jobs))
    else:
        recs = [_table1_row(j) for j in jobs]
    if args.format == "table":
        print("M     " + " ".join(f"{r['M']:>7}" for r in recs))
        print("dim   " + " ".join(f"{r['dimension']:>7}" for r in recs))
        print("word  " + " ".join(f"{r['witness']:>7}" for r in recs))
    else:
        emit(recs, "json")
    return EXIT_OK if all(all(d["ok"] for d in r["dominations"]) for r in recs) else EXIT_FAIL


def cmd_verify(args) -> int:
    if args.suite == "transversality":
        recs = []
        Ms = [args.M] if args.M else [1, 2, 3, 4]
        for M in Ms:
            for p in enumerate_plateaus(M, args.max_period):
                recs.append(verify_transversality(p.word, M, args.max_n).to_record())
        ok = all(r["ok"] for r in recs)

        def render(r):
            worst = min((i["margin"] for i in r["inequalities"]), default=float("nan"))
            return f"M={r['M']} {r['word']:>10}  {'PASS' if r['ok'] else 'FAIL'}  min margin {worst:.6f}"
    elif args.suite == "entropy-oracle":
        recs = [entropy_oracle(args.M or 1, args.seed, args.samples, args.max_length).to_record()]
        ok = recs[0]["ok"]
    else:
        recs = [r.to_record() for r in invariants(args.M or 1, args.seed)]
        ok = all(r["ok"] for r in recs)
    if args.suite != "transversality":
        def render(r):
            return f"{r['suite']:<16}{'PASS' if r['ok'] else 'FAIL'}  cases={r['cases']} skipped={r['skipped']}"
    emit(recs, args.format, render)
    if args.format == "table":
        print("PASS" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "table"], default="json")
    common.add_argument("--precision", default=None,
                        help="enclosure width for numeric output (default $UNIBASE_PRECISION or 1e-8)")

    parser = argparse.ArgumentParser(prog="unibase", description="Unique expansions in non-integer bases.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", parents=[common], help="greedy or quasi-greedy digits of x in base q")
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--base", required=True)
    p.add_argument("--x", default="1")
    p.add_argument("--mode", choices=["quasi-greedy", "greedy"], default="quasi-greedy")
    p.add_argument("--digits", type=int, default=16)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("plateaus", parents=[common], help="catalog of entropy plateaus")
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--max-period", type=int, default=4)
    p.set_defaults(func=cmd_plateaus)

    p = sub.add_parser("classify", parents=[common], help="membership of q in U, B, B^L, B^R")
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--base", required=True)
    p.add_argument("--max-period", type=int, default=4)
    p.add_argument("--depth", type=int, default=512)
    p.add_argument("--strict", action="store_true", help="exit 3 on any UNKNOWN verdict")
    p.add_argument("--no-entropy", action="store_true")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("table1", parents=[common], help="dim(U minus B) for a range of M")
    p.add_argument("--M-range", default="1..8")
    p.add_argument("--max-period", type=int, default=4)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("verify", parents=[common], help="consistency suites")
    p.add_argument("suite", choices=["transversality", "entropy-oracle", "invariants"])
    p.add_argument("--M", type=int, default=None)
    p.add_argument("--max-period", type=int, default=5)
    p.add_argument("--max-n", type=int, default=20)
    p.add_argument("--max-length", type=int, default=16)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        args.precision = parse_precision(args.precision or os.environ.get("UNIBASE_PRECISION", DEFAULT_PRECISION))
        M = getattr(args, "M", None)
        if M is not None and M < 1:
            raise InputError("M must be a positive integer")
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
