"""``skb``: build and verify bases, inspect the cost function and Lambda sets.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
3 a valuation profile could not be certified at the chosen truncation.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from skbasis.builder import BasisBuilder, BasisDescriptor, lambda_cardinality, lambda_set
from skbasis.cost import cost, legendre_phi0_star, pairing_bracket, phi0
from skbasis.sections import (
    CertificationError,
    certified_valuation_profile,
    chart_expand,
    default_truncation,
    format_rational,
)
from skbasis.series import PLFunction
from skbasis.verifier import verify_theorem

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CERT = 0, 1, 2, 3
MARGIN_ENV = "SKB_TRUNC_MARGIN"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1: {text!r}")
    return n


def env_margin() -> int:
    raw = os.environ.get(MARGIN_ENV)
    if raw is None or raw == "":
        return 0
    try:
        margin = int(raw)
    except ValueError:
        raise UsageError(f"{MARGIN_ENV} must be a nonnegative integer, got {raw!r}") from None
    if margin < 0:
        raise UsageError(f"{MARGIN_ENV} must be a nonnegative integer, got {raw!r}")
    return margin


def margin_of(args) -> int:
    return env_margin() if args.truncation_margin is None else args.truncation_margin


def format_pl(f: PLFunction) -> str:
    fr = ", ".join
    return (
        f"breakpoints {fr(map(format_rational, f.breakpoints))}; "
        f"values {fr(map(format_rational, f.values))}; "
        f"slopes {fr(map(format_rational, f.slopes))}"
    )


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_cost(args) -> int:
    c = cost(args.t, args.tv)
    print(f"cost {format_rational(c.value)}  (k={c.k}, l={c.l}, m={c.m})")
    return EXIT_OK


def cmd_phi0(args) -> int:
    print(format_rational(phi0(args.t)))
    return EXIT_OK


def cmd_legendre(args) -> int:
    print(format_rational(legendre_phi0_star(args.tv)))
    return EXIT_OK


def cmd_pairing(args) -> int:
    print(format_rational(pairing_bracket(args.t, args.tv)))
    return EXIT_OK


def cmd_lambda(args) -> int:
    a, b = args.a, args.b
    if not a > b >= 1:
        raise UsageError(f"lambda needs a > b >= 1, got a={a}, b={b}")
    entries = lambda_set(a, b)
    listing = "[" + ", ".join(f"({e.m},{e.s})" for e in entries) + "]"
    print(listing + ("  (a multiple of b)" if not entries else ""))
    for e in entries:
        print(f"  m={e.m} s={e.s} d={e.d}")
    k = lambda_cardinality(a, b)
    status = "ok" if k == len(entries) else "MISMATCH"
    print(f"cardinality {len(entries)}, closed form {k}: {status}")
    return EXIT_OK if status == "ok" else EXIT_FAIL


def cmd_build(args) -> int:
    builder = BasisBuilder()
    basis = builder.basis(args.degree)
    _write(basis.dumps(), args.out)
    return EXIT_OK


def _section_arg(args):
    if args.a < 0 or args.b < 0 or args.a + args.b == 0:
        raise UsageError(f"need a, b >= 0 with a + b > 0, got a={args.a}, b={args.b}")
    return BasisBuilder().S(args.a, args.b)


def cmd_expand(args) -> int:
    s = _section_arg(args)
    D = default_truncation(s, margin_of(args)) if args.D is None else args.D
    if D < 0:
        raise UsageError("truncation degree must be nonnegative")
    print(chart_expand(s, args.edge, D))
    return EXIT_OK


def cmd_val(args) -> int:
    s = _section_arg(args)
    prof = certified_valuation_profile(s, args.edge, D=args.D, margin=margin_of(args))
    cert = prof.certificate
    print(format_pl(prof.pl))
    detail = f" at D={cert.D}" if cert.D is not None else ""
    print(f"certificate: {cert.route}{detail}, floors {cert.floors}, vertices {list(cert.vertices)}")
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.file:
        try:
            basis = BasisDescriptor.from_json(json.loads(Path(args.file).read_text()))
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"cannot read basis file {args.file}: {exc}") from exc
    else:
        basis = BasisBuilder().basis(args.degree)
    cert = verify_theorem(basis, margin=margin_of(args))
    _write(cert.dumps(), args.out)
    if cert.ok:
        print(f"degree {basis.degree}: all {3 * basis.degree} sections verified", file=sys.stderr)
        return EXIT_OK
    for ce in cert.counterexamples:
        lo, hi = ce.interval
        print(
            f"counterexample: m=(edge {ce.point.edge}, a={ce.point.a}, b={ce.point.b}) edge {ce.edge} "
            f"r in [{format_rational(lo)}, {format_rational(hi)}]: {ce.reason}",
            file=sys.stderr,
        )
    if not cert.independence_ok or not cert.slope_formula_ok:
        print("slope criterion failed", file=sys.stderr)
    return EXIT_FAIL


def _grid(lo: Fraction, hi: Fraction, step: Fraction) -> list[Fraction]:
    if step <= 0 or hi < lo:
        raise UsageError("grid needs lo <= hi and a positive step")
    n = int((hi - lo) / step)
    return [lo + i * step for i in range(n + 1)]


def cmd_sample_cost(args) -> int:
    ts = _grid(args.t_min, args.t_max, args.step)
    tvs = _grid(args.tv_min, args.tv_max, args.step)
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "tv", "cost"])
        for t in ts:
            for tv in tvs:
                w.writerow([format_rational(t), format_rational(tv), format_rational(cost(t, tv).value)])
    finally:
        if fh is not sys.stdout:
            fh.close()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="skb", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def margin_flag(sp):
        sp.add_argument(
            "--truncation-margin",
            type=int,
            default=None,
            help=f"added to the default truncation 4*degree (default: ${MARGIN_ENV} or 0)",
        )

    sp = sub.add_parser("cost", help="closed-form cost with its floor breakdown")
    sp.add_argument("--t", type=rational, required=True)
    sp.add_argument("--tv", type=rational, required=True)
    sp.set_defaults(func=cmd_cost)

    sp = sub.add_parser("phi0", help="the convex section on the skeleton cover")
    sp.add_argument("--t", type=rational, required=True)
    sp.set_defaults(func=cmd_phi0)

    sp = sub.add_parser("legendre", help="Legendre transform of phi0")
    sp.add_argument("--tv", type=rational, required=True)
    sp.set_defaults(func=cmd_legendre)

    sp = sub.add_parser("pairing", help="the orbit-sup bracket term")
    sp.add_argument("--t", type=rational, required=True)
    sp.add_argument("--tv", type=rational, required=True)
    sp.set_defaults(func=cmd_pairing)

    sp = sub.add_parser("lambda", help="list the bad-term set for a > b >= 1")
    sp.add_argument("--a", type=int, required=True)
    sp.add_argument("--b", type=int, required=True)
    sp.set_defaults(func=cmd_lambda)

    sp = sub.add_parser("build", help="write the basis of a given degree as JSON")
    sp.add_argument("--degree", type=positive_int, required=True)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_build)

    for name, func, what in (
        ("expand", cmd_expand, "truncated chart expansion of S(a, b)"),
        ("val", cmd_val, "certified valuation profile of S(a, b) on an edge"),
    ):
        sp = sub.add_parser(name, help=what)
        sp.add_argument("--a", type=int, required=True)
        sp.add_argument("--b", type=int, required=True)
        sp.add_argument("--edge", type=int, choices=(0, 1, 2), required=True)
        sp.add_argument("--D", type=int, default=None, help="truncation degree (overrides the margin)")
        margin_flag(sp)
        sp.set_defaults(func=func)

    sp = sub.add_parser("verify", help="check a basis against the cost function")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--degree", type=positive_int)
    src.add_argument("--file")
    sp.add_argument("--out", help="certificate JSON path (default: stdout)")
    margin_flag(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("sample-cost", help="CSV of cost over a rational grid")
    sp.add_argument("--t-min", type=rational, default=Fraction(-6))
    sp.add_argument("--t-max", type=rational, default=Fraction(6))
    sp.add_argument("--tv-min", type=rational, default=Fraction(-18))
    sp.add_argument("--tv-max", type=rational, default=Fraction(18))
    sp.add_argument("--step", type=rational, default=Fraction(1, 7))
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_sample_cost)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"skb: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CertificationError as exc:
        hint = f"; need D >= {exc.required_D}" if exc.required_D is not None else ""
        print(f"skb: certification failed: {exc}{hint}", file=sys.stderr)
        return EXIT_CERT


if __name__ == "__main__":
    sys.exit(main())
