"""Command-line frontend.

Exit codes: 0 success (or the inequality holds), 2 a violation was found,
1 bad usage or bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from decimal import ROUND_HALF_EVEN, Context, Decimal

from . import continuous, discrete, harness, transference
from .exact import SurdSum, exact_json, exact_text, mpq, rat, rat_str
from .functions import BVSequence, ClassViolation, MalformedInput, StepFunction, from_json, total_var

EXIT_OK, EXIT_INPUT, EXIT_VIOLATION = 0, 1, 2

_DECIMAL = Context(prec=20, rounding=ROUND_HALF_EVEN)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _approx(v) -> str:
    if isinstance(v, SurdSum):
        lo, hi = v.enclosure(96)
        v = (lo + hi) / 2
    elif not hasattr(v, "numerator"):
        lo, hi = v.enclosure(96)
        v = (lo + hi) / 2
    q = rat(v)
    return str(_DECIMAL.divide(Decimal(int(q.numerator)), Decimal(int(q.denominator))))


def _load(args):
    if args.inline is not None:
        text = args.inline
    elif args.file is not None:
        try:
            with open(args.file) as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {args.file}: {exc.strerror}") from None
    else:
        raise UsageError("an instance is required: pass --file PATH or --inline JSON")
    return from_json(text)


def _emit(obj):
    print(json.dumps(obj, sort_keys=True))


def _add_instance(p):
    src = p.add_mutually_exclusive_group()
    src.add_argument("--file", help="instance JSON file")
    src.add_argument("--inline", help="instance JSON text")


def _add_format(p, choices=("text", "json"), default="text"):
    p.add_argument("--format", choices=choices, default=default)


def cmd_eval(args) -> int:
    f = _load(args)
    if isinstance(f, BVSequence):
        try:
            n = int(args.x)
        except ValueError:
            raise UsageError("--x must be an integer for a sequence instance") from None
        if args.side or args.restricted is not None:
            raise UsageError("--side and --restricted apply to step functions only")
        value = discrete.m_discrete_at(f, n, args.variant)
    else:
        x = _parse_rat(args.x, "--x")
        if args.side:
            if args.variant != "centered":
                raise UsageError("--side is available for the centered operator only")
            value = continuous.m_one_sided(f, x, args.side)
        elif args.restricted is not None:
            value = continuous.m_restricted_at(f, x, args.restricted)
        else:
            value = continuous.m_at(f, x, args.variant)
    if args.format == "json":
        _emit({"x": args.x, "variant": args.variant, "value": exact_json(value)})
    else:
        print(exact_text(value))
    return EXIT_OK


def _parse_rat(text, flag):
    try:
        return rat(text)
    except (ValueError, ZeroDivisionError, TypeError):
        raise UsageError(f"{flag}: cannot parse {text!r} as a rational") from None


def cmd_var(args) -> int:
    v = total_var(_load(args))
    if args.format == "json":
        _emit({"var": rat_str(v)})
    else:
        print(rat_str(v))
    return EXIT_OK


def cmd_maxvar(args) -> int:
    f = _load(args)
    if isinstance(f, BVSequence):
        v = discrete.var_of_m_discrete(f, args.variant)
    else:
        if args.variant != "centered":
            raise UsageError("variation of the maximal function on R is available for the centered operator only")
        v = continuous.var_of_m(f)
    mode = "certified" if isinstance(v, SurdSum) else "exact"
    if args.format == "json":
        _emit({"var_M": exact_json(v), "mode": mode, "approx": _approx(v)})
    elif mode == "exact":
        print(f"{rat_str(v)} (exact)")
    else:
        print(f"{exact_text(v)} (certified, approx {_approx(v)})")
    return EXIT_OK


def cmd_check(args) -> int:
    f = _load(args)
    rep = harness.check_theorem1(f) if args.theorem1 else harness.check_conjecture(f)
    if args.format == "json":
        _emit(rep.to_json())
    else:
        print(rep.text())
    if rep.verdict == "violated":
        print(json.dumps(rep.to_json(), sort_keys=True), file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_search(args) -> int:
    try:
        cfg = harness.SearchConfig(
            seed=args.seed,
            count=args.count,
            cls=args.cls,
            domain=args.domain,
            k_min=args.k_min,
            k_max=args.k_max,
            value_bound=args.value_bound,
            breakpoint_bound=args.breakpoint_bound,
            shrink=not args.no_shrink,
            workers=args.workers,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    res = harness.search(cfg)
    if args.report:
        with open(args.report, "w") as fh:
            for i, r in enumerate(res.reports):
                fh.write(json.dumps({"index": i, **r.to_json()}, sort_keys=True) + "\n")
    if args.format == "json":
        print(res.summary_json())
    else:
        print(res.text())
    return EXIT_VIOLATION if res.violations else EXIT_OK


def cmd_transfer(args) -> int:
    f = _load(args)
    if isinstance(f, BVSequence):
        f = transference.extend(f)
    if args.N < args.resolution:
        raise UsageError("--N must be at least --resolution")
    rep = transference.transfer_audit(f, args.resolution, args.N)
    if args.format == "json":
        _emit(rep.to_json())
    else:
        for name, ok in rep.checks.items():
            print(f"[{'ok' if ok else 'FAIL'}] {name}")
        print(f"pointwise failures: {len(rep.pointwise_failures)}")
    return EXIT_OK if rep.holds else EXIT_VIOLATION


def cmd_reproduce(args) -> int:
    rep = harness.reproduce_paper(C=_parse_rat(args.C, "--C"))
    if args.format == "json":
        _emit(rep.to_json())
    else:
        for line in rep.lines:
            print(line.text())
        print("all reproduced" if rep.ok else "MISMATCHES FOUND")
    return EXIT_OK if rep.ok else EXIT_INPUT


def cmd_sample_curve(args) -> int:
    f = _load(args)
    if isinstance(f, BVSequence):
        f = transference.extend(f)
    lo = _parse_rat(args.lo, "--lo") if args.lo is not None else _floor(f.breakpoints[0]) - 2
    hi = _parse_rat(args.hi, "--hi") if args.hi is not None else -_floor(-f.breakpoints[-1]) + 2
    if hi < lo:
        raise UsageError("--hi must not be below --lo")
    step = mpq(1, 2**args.resolution)
    k0, k1 = -_floor(-lo / step), _floor(hi / step)
    P = continuous._profile(f)
    out = sys.stdout
    out.write("x,Mf_exact,Mf_approx\n")
    for k in range(k0, k1 + 1):
        x = k * step
        v = P.centered(x)
        out.write(f"{rat_str(x)},{rat_str(v)},{_approx(v)}\n")
    return EXIT_OK


def _floor(q) -> int:
    return int(q.numerator // q.denominator)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="maxvar", description="Exact maximal functions and their total variation.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("eval", help="maximal function at a point")
    _add_instance(e)
    e.add_argument("--x", required=True, help="rational abscissa (integer for sequences)")
    e.add_argument("--variant", choices=discrete.VARIANTS, default="centered")
    e.add_argument("--side", choices=("left", "right"), help="one-sided limit instead of the value")
    e.add_argument("--restricted", type=int, metavar="N", help="only windows of length (2j-1)/2^N")
    _add_format(e)
    e.set_defaults(run=cmd_eval)

    v = sub.add_parser("var", help="total variation of the instance")
    _add_instance(v)
    _add_format(v)
    v.set_defaults(run=cmd_var)

    m = sub.add_parser("maxvar", help="total variation of the maximal function")
    _add_instance(m)
    m.add_argument("--variant", choices=discrete.VARIANTS, default="centered")
    _add_format(m)
    m.set_defaults(run=cmd_maxvar)

    c = sub.add_parser("check", help="test Var(Mf) <= Var(f) - ||a|-|b||/2")
    _add_instance(c)
    which = c.add_mutually_exclusive_group()
    which.add_argument("--theorem1", action="store_true", help="alternating class only")
    which.add_argument("--conjecture", action="store_true", help="any instance (default)")
    _add_format(c)
    c.set_defaults(run=cmd_check)

    s = sub.add_parser("search", help="seeded randomized search")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--count", type=int, default=100)
    s.add_argument("--class", dest="cls", choices=harness.CLASSES, default="alternating")
    s.add_argument("--domain", choices=harness.DOMAINS, default="discrete")
    s.add_argument("--k-min", type=int, default=0)
    s.add_argument("--k-max", type=int, default=12)
    s.add_argument("--value-bound", type=int, default=16)
    s.add_argument("--breakpoint-bound", type=int, default=4)
    s.add_argument("--no-shrink", action="store_true")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--report", help="write one JSON report per line to this file")
    _add_format(s)
    s.set_defaults(run=cmd_search)

    t = sub.add_parser("transfer", help="audit the sampling chain")
    _add_instance(t)
    t.add_argument("--resolution", type=int, default=1, help="grid resolution N*")
    t.add_argument("--N", type=int, default=3, help="sampling resolution, at least N*")
    _add_format(t, default="json")
    t.set_defaults(run=cmd_transfer)

    r = sub.add_parser("reproduce", help="recompute the worked examples")
    r.add_argument("--C", default="1000000", help="plateau height of the limitation example")
    _add_format(r)
    r.set_defaults(run=cmd_reproduce)

    sc = sub.add_parser("sample-curve", help="CSV of Mf on a dyadic grid")
    _add_instance(sc)
    sc.add_argument("--resolution", type=int, default=3, help="grid step 2^-resolution")
    sc.add_argument("--lo")
    sc.add_argument("--hi")
    sc.set_defaults(run=cmd_sample_curve)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except MalformedInput as exc:
        print(f"error: malformed instance: {exc}", file=sys.stderr)
    except ClassViolation as exc:
        print(f"error: {exc}\nhint: `maxvar check --conjecture` accepts any instance", file=sys.stderr)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
