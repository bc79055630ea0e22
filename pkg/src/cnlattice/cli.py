"""Command-line front end.

Exit codes: 0 success, 1 a verification report failed (or ``validate``
found violations), 2 malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from functools import partial
from typing import Sequence

from . import io
from .distribution import evolve, evolve_killed
from .kernel import StepKernel, require_valid, validate_kernel
from .lattice import support_set
from .montecarlo import mc_hedge
from .transform import coefficients_via_solve, cramer_coefficients, transform_at
from .verify import SUITES, SuiteConfig, run_suite


def _dump(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def _coords(site) -> list[str]:
    return [str(v) for v in site]


def _tsv(*cols) -> str:
    return "\t".join(str(c) for c in cols)


def _load(args) -> StepKernel:
    return require_valid(io.load_kernel(args.kernel))


def cmd_validate(args, render, out) -> int:
    report = validate_kernel(io.load_kernel(args.kernel))
    if args.format == "json":
        print(_dump(report.to_json()), file=out)
    else:
        print(_tsv("ok", str(report.ok).lower()), file=out)
        for v in report.violations:
            print(_tsv("violation", v), file=out)
    return 0 if report.ok else 1


def cmd_support(args, render, out) -> int:
    kernel = _load(args)
    sset = support_set(args.t, io.parse_site(args.x, kernel.dimension), kernel.dimension)
    if args.format == "json":
        print(_dump(sset.to_json()), file=out)
    else:
        for p in sset:
            print(_tsv(p.s, *_coords(p.y)), file=out)
    return 0


def cmd_evolve(args, render, out) -> int:
    kernel = _load(args)
    x0 = io.parse_site(args.x0, kernel.dimension)
    if args.killed:
        result = evolve_killed(kernel, x0, args.t)
        if args.format == "json":
            print(_dump(result.to_json(render)), file=out)
        else:
            for z, m in sorted(result.surviving.items()):
                print(_tsv("surviving", "", *_coords(z), render(m)), file=out)
            for a in result.absorbed:
                print(_tsv("absorbed", a.time, *_coords(a.site), render(a.mass)), file=out)
        return 0
    law = evolve(kernel, x0, args.t)
    if args.format == "json":
        print(_dump(law.to_json(render)), file=out)
    else:
        for z, m in sorted(law.items()):
            print(_tsv(*_coords(z), render(m)), file=out)
    return 0


def cmd_transform(args, render, out) -> int:
    kernel = _load(args)
    f = io.load_payoff(args.payoff, kernel.dimension)
    print(render(transform_at(kernel, io.parse_site(args.target, kernel.dimension), f)), file=out)
    return 0


def cmd_coeffs(args, render, out) -> int:
    kernel = _load(args)
    x = io.parse_site(args.x, kernel.dimension)
    if args.method == "cramer":
        table = cramer_coefficients(kernel, args.t, x, force=args.force)
    else:
        table = coefficients_via_solve(kernel, args.t, x)
    if args.format == "json":
        print(_dump(table.to_json(render)), file=out)
    else:
        for p, c in table.coeffs.items():
            print(_tsv(p.s, *_coords(p.y), render(c)), file=out)
    return 0


def cmd_verify(args, render, out) -> int:
    kernel = _load(args)
    config = SuiteConfig(seed=args.seed, instances=args.instances, max_t=args.max_t)
    total = failed = 0
    for report in run_suite(kernel, args.suite, config):
        total += 1
        failed += not report.passed
        if args.format == "json":
            print(_dump(report.to_json(render)), file=out)
        else:
            print(
                _tsv(report.name, "pass" if report.passed else "FAIL", render(report.lhs), render(report.rhs), _dump(report.instance)),
                file=out,
            )
    for note in config.skipped:
        print(f"skipped {note}", file=sys.stderr)
    print(f"{total - failed}/{total} reports passed", file=sys.stderr)
    return 1 if failed else 0


def cmd_mc(args, render, out) -> int:
    kernel = _load(args)
    f = io.load_payoff(args.payoff, kernel.dimension)
    result = mc_hedge(kernel, io.parse_site(args.x0, kernel.dimension), args.T, f, args.paths, args.seed)
    if args.format == "json":
        print(_dump(result.to_json(render)), file=out)
    else:
        for side, est, exact in (
            ("lhs", result.knocked_out, result.exact_knocked_out),
            ("rhs", result.static_hedge, result.exact_static_hedge),
        ):
            j = est.to_json()
            print(_tsv(side, j["value"], j["std_error"], est.n_paths, est.seed, render(exact)), file=out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--kernel", required=True, help="kernel JSON file")
    common.add_argument("--format", choices=("json", "tsv"), default="json")
    common.add_argument("--float", action="store_true", help="render rationals as decimals")
    common.add_argument("--digits", type=int, default=15)

    parser = argparse.ArgumentParser(prog="cnlattice", description="Discrete barrier transform on Z^d lattice chains.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common])
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("support", parents=[common])
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--x", required=True, help="boundary site, e.g. [0] or [1,0]")
    p.set_defaults(func=cmd_support)

    p = sub.add_parser("evolve", parents=[common])
    p.add_argument("--x0", required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--killed", action="store_true")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("transform", parents=[common])
    p.add_argument("--target", required=True)
    p.add_argument("--payoff", required=True)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("coeffs", parents=[common])
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--method", choices=("solve", "cramer"), default="solve")
    p.add_argument("--force", action="store_true", help="lift the size guard of the cramer method")
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("verify", parents=[common])
    p.add_argument("--suite", choices=SUITES + ("all",), default="all")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--instances", type=int, default=10)
    p.add_argument("--max-t", type=int, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("mc", parents=[common])
    p.add_argument("--x0", required=True)
    p.add_argument("--T", type=int, required=True)
    p.add_argument("--payoff", required=True)
    p.add_argument("--paths", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_mc)
    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    args = build_parser().parse_args(argv)
    out = out or sys.stdout
    render = partial(io.render, as_float=args.float, digits=args.digits)
    try:
        return args.func(args, render, out)
    except (ValueError, LookupError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
