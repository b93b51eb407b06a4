"""Command-line front end.

Commands:
  typecheck FILE            print the program's type
  eval FILE                 run the program, print value and cost
  translate FILE            print the cost/potential recurrence and its type
  bound FILE ARGS --range   tabulate the bound over a swept argument size
  check FILE                compare a measured run against the bound
  fuzz                      run a generated-program campaign

Exit codes: 0 success (and, for check/fuzz, no bound violations); 1 a bound
was violated; 2 parse, type, or usage errors (including 64-bit overflow in
the evaluated program); 3 the evaluation cost budget was exhausted.

All randomized commands are deterministic for a fixed --seed: running the
same command twice prints byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from typing import Sequence

from .complexity import CplxTypeError, DenoteError, NatOverflowError, ctypecheck, cplx_to_source
from .harness import (
    ArgSpec,
    DEFAULT_CONFIG,
    FixedArg,
    ProbeConfig,
    SweepArg,
    TermArg,
    check_program,
    fuzz_campaign,
    tabulate,
)
from .interp import ArithOverflowError, BudgetExceededError, DEFAULT_BUDGET, EvalError, eval_expr, render_value
from .parser import ParseError, parse
from .syntax import Expr
from .translate import translate
from .typecheck import TypeCheckError, typecheck

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_ERROR = 2
EXIT_BUDGET = 3


class _OrderedArg(argparse.Action):
    """Collect --arg/--arg-fn/--sweep in the order they appear."""

    def __call__(self, parser, namespace, values, option_string=None):
        specs = getattr(namespace, "specs", None)
        if specs is None:
            specs = []
            setattr(namespace, "specs", specs)
        specs.append((self.dest, values))


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="foldcost",
        description="Cost bounds for a higher-order fold language: run programs "
                    "with instrumented costs, extract recurrences, and check that "
                    "the bounds hold.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_type = sub.add_parser("typecheck", help="print the program's type")
    p_type.add_argument("file")

    p_eval = sub.add_parser("eval", help="run the program, print value and cost")
    p_eval.add_argument("file")
    p_eval.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                        help="evaluation cost budget (default %(default)s)")

    p_tr = sub.add_parser("translate", help="print the recurrence and its type")
    p_tr.add_argument("file")

    p_bound = sub.add_parser(
        "bound", help="tabulate the bound while sweeping one argument's size")
    p_bound.add_argument("file")
    p_bound.add_argument("--sweep", dest="sweep", action=_OrderedArg, nargs=0,
                         help="the argument position swept over --range")
    p_bound.add_argument("--arg", dest="arg", action=_OrderedArg, metavar="COST,POT",
                         help="a fixed cost,potential argument (e.g. 1,1)")
    p_bound.add_argument("--arg-fn", dest="arg_fn", action=_OrderedArg, metavar="TERM",
                         help="a closed function argument, as source text")
    p_bound.add_argument("--range", default="0:16", metavar="LO:HI",
                         help="inclusive sweep range (default %(default)s)")
    p_bound.add_argument("--json", action="store_true", help="one JSON object per row")

    p_check = sub.add_parser(
        "check", help="run the program and compare cost and size against the bound")
    p_check.add_argument("file")
    _add_probe_flags(p_check)
    p_check.add_argument("--json", action="store_true")

    p_fuzz = sub.add_parser("fuzz", help="check generated programs against their bounds")
    _add_probe_flags(p_fuzz)
    p_fuzz.add_argument("--json", action="store_true")

    return parser


def _add_probe_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--trials", type=int, default=DEFAULT_CONFIG.trials,
                   help="programs to generate, or probes per function (default %(default)s)")
    p.add_argument("--seed", type=int, default=DEFAULT_CONFIG.seed,
                   help="generator seed (default %(default)s)")
    p.add_argument("--depth", type=int, default=DEFAULT_CONFIG.depth,
                   help="generated term depth (default %(default)s)")
    p.add_argument("--max-list", type=int, default=DEFAULT_CONFIG.max_list,
                   help="longest generated list (default %(default)s)")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                   help="evaluation cost budget (default %(default)s)")


def _load(path: str) -> Expr:
    try:
        with open(path, encoding="utf-8") as f:
            text = f.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}", 0, 0) from None
    return parse(text)


def _config(ns: argparse.Namespace) -> ProbeConfig:
    return replace(
        DEFAULT_CONFIG,
        trials=ns.trials,
        seed=ns.seed,
        depth=ns.depth,
        max_list=ns.max_list,
        budget=ns.budget,
    )


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    ns = parser.parse_args(argv)
    try:
        return _dispatch(ns)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (TypeCheckError, CplxTypeError) as exc:
        print(f"type error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except BudgetExceededError as exc:
        print(f"budget error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ArithOverflowError, EvalError, NatOverflowError, DenoteError) as exc:
        print(f"evaluation error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def _dispatch(ns: argparse.Namespace) -> int:
    if ns.command == "typecheck":
        print(typecheck({}, _load(ns.file)))
        return EXIT_OK

    if ns.command == "eval":
        e = _load(ns.file)
        typecheck({}, e)
        result = eval_expr(e, budget=ns.budget)
        print(f"value = {render_value(result.value)}, cost = {result.cost}")
        return EXIT_OK

    if ns.command == "translate":
        e = _load(ns.file)
        typecheck({}, e)
        cplx = translate(e)
        print(cplx_to_source(cplx))
        print(f": {ctypecheck({}, cplx)}")
        return EXIT_OK

    if ns.command == "bound":
        return _cmd_bound(ns)

    if ns.command == "check":
        return _cmd_check(ns)

    if ns.command == "fuzz":
        summary = fuzz_campaign(_config(ns))
        for line in summary.lines(as_json=ns.json):
            print(line)
        return EXIT_OK if summary.failed == 0 else EXIT_VIOLATION

    raise ValueError(f"unknown command {ns.command!r}")


def _cmd_bound(ns: argparse.Namespace) -> int:
    e = _load(ns.file)
    specs: list[ArgSpec] = []
    for kind, value in getattr(ns, "specs", None) or []:
        if kind == "sweep":
            specs.append(SweepArg())
        elif kind == "arg":
            try:
                cost_s, pot_s = value.split(",")
                specs.append(FixedArg(int(cost_s), int(pot_s)))
            except ValueError:
                raise ValueError(f"--arg wants COST,POT integers, got {value!r}") from None
        else:
            specs.append(TermArg(parse(value)))
    try:
        lo_s, hi_s = ns.range.split(":")
        lo, hi = int(lo_s), int(hi_s)
    except ValueError:
        raise ValueError(f"--range wants LO:HI integers, got {ns.range!r}") from None
    table = tabulate(e, specs, range(lo, hi + 1))
    for row in table.rows:
        if ns.json:
            print(f'{{"n": {row.n}, "cost": {row.cost}, "pot": {row.pot}}}')
        else:
            print(f"n={row.n} cost={row.cost} pot={row.pot}")
    return EXIT_OK


def _cmd_check(ns: argparse.Namespace) -> int:
    e = _load(ns.file)
    report = check_program(e, _config(ns))
    if ns.json:
        payload = {
            "cost": report.cost,
            "bound": report.bound_cost,
            "size": report.size,
            "pot": report.pot,
            "verdict": report.status,
        }
        if report.probes_checked is not None:
            payload["probes"] = report.probes_checked
            payload["skipped"] = report.probes_skipped
        if report.status != "pass":
            payload["detail"] = report.detail
        print(json.dumps(payload))
    else:
        if report.probes_checked is not None:
            line = (f"cost={report.cost} bound={report.bound_cost} "
                    f"probes={report.probes_checked} verdict={report.status}")
        else:
            line = (f"cost={report.cost} bound={report.bound_cost} "
                    f"size={report.size} pot={report.pot} verdict={report.status}")
        if report.status != "pass" and report.detail:
            line += f" detail={report.detail!r}"
        print(line)
    if report.status == "fail":
        return EXIT_VIOLATION
    if report.status == "inconclusive" and report.detail == "budget-exceeded":
        return EXIT_BUDGET
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
