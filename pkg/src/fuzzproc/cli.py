"""Command line entry point.

Commands: check (run a script's assertions), eval (evaluate an expression
over a script's bindings), classify (report the execution classes of a named
process), laws (run the law suite). Every command accepts --json for
machine-readable output; grades serialize as reduced fraction strings, never
floating point.

Exit codes: 0 all checks passed, 1 an assertion failed or a counterexample
was found, 2 usage, parse, or input errors. Reports go to stdout,
diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .core import EqualityMode, FuzzyProcess, classify, process_flags
from .errors import FuzzProcError, ScriptError
from .lang import (
    evaluate,
    evaluate_expression,
    format_expr,
    format_process,
    parse_expression,
    parse_script,
)
from .laws import LawVerdict, Scope, Grid, run_suite, select_laws

_MODE_NAMES = {"value": EqualityMode.VALUE, "support": EqualityMode.SUPPORT}


def _emit(payload: dict) -> None:
    sys.stdout.write(json.dumps(payload, indent=2) + "\n")


def _process_json(process: FuzzyProcess) -> dict:
    return {
        "delta": {x: str(g) for x, g in process.delta.items()},
        "gamma": {x: str(g) for x, g in process.gamma.items()},
    }


def _load_script(path: str):
    text = Path(path).read_text(encoding="utf-8")
    script = parse_script(text)
    return script, evaluate(script)


def _assertion_text(script, report) -> list[str]:
    lines = []
    assertions = script.assertions
    for result in report.assertions:
        assertion = assertions[result.index - 1]
        text = format_expr(assertion.lhs)
        if assertion.relation is not None:
            text += f" {assertion.relation.value} " + format_expr(assertion.rhs)
        if result.holds:
            lines.append(f"assert {result.index}: {text}  ->  pass")
        else:
            lines.append(
                f"assert {result.index}: {text}  ->  FAIL at {result.witness_label}"
            )
    return lines


def cmd_check(args) -> int:
    script, report = _load_script(args.file)
    if args.json:
        _emit(
            {
                "universe": list(report.universe.labels),
                "bindings": {
                    name: _process_json(p) for name, p in report.bindings.items()
                },
                "assertions": [
                    {
                        "index": r.index,
                        "relation": r.relation.value if r.relation else None,
                        "holds": r.holds,
                        "witness": r.witness_label,
                    }
                    for r in report.assertions
                ],
            }
        )
    else:
        for line in _assertion_text(script, report):
            print(line)
        failed = sum(1 for r in report.assertions if not r.holds)
        total = len(report.assertions)
        if total == 0:
            print("no assertions")
        elif failed:
            print(f"{failed} of {total} assertions failed")
        else:
            print(f"{total} assertion{'s' if total != 1 else ''} passed")
    return 0 if report.all_hold else 1


def cmd_eval(args) -> int:
    _, report = _load_script(args.file)
    expr = parse_expression(args.expr)
    result = evaluate_expression(expr, report.universe, report.bindings)
    if args.json:
        _emit({"universe": list(result.universe.labels), **_process_json(result)})
    else:
        print(format_process(result, name="result"))
    return 0


def _labels_in_order(universe, labels: frozenset[str]) -> list[str]:
    return [x for x in universe if x in labels]


def cmd_classify(args) -> int:
    _, report = _load_script(args.file)
    try:
        process = report.bindings[args.name]
    except KeyError:
        raise FuzzProcError(f"no process named {args.name!r} in the script") from None
    classes = classify(process)
    flags = process_flags(process)
    universe = process.universe
    if args.json:
        _emit(
            {
                "name": args.name,
                "universe": list(universe.labels),
                "goals": _labels_in_order(universe, classes.goals),
                "escapes": _labels_in_order(universe, classes.escapes),
                "rejects": _labels_in_order(universe, classes.rejects),
                "blockings": _labels_in_order(universe, classes.blockings),
                "violations": _labels_in_order(universe, classes.violations),
                "robust": flags.is_robust,
                "chaotic": flags.is_chaotic,
            }
        )
    else:
        def show(label_set: frozenset[str]) -> str:
            ordered = _labels_in_order(universe, label_set)
            return " ".join(ordered) if ordered else "(none)"

        print(f"process {args.name} over {{{', '.join(universe.labels)}}}")
        print(f"goals:      {show(classes.goals)}")
        print(f"escapes:    {show(classes.escapes)}")
        print(f"rejects:    {show(classes.rejects)}")
        print(f"blockings:  {show(classes.blockings)}")
        print(f"violations: {show(classes.violations)}")
        print(f"robust: {'yes' if flags.is_robust else 'no'}")
        print(f"chaotic: {'yes' if flags.is_chaotic else 'no'}")
    return 0


def _scope_json(scope: Scope) -> dict:
    mode = (
        {"kind": "exhaustive"}
        if scope.is_exhaustive
        else {"kind": "randomized", "samples": scope.samples, "seed": scope.seed}
    )
    return {
        "universe_size": scope.universe_size,
        "grid": [str(g) for g in scope.grid],
        "mode": mode,
    }


def _verdict_json(verdict: LawVerdict) -> dict:
    if verdict.is_verified:
        result = {"kind": "verified", "cases": verdict.result.cases_checked}
    else:
        cex = verdict.result
        result = {
            "kind": "counterexample",
            "universe": list(cex.witnesses[0].universe.labels),
            "witnesses": [_process_json(w) for w in cex.witnesses],
            "lhs": _process_json(cex.lhs) if cex.lhs is not None else None,
            "rhs": _process_json(cex.rhs) if cex.rhs is not None else None,
            "first_differing_label": cex.first_differing_label,
        }
    return {
        "law": verdict.law_id,
        "mode": verdict.mode.value if verdict.mode else None,
        "result": result,
    }


def _expected_kind(expectations: dict | None, verdict: LawVerdict) -> str:
    # Default rule when no expectation is given: no counterexamples.
    if expectations is None or verdict.law_id not in expectations:
        return "verified"
    entry = expectations[verdict.law_id]
    if isinstance(entry, str):
        kind = entry
    elif isinstance(entry, dict):
        key = verdict.mode.value if verdict.mode else "boolean"
        kind = entry.get(key, "verified")
    else:
        raise ValueError(f"bad expectation entry for {verdict.law_id!r}")
    if kind not in ("verified", "counterexample"):
        raise ValueError(f"bad expected verdict {kind!r} for {verdict.law_id!r}")
    return kind


def _verdict_kind(verdict: LawVerdict) -> str:
    return "verified" if verdict.is_verified else "counterexample"


def cmd_laws(args) -> int:
    grid = Grid.parse(args.grid)
    scope = Scope(
        universe_size=args.universe_size,
        grid=grid,
        samples=args.samples,
        seed=args.seed,
    )
    law_ids = None
    if args.laws:
        law_ids = [part.strip() for part in args.laws.split(",") if part.strip()]
        select_laws(law_ids)  # fail early on unknown ids
    modes = None
    if args.modes:
        names = [part.strip() for part in args.modes.split(",") if part.strip()]
        for name in names:
            if name not in _MODE_NAMES:
                raise ValueError(f"unknown mode {name!r} (use value or support)")
        modes = [_MODE_NAMES[name] for name in names]
    expectations = None
    if args.expect:
        expectations = json.loads(Path(args.expect).read_text(encoding="utf-8"))
        if not isinstance(expectations, dict):
            raise ValueError("the expectations file must hold a JSON object")

    report = run_suite([scope], laws=law_ids, modes=modes)

    mismatches = 0
    counterexamples = 0
    rows = []
    for verdict in report.verdicts:
        kind = _verdict_kind(verdict)
        if kind == "counterexample":
            counterexamples += 1
        note = ""
        if expectations is not None:
            if kind == _expected_kind(expectations, verdict):
                note = "as expected"
            else:
                mismatches += 1
                note = f"MISMATCH (expected {_expected_kind(expectations, verdict)})"
        rows.append((verdict, kind, note))

    if args.json:
        _emit(
            {
                "scope": _scope_json(scope),
                "verdicts": [_verdict_json(v) for v, _, _ in rows],
            }
        )
    else:
        print(f"{'law':<22} {'mode':<8} {'verdict':<15} detail")
        for verdict, kind, note in rows:
            mode = verdict.mode.value if verdict.mode else "-"
            if verdict.is_verified:
                detail = f"{verdict.result.cases_checked} cases"
            elif verdict.result.first_differing_label is not None:
                detail = f"first differing label: {verdict.result.first_differing_label}"
            else:
                detail = "violated"
            if note:
                detail += f"  [{note}]"
            print(f"{verdict.law_id:<22} {mode:<8} {kind:<15} {detail}")
            if verdict.is_counterexample:
                for position, witness in enumerate(verdict.result.witnesses, 1):
                    print(f"    witness {position}: {format_process(witness, name=f'w{position}')}")
                if verdict.result.lhs is not None:
                    print(f"    lhs: {format_process(verdict.result.lhs, name='lhs')}")
                    print(f"    rhs: {format_process(verdict.result.rhs, name='rhs')}")
        summary = f"{len(rows)} verdicts, {counterexamples} counterexamples"
        if expectations is not None:
            summary += (
                ", all match expectations"
                if mismatches == 0
                else f", {mismatches} expectation mismatches"
            )
        print(summary)

    if expectations is not None:
        return 0 if mismatches == 0 else 1
    return 0 if counterexamples == 0 else 1


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fuzzproc",
        description="Work with fuzzy device-environment contracts: run script "
        "assertions, evaluate operator expressions, classify executions, and "
        "verify or refute the operator laws over grade grids.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="parse a script and run its assertions")
    check.add_argument("file", help="script file (UTF-8)")
    check.add_argument("--json", action="store_true", help="machine-readable output")
    check.set_defaults(handler=cmd_check)

    evaluate_ = sub.add_parser(
        "eval", help="evaluate an expression over a script's bindings"
    )
    evaluate_.add_argument("file", help="script file providing the bindings")
    evaluate_.add_argument("expr", help="expression, e.g. '-(p * q)'")
    evaluate_.add_argument("--json", action="store_true")
    evaluate_.set_defaults(handler=cmd_eval)

    classify_ = sub.add_parser(
        "classify", help="report execution classes and flags of a process"
    )
    classify_.add_argument("file")
    classify_.add_argument("name", help="process name bound in the script")
    classify_.add_argument("--json", action="store_true")
    classify_.set_defaults(handler=cmd_classify)

    laws = sub.add_parser("laws", help="run the law suite over a grade grid")
    laws.add_argument("--universe-size", type=int, default=1)
    laws.add_argument("--grid", default="0,1/2,1", help="comma-separated grades")
    laws.add_argument("--laws", help="comma-separated law ids or groups (e.g. P1,ORDER)")
    laws.add_argument("--modes", help="comma-separated equality modes (value,support)")
    laws.add_argument("--samples", type=int, help="randomized mode: number of samples")
    laws.add_argument("--seed", type=int, default=0, help="randomized mode seed")
    laws.add_argument("--expect", help="JSON file of expected verdict kinds")
    laws.add_argument("--json", action="store_true")
    laws.set_defaults(handler=cmd_laws)

    return parser


def main(argv=None) -> int:
    parser = build_arg_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 2
    try:
        return args.handler(args)
    except ScriptError as exc:
        sys.stderr.write(
            f"error at line {exc.line}, column {exc.column}: {exc}\n"
        )
        return 2
    except (FuzzProcError, ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
