"""Command-line interface.

Machine-readable output goes to stdout (JSON, or JSON lines for traces) and
a one-line human summary to stderr.  Exit codes:

    0  valid / supported / holds / matches
    1  operational error (unreadable file, syntax error, bad arguments)
    2  semantic failure (invalid system, not supported, fails, mismatch,
       unbound variable or unknown name)
    3  inconclusive (budget exhausted, undecided quantifier)
"""

from __future__ import annotations

import argparse
import json
import sys as _sys
from pathlib import Path

from . import __version__
from .computability.family import (
    check_semilinear_spec,
    computed_predicate_table,
    load_family,
    table_to_csv,
)
from .computability.presburger import PresburgerSyntaxError, read_spec_file
from .emergence import FAIRNESS_MODES, BoundTooSmall, brute_force_emergence, check_emergence
from .graph import BudgetExceeded, build_graph, history_to_json, trace_records
from .loader import load_system
from .logic.brute import brute_force_check
from .logic.checker import MODES, model_check
from .logic.eliminate import BindError
from .logic.parser import FormulaSyntaxError, read_formula_file
from .simulate import POLICIES, Scheduler, simulate
from .system import MemorySystemError, validate_system

EXIT_OK, EXIT_ERROR, EXIT_FAIL, EXIT_INCONCLUSIVE = 0, 1, 2, 3
DEFAULT_SEED = 20240917


class _Abort(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _emit(obj, out) -> None:
    out.write(json.dumps(obj, indent=2, ensure_ascii=False) + "\n")


def _note(message: str) -> None:
    print(message, file=_sys.stderr)


def _read_system(path):
    try:
        return load_system(path)
    except OSError as exc:
        raise _Abort(EXIT_ERROR, f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise _Abort(EXIT_ERROR, f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: "
                                 f"{exc.msg}") from None
    except MemorySystemError as exc:
        raise _Abort(EXIT_FAIL, f"{path}: {exc}") from None


def _require_valid(system, path):
    report = validate_system(system)
    if not report.valid:
        raise _Abort(EXIT_FAIL, f"{path}: invalid system: {'; '.join(report.violations)}")


# -- commands -----------------------------------------------------------------


def cmd_validate(args, out) -> int:
    system = _read_system(args.system)
    report = validate_system(system)
    _emit(report.to_json(), out)
    if report.valid:
        _note(f"valid ({len(report.warnings)} warnings)")
        return EXIT_OK
    _note(f"invalid: {len(report.violations)} violations")
    return EXIT_FAIL


def cmd_simulate(args, out) -> int:
    system = _read_system(args.system)
    _require_valid(system, args.system)
    history = simulate(system, Scheduler(args.policy, args.seed), args.steps)
    for rec in trace_records(system, history):
        out.write(json.dumps(rec, ensure_ascii=False) + "\n")
    final = history.configs[-1]
    uniform = system.uniform_signal(final)
    kind = "deadlock" if history.kind == "finite-maximal" else "prefix"
    _note(f"{kind} after {len(history.labels)} steps; final configuration "
          + (f"uniformly signals {uniform}" if uniform else "is not signal-uniform"))
    return EXIT_OK


def cmd_check_emergence(args, out) -> int:
    system = _read_system(args.system)
    _require_valid(system, args.system)
    try:
        graph = build_graph(system, args.node_budget)
    except BudgetExceeded as exc:
        _emit({"supports": None, "error": str(exc)}, out)
        _note(f"inconclusive: {exc}")
        return EXIT_INCONCLUSIVE
    verdict = check_emergence(system, args.fairness, graph=graph)
    result = verdict.to_json(graph)
    if args.oracle:
        try:
            oracle = brute_force_emergence(system, args.lasso_bound, args.fairness, args.node_budget)
            result["oracle"] = {"supports": oracle.supports, "agrees": oracle.supports == verdict.supports}
        except BoundTooSmall as exc:
            result["oracle"] = {"supports": None, "error": str(exc)}
    _emit(result, out)
    if verdict.supports:
        _note(f"supports emergence (signal {verdict.signal})")
        return EXIT_OK
    _note("does not support emergence")
    return EXIT_FAIL


def _parse_binds(items) -> dict:
    out = {}
    for item in items or ():
        var, sep, agent = item.partition("=")
        if not sep or not var or not agent:
            raise _Abort(EXIT_ERROR, f"--bind expects VAR=AGENT, got {item!r}")
        out[var.strip()] = agent.strip()
    return out


def _read_json(path, what):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise _Abort(EXIT_ERROR, f"cannot read {what} {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise _Abort(EXIT_ERROR, f"{what} {path}: invalid JSON: {exc}") from None


def cmd_model_check(args, out) -> int:
    system = _read_system(args.system)
    _require_valid(system, args.system)
    try:
        text = Path(args.formulas).read_text(encoding="utf-8")
    except OSError as exc:
        raise _Abort(EXIT_ERROR, f"cannot read {args.formulas}: {exc.strerror}") from None
    try:
        formulas = read_formula_file(text)
    except FormulaSyntaxError as exc:
        raise _Abort(EXIT_ERROR, f"{args.formulas}: {exc}") from None
    valuation = _read_json(args.valuation, "valuation") if args.valuation else {}
    assignment = _parse_binds(args.bind)
    try:
        graph = build_graph(system, args.node_budget)
    except BudgetExceeded as exc:
        _emit({"results": [], "error": str(exc)}, out)
        _note(f"inconclusive: {exc}")
        return EXIT_INCONCLUSIVE

    results = []
    failed = errors = 0
    for line, source, formula in formulas:
        entry = {"line": line, "formula": source}
        try:
            v = model_check(system, valuation, formula, args.mode, args.fairness, assignment,
                            graph=graph, strict=args.strict)
        except BindError as exc:
            entry.update(holds=None, error=str(exc))
            errors += 1
            results.append(entry)
            continue
        entry["holds"] = v.holds
        entry["counterexample"] = None
        if v.counterexample is not None:
            entry["counterexample"] = {**history_to_json(system, v.counterexample),
                                       "position": v.position}
            failed += 1
        if args.oracle:
            try:
                b = brute_force_check(system, valuation, formula, args.lasso_bound, args.mode,
                                      args.fairness, assignment, args.node_budget)
                entry["oracle"] = {"holds": b.holds, "agrees": b.holds == v.holds}
            except (BoundTooSmall, BudgetExceeded) as exc:
                entry["oracle"] = {"holds": None, "error": str(exc)}
        results.append(entry)
    _emit({"mode": args.mode, "fairness": args.fairness, "results": results}, out)
    _note(f"{len(results) - failed - errors} hold, {failed} fail, {errors} errors")
    return EXIT_FAIL if failed or errors else EXIT_OK


def cmd_compute_predicate(args, out) -> int:
    try:
        family = load_family(args.family)
    except OSError as exc:
        raise _Abort(EXIT_ERROR, f"cannot read {args.family}: {exc.strerror}") from None
    except (json.JSONDecodeError, PresburgerSyntaxError) as exc:
        raise _Abort(EXIT_ERROR, f"{args.family}: {exc}") from None
    except MemorySystemError as exc:
        raise _Abort(EXIT_FAIL, f"{args.family}: {exc}") from None
    spec = None
    if args.spec:
        try:
            spec = read_spec_file(Path(args.spec).read_text(encoding="utf-8"))
        except OSError as exc:
            raise _Abort(EXIT_ERROR, f"cannot read {args.spec}: {exc.strerror}") from None
        except PresburgerSyntaxError as exc:
            raise _Abort(EXIT_ERROR, f"{args.spec}: {exc}") from None
    try:
        table = computed_predicate_table(family, args.n_max, args.node_budget, args.fairness,
                                         args.workers)
    except MemorySystemError as exc:
        raise _Abort(EXIT_FAIL, str(exc)) from None
    csv_text = table_to_csv(table, family.signals)
    if args.output:
        Path(args.output).write_text(csv_text, encoding="utf-8")
    result = {
        "family": family.name,
        "n_max": args.n_max,
        "rows": [{"n": r.n, "y": list(r.y), "verdict": r.verdict, "reason": r.reason} for r in table],
    }
    code = EXIT_OK
    if spec is not None:
        report = check_semilinear_spec(table, spec, args.quantifier_bound)
        result["spec"] = report.to_json()
        if report.mismatches:
            code = EXIT_FAIL
        elif report.inconclusive:
            code = EXIT_INCONCLUSIVE
        _note(f"{len(table)} cells, {len(report.mismatches)} mismatches, "
              f"{len(report.inconclusive)} inconclusive")
    else:
        _note(f"{len(table)} cells")
    if any(r.reason == "truncated" for r in table) and code == EXIT_OK:
        code = EXIT_INCONCLUSIVE
    _emit(result, out)
    return code


def cmd_export_graph(args, out) -> int:
    system = _read_system(args.system)
    _require_valid(system, args.system)
    try:
        graph = build_graph(system, args.node_budget)
    except BudgetExceeded as exc:
        _note(f"inconclusive: {exc}")
        return EXIT_INCONCLUSIVE
    if args.format == "json":
        _emit(graph.to_json(), out)
    else:
        out.write("digraph G {\n")
        for i, c in enumerate(graph.configs):
            out.write(f'  n{i} [label="{",".join(c)}"];\n')
        for s, e, t in graph.edges:
            out.write(f'  n{s} -> n{t} [label="{e}"];\n')
        out.write("}\n")
    _note(f"{len(graph)} nodes, {len(graph.edges)} edges")
    return EXIT_OK


# -- argument parsing -----------------------------------------------------------


def _positive(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _natural(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be a non-negative integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="memsys", description="Analyse memory systems.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def budget(sp):
        sp.add_argument("--node-budget", type=_positive, default=100_000,
                        help="maximum reachable configurations (default 100000)")

    sp = sub.add_parser("validate", help="check a system definition")
    sp.add_argument("system")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("simulate", help="run a scheduled simulation, print a JSONL trace")
    sp.add_argument("system")
    sp.add_argument("--steps", type=_natural, default=20)
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sp.add_argument("--policy", choices=POLICIES, default="uniform-random")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("check-emergence", help="decide emergence of collective memory")
    sp.add_argument("system")
    sp.add_argument("--fairness", choices=FAIRNESS_MODES, default="entry")
    sp.add_argument("--oracle", action="store_true", help="also run the lasso-enumeration oracle")
    sp.add_argument("--lasso-bound", type=_positive, default=12)
    budget(sp)
    sp.set_defaults(func=cmd_check_emergence)

    sp = sub.add_parser("model-check", help="model-check formulas, one per line")
    sp.add_argument("system")
    sp.add_argument("formulas")
    sp.add_argument("--mode", choices=MODES, default="all-maximal")
    sp.add_argument("--fairness", choices=FAIRNESS_MODES, default="entry",
                    help="fairness reading for --mode spanning-only")
    sp.add_argument("--bind", action="append", metavar="VAR=AGENT",
                    help="assign a free variable to an agent (repeatable)")
    sp.add_argument("--valuation", help="JSON file mapping states to proposition lists")
    sp.add_argument("--strict", action="store_true", help="reject unknown propositions")
    sp.add_argument("--oracle", action="store_true", help="also run the brute-force checker")
    sp.add_argument("--lasso-bound", type=_positive, default=12)
    budget(sp)
    sp.set_defaults(func=cmd_model_check)

    sp = sub.add_parser("compute-predicate", help="tabulate the predicate a family computes")
    sp.add_argument("family")
    sp.add_argument("--n-max", type=_natural, default=6)
    sp.add_argument("--spec", help="Presburger spec file, one 'signal: formula' per line")
    sp.add_argument("--output", help="write the table as CSV")
    sp.add_argument("--quantifier-bound", type=_natural, default=64)
    sp.add_argument("--fairness", choices=FAIRNESS_MODES, default="entry")
    sp.add_argument("--workers", type=_positive, default=1)
    budget(sp)
    sp.set_defaults(func=cmd_compute_predicate)

    sp = sub.add_parser("export-graph", help="write the configuration graph")
    sp.add_argument("system")
    sp.add_argument("--format", choices=("json", "dot"), default="json")
    budget(sp)
    sp.set_defaults(func=cmd_export_graph)
    return p


def main(argv=None, out=None) -> int:
    out = out or _sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except _Abort as exc:
        _note(f"error: {exc}")
        return exc.code


if __name__ == "__main__":
    raise SystemExit(main())
