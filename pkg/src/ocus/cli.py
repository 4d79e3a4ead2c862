"""Command-line entry point.

Commands:

``ocus``     one optimal constrained unsatisfiable subset, from a problem at a
             given interpretation or from a DIMACS file;
``explain``  a full explanation sequence, written as JSON;
``verify``   re-check a sequence document against its problem;
``bench``    run a matrix of configurations over a directory of problems and
             stream ``instance,config,step,cost,cum_ms,explained`` CSV rows.

Exit codes: 0 success, 1 no result (no unsatisfiable subset, invalid
sequence, timeout), 2 bad input or usage.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .dimacs import ParseError, read_dimacs
from .engine import GrowStrategy, Status, Timeout, ocus
from .explain import (ConfigError, ExplanationError, ExplanationSequence, ExplanationTimeout, Explainer,
                      SequenceConfig, verify_sequence)
from .formula import FormulaError, Group, interpretation
from .hitting_set import TRIVIALLY_TRUE, ExactlyOne, HittingSetSolver
from .problem import ExplanationProblem, ProblemError, assemble_ocus_formula, load_problem
from .puzzle import PuzzleError, load_puzzle
from .sat import hint_from_literals

TIMEOUT_ENV = "OCUS_TIMEOUT_MS"
GROW_CHOICES = ("none", "model", "greedy", "max:full", "max:actual")
WEIGHT_CHOICES = ("unif", "pos", "inv")

# Short names accepted by ``bench --matrix`` besides full configuration labels.
BENCH_ALIASES = {"no-grow": "ocus+none+none", "max:actual:unif": "ocus+none+max-actual-unif"}


class UsageError(Exception):
    pass


# -- input helpers ----------------------------------------------------------


def load_any_problem(path) -> ExplanationProblem:
    """Load a problem document or a logic-grid puzzle (recognised by its ``categories`` field)."""
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    try:
        is_puzzle = "categories" in json.loads(raw)
    except (json.JSONDecodeError, TypeError):
        is_puzzle = False
    try:
        return load_puzzle(path) if is_puzzle else load_problem(path)
    except (ProblemError, PuzzleError, FormulaError) as e:
        raise UsageError(f"{path}: {e}") from None


def parse_literals(text: str, problem: ExplanationProblem | None = None) -> list:
    """Signed atom ids or (for problems with named atoms) names with an optional ``~``."""
    names = {n: k + 1 for k, n in enumerate(problem.atom_names)} if problem else {}
    lits = []
    for token in text.replace(",", " ").split():
        neg = token[0] in "~!" or (token[0] == "-" and not token[1:].isdigit())
        name = token[1:] if neg else token
        try:
            lit = int(name)
        except ValueError:
            if name not in names:
                raise UsageError(f"unknown literal {token!r}") from None
            lit = names[name]
        lits.append(-lit if neg else lit)
    return lits


def parse_indices(text: str) -> list:
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"bad index list {text!r}") from None


def grow_strategy(args) -> GrowStrategy:
    if args.grow.startswith("max:"):
        return GrowStrategy("maxsat", args.grow.split(":", 1)[1], args.grow_weights)
    return GrowStrategy(args.grow)


def default_timeout_ms():
    value = os.environ.get(TIMEOUT_ENV)
    if not value:
        return None
    try:
        return int(value)
    except ValueError:
        raise UsageError(f"{TIMEOUT_ENV} must be an integer number of milliseconds") from None


def timeout_seconds(args):
    ms = args.timeout_ms if args.timeout_ms is not None else default_timeout_ms()
    return None if ms is None else ms / 1000.0


def clause_label(i: int) -> str:
    return f"c{i + 1}"


# -- commands ---------------------------------------------------------------


def cmd_ocus(args, out) -> int:
    strategy = grow_strategy(args)
    hint = None
    if args.problem:
        if args.formula or args.exactly_one is not None:
            raise UsageError("--problem cannot be combined with --formula/--exactly-one")
        problem = load_any_problem(args.problem).with_target()
        I = parse_literals(args.interpretation or "", problem)
        try:
            F, D = assemble_ocus_formula(problem, interpretation(I))
        except (ProblemError, FormulaError) as e:
            raise UsageError(str(e)) from None
        constraint = ExactlyOne(D)
        actual = F.indices_in(Group.AGNOSTIC, Group.SPECIFIC, Group.FACT, Group.DERIVED)
        hint = hint_from_literals(problem.target)
    elif args.formula:
        try:
            F = read_dimacs(args.formula)
        except OSError as e:
            raise UsageError(f"cannot read {args.formula}: {e.strerror}") from None
        except ParseError as e:
            raise UsageError(f"{args.formula}: {e}") from None
        if args.exactly_one:
            D = parse_indices(args.exactly_one)
            if not D or any(not 0 <= i < len(F) for i in D):
                raise UsageError("--exactly-one needs clause indices of the formula")
            constraint = ExactlyOne(D)
            actual = F.indices - constraint.domain
        else:
            constraint, actual = TRIVIALLY_TRUE, F.indices
    else:
        raise UsageError("give either --problem with --interpretation, or --formula")

    hs = HittingSetSolver(F.indices, dict(enumerate(F.weights)))
    trace = []
    timeout = timeout_seconds(args)
    deadline = None if timeout is None else time.monotonic() + timeout
    try:
        result = ocus(F, constraint, strategy, hs, hint=hint, actual_domain=actual, trace=trace,
                      deadline=deadline)
    except Timeout:
        print("timeout", file=out)
        return 1
    finally:
        if args.dump_hs:
            Path(args.dump_hs).write_text(hs.dump(), encoding="utf-8")
    if args.trace:
        for record in trace:
            print(json.dumps(record.as_dict()), file=out)
    if result.status is not Status.FOUND:
        print("no unsatisfiable subset", file=out)
        return 1
    subset = sorted(result.subset)
    print(f"cost {result.cost}", file=out)
    print("subset " + " ".join(clause_label(i) for i in subset), file=out)
    print("indices " + " ".join(map(str, subset)), file=out)
    return 0


def cmd_explain(args, out) -> int:
    try:
        incr = args.incr or ("none" if args.algo == "mus" else "shared")
        grow = GrowStrategy("none") if args.algo == "mus" else grow_strategy(args)
        config = SequenceConfig(args.algo, incr, grow)
    except (ConfigError, ValueError) as e:
        raise UsageError(str(e)) from None
    problem = load_any_problem(args.problem)
    ex = Explainer(problem, config)
    try:
        seq = ex.run(timeout_seconds(args))
        status = 0
    except ExplanationTimeout as e:
        seq, status = e.partial, 1
        print(f"timeout after {len(seq.steps)} step(s)", file=out)
    except ExplanationError as e:
        print(f"error: {e}", file=out)
        return 1
    finally:
        ex.close()
    doc = seq.to_document(ex.problem)
    if args.out:
        Path(args.out).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    else:
        json.dump(doc, out, indent=2)
        print(file=out)
    print(f"{config.label}: {len(seq.steps)} steps, total cost {seq.total_cost}, "
          f"{seq.total_ms / 1000.0:.3f} s", file=sys.stderr if not args.out else out)
    return status


def cmd_verify(args, out) -> int:
    problem = load_any_problem(args.problem)
    try:
        doc = json.loads(Path(args.sequence).read_text(encoding="utf-8"))
        seq = ExplanationSequence.from_document(doc)
    except OSError as e:
        raise UsageError(f"cannot read {args.sequence}: {e.strerror}") from None
    except (json.JSONDecodeError, ExplanationError) as e:
        raise UsageError(f"{args.sequence}: {e}") from None
    report = verify_sequence(problem, seq)
    print(report, file=out)
    return 0 if report.valid else 1


def bench_labels(matrix: str) -> list:
    labels = []
    for raw in matrix.split(","):
        raw = raw.strip()
        if not raw:
            continue
        label = BENCH_ALIASES.get(raw, raw)
        try:
            labels.append(SequenceConfig.from_label(label).label)
        except (ConfigError, ValueError):
            valid = sorted(BENCH_ALIASES) + SequenceConfig.all_labels()
            raise UsageError(f"unknown configuration {raw!r}; valid labels: {', '.join(valid)}") from None
    if not labels:
        raise UsageError("--matrix is empty")
    return labels


def bench_cell(path: str, label: str, timeout_ms):
    """Rows for one (instance, configuration) pair; a timeout adds a sentinel row."""
    problem = load_any_problem(path)
    name = problem.name or Path(path).stem
    total = len(problem.with_target().target - problem.initial)
    rows = []
    state = {"cum": 0.0, "explained": 0}

    def record(k, step, I):
        state["cum"] += step.ms
        state["explained"] += len(step.derived)
        rows.append([name, label, k, step.cost, round(state["cum"], 3), state["explained"]])

    ex = Explainer(problem, SequenceConfig.from_label(label))
    try:
        ex.run(None if timeout_ms is None else timeout_ms / 1000.0, on_step=record)
    except ExplanationTimeout:
        # the literals left unexplained are charged the full time limit
        rows.append([name, label, len(rows), "", float(timeout_ms), total])
    finally:
        ex.close()
    return rows


def cmd_bench(args, out) -> int:
    labels = bench_labels(args.matrix)
    folder = Path(args.problems)
    if not folder.is_dir():
        raise UsageError(f"{folder} is not a directory")
    paths = sorted(str(p) for p in folder.glob("*.json"))
    if not paths:
        raise UsageError(f"no problem files (*.json) in {folder}")
    readable = []
    for p in paths:
        try:
            load_any_problem(p)
            readable.append(p)
        except UsageError as e:
            print(f"warning: skipping {e}", file=sys.stderr)
    if not readable:
        raise UsageError("no readable problem files")
    timeout_ms = args.timeout_ms if args.timeout_ms is not None else default_timeout_ms()
    cells = [(p, label) for p in readable for label in labels]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(bench_cell, *zip(*cells), [timeout_ms] * len(cells)))
    else:
        results = [bench_cell(p, label, timeout_ms) for p, label in cells]
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["instance", "config", "step", "cost", "cum_ms", "explained"])
    for rows in results:
        writer.writerows(rows)
    return 0


# -- argument parsing -------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ocus", description="Optimal constrained unsatisfiable subsets "
                                     "and step-wise explanations of propagation.")
    sub = parser.add_subparsers(dest="command", required=True)

    def grow_flags(p):
        p.add_argument("--grow", choices=GROW_CHOICES, default="max:actual")
        p.add_argument("--grow-weights", choices=WEIGHT_CHOICES, default="unif")

    def timeout_flag(p):
        p.add_argument("--timeout-ms", type=int, default=None,
                       help=f"time limit in milliseconds (default: ${TIMEOUT_ENV}, else none)")

    p = sub.add_parser("ocus", help="compute one optimal constrained unsatisfiable subset")
    p.add_argument("--problem", help="problem or puzzle JSON file")
    p.add_argument("--interpretation", help="derived facts, e.g. '1,-2' or 'x1 ~x2'")
    p.add_argument("--formula", help="DIMACS CNF file (unit weights)")
    p.add_argument("--exactly-one", help="0-based clause indices for the exactly-one constraint")
    grow_flags(p)
    p.add_argument("--trace", action="store_true", help="print one JSON record per iteration")
    p.add_argument("--dump-hs", metavar="FILE", help="write the collected sets-to-hit to FILE")
    timeout_flag(p)
    p.set_defaults(func=cmd_ocus)

    p = sub.add_parser("explain", help="explain a whole problem step by step")
    p.add_argument("--problem", required=True)
    p.add_argument("--algo", choices=("mus", "ocus", "ousb"), default="ocus")
    p.add_argument("--incr", choices=("none", "ss", "shared", "perlit"), default=None,
                   help="incrementality (default: none for mus, shared otherwise)")
    grow_flags(p)
    p.add_argument("--out", help="write the sequence document here (default: stdout)")
    timeout_flag(p)
    p.set_defaults(func=cmd_explain)

    p = sub.add_parser("verify", help="check a sequence document against its problem")
    p.add_argument("--problem", required=True)
    p.add_argument("--sequence", required=True)
    timeout_flag(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="run a configuration matrix and write CSV")
    p.add_argument("--problems", required=True, help="directory of problem/puzzle JSON files")
    p.add_argument("--matrix", default="no-grow,max:actual:unif",
                   help="comma-separated configuration labels such as ocus+shared+max-actual-unif")
    p.add_argument("--out", help="CSV output file (default: stdout)")
    p.add_argument("--jobs", type=int, default=1)
    timeout_flag(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        if getattr(args, "out", None) and args.command == "bench":
            with open(args.out, "w", encoding="utf-8", newline="") as f:
                return args.func(args, f)
        return args.func(args, out)
    except UsageError as e:
        print(f"ocus {args.command}: error: {e}", file=sys.stderr)
        return 2


def main_entry():
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
