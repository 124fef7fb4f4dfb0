"""Command-line entry point.

Subcommands: simulate, compare, metrics, optimize, plot-history, plot-sort.
Exit codes: 0 success, 1 usage error, 2 schema/validation error, 3 I/O
error. Errors print one JSON line on stderr: {"kind": ..., "message": ...}.
All randomness flows through explicit --seed flags; identical invocations
produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path as FilePath

from . import __version__
from .classify import StochasticClassifier, load_confusion, load_predictions, synthesize_stream
from .errors import SchemaError
from .layout import DEFAULT_WEIGHT_FACTOR, WasteCategory, parse_layout_file
from .metrics import load_history, metrics_report
from .motion import EnergyModel, MovementPolicy
from .optimize import (
    load_frequencies,
    load_slots,
    optimize_assignment_exact,
    optimize_assignment_hungarian,
    parse_home,
)
from .render import render_history_plot, render_trajectory
from .simulate import compare_policies, report_to_dict, run_simulation, write_events_csv

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_SCHEMA = 2
EXIT_IO = 3

_POLICIES = [p.value for p in MovementPolicy]
_CATEGORY_NAMES = [c.value for c in WasteCategory]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad flags; the CLI contract reserves 2 for schema
    errors, so remap parser failures to the usage exit code."""

    def error(self, message):
        raise UsageError(message)


def _fail(kind: str, message: str, code: int) -> int:
    print(json.dumps({"kind": kind, "message": message}), file=sys.stderr)
    return code


def _write_text(path: str, content: str) -> None:
    FilePath(path).write_text(content, encoding="utf-8")


def _write_json(path: str, doc: dict) -> None:
    _write_text(path, json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _energy_model(file_weight: float, override: float | None) -> EnergyModel:
    return EnergyModel(override if override is not None else file_weight)


def _load_stream(args) -> list:
    if args.predictions is not None:
        if args.items is not None or args.seed is not None:
            raise UsageError("--items/--seed only apply to the --confusion source")
        return load_predictions(args.predictions)
    if args.items is None or args.seed is None:
        raise UsageError("--confusion requires both --items and --seed")
    if args.items <= 0:
        raise UsageError(f"--items must be > 0, got {args.items}")
    matrix = load_confusion(args.confusion)
    clf = StochasticClassifier(matrix, args.seed)
    return synthesize_stream(clf, args.items)


def cmd_simulate(args) -> int:
    layout, file_weight = parse_layout_file(args.layout)
    model = _energy_model(file_weight, args.weight)
    records = _load_stream(args)
    policy = MovementPolicy(args.policy)
    events, report = run_simulation(layout, model, policy, records, count_return=args.count_return)
    _write_json(args.out, report_to_dict(report, __version__))
    if args.events:
        write_events_csv(events, args.events)
    if args.figure:
        from .figures import save_simulation_figure

        save_simulation_figure(layout, events, report, args.figure)
    return EXIT_OK


def cmd_compare(args) -> int:
    layout, file_weight = parse_layout_file(args.layout)
    model = _energy_model(file_weight, args.weight)
    records = load_predictions(args.predictions)
    baseline = MovementPolicy(args.baseline)
    optimized = MovementPolicy(args.optimized)
    report = compare_policies(layout, model, records, baseline, optimized, count_return=args.count_return)
    _write_json(args.out, report_to_dict(report, __version__))
    if args.figure:
        from .figures import save_compare_figure

        _, baseline_report = run_simulation(layout, model, baseline, records, args.count_return)
        save_compare_figure(
            baseline_report, report, report.baseline_comparison.savings_fraction, args.figure
        )
    return EXIT_OK


def cmd_metrics(args) -> int:
    records = load_predictions(args.predictions)
    history = load_history(args.history) if args.history else None
    doc = metrics_report(records, history)
    doc["version"] = __version__
    _write_json(args.out, doc)
    return EXIT_OK


def cmd_optimize(args) -> int:
    slots = load_slots(args.slots)
    freq = load_frequencies(args.freq)
    model = EnergyModel(args.weight if args.weight is not None else DEFAULT_WEIGHT_FACTOR)
    policy = MovementPolicy(args.policy)
    home = parse_home(args.home)
    solver = optimize_assignment_exact if args.method == "exact" else optimize_assignment_hungarian
    solution = solver(slots, freq, model, policy, home)
    _write_json(
        args.out,
        {
            "assignment": {c.value: int(i) for c, i in solution.assignment.items()},
            "expected_energy": solution.expected_energy,
            "unused_slots": list(solution.unused_slots),
            "method": args.method,
            "policy": policy.value,
            "weight_factor": model.weight_factor,
            "home": [home.x, home.y],
            "version": __version__,
        },
    )
    return EXIT_OK


def cmd_plot_history(args) -> int:
    history = load_history(args.history)
    _write_text(args.out, render_history_plot(history))
    return EXIT_OK


def cmd_plot_sort(args) -> int:
    layout, file_weight = parse_layout_file(args.layout)
    model = _energy_model(file_weight, args.weight)
    category = WasteCategory(args.category)
    policy = MovementPolicy(args.policy)
    # One correctly-classified item of the requested category.
    from .classify import PredictionRecord
    from .layout import CATEGORIES

    record = PredictionRecord(
        item_id=category.value,
        true_label=category,
        predicted_label=category,
        probabilities=tuple(1.0 if c is category else 0.0 for c in CATEGORIES),
    )
    events, _ = run_simulation(layout, model, policy, [record])
    _write_text(args.out, render_trajectory(layout, events[0]))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sortcell", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=f"sortcell {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sim = sub.add_parser("simulate", help="simulate sorting a prediction stream and write a report")
    sim.add_argument("--layout", required=True, help="layout JSON file")
    source = sim.add_mutually_exclusive_group(required=True)
    source.add_argument("--predictions", help="predictions CSV file")
    source.add_argument("--confusion", help="confusion-probability JSON file (with --items/--seed)")
    sim.add_argument("--items", type=int, help="number of items to synthesize from --confusion")
    sim.add_argument("--seed", type=int, help="sampling seed for --confusion")
    sim.add_argument("--policy", choices=_POLICIES, default="direct")
    sim.add_argument("--count-return", action="store_true", help="charge the return trip to home as well")
    sim.add_argument("--weight", type=float, help="override the layout file's weight factor")
    sim.add_argument("--out", required=True, help="report JSON output path")
    sim.add_argument("--events", help="optional per-item events CSV output path")
    sim.add_argument("--figure", help="optional matplotlib cell-view figure (PNG) output path")
    sim.set_defaults(func=cmd_simulate)

    cmp_ = sub.add_parser("compare", help="compare two movement policies on the same stream")
    cmp_.add_argument("--layout", required=True)
    cmp_.add_argument("--predictions", required=True)
    cmp_.add_argument("--baseline", choices=_POLICIES, default="rectilinear")
    cmp_.add_argument("--optimized", choices=_POLICIES, default="direct")
    cmp_.add_argument("--count-return", action="store_true")
    cmp_.add_argument("--weight", type=float)
    cmp_.add_argument("--out", required=True)
    cmp_.add_argument("--figure", help="optional per-category energy bar chart (PNG) output path")
    cmp_.set_defaults(func=cmd_compare)

    met = sub.add_parser("metrics", help="compute classification metrics from a predictions CSV")
    met.add_argument("--predictions", required=True)
    met.add_argument("--history", help="optional training-history CSV for the accuracy gap")
    met.add_argument("--out", required=True)
    met.set_defaults(func=cmd_metrics)

    opt = sub.add_parser("optimize", help="assign categories to bin slots minimizing expected energy")
    opt.add_argument("--slots", required=True, help="slots JSON file")
    opt.add_argument("--freq", required=True, help="category-frequency JSON file")
    opt.add_argument("--method", choices=["exact", "hungarian"], default="exact")
    opt.add_argument("--policy", choices=_POLICIES, default="direct")
    opt.add_argument("--weight", type=float, help=f"weight factor (default {DEFAULT_WEIGHT_FACTOR})")
    opt.add_argument("--home", default="0,0", help="arm home position as 'x,y' (default 0,0)")
    opt.add_argument("--out", required=True)
    opt.set_defaults(func=cmd_optimize)

    ph = sub.add_parser("plot-history", help="render the train/validation accuracy chart as SVG")
    ph.add_argument("--history", required=True)
    ph.add_argument("--out", required=True)
    ph.set_defaults(func=cmd_plot_history)

    ps = sub.add_parser("plot-sort", help="render one sort trajectory to a category bin as SVG")
    ps.add_argument("--layout", required=True)
    ps.add_argument("--category", required=True, choices=_CATEGORY_NAMES)
    ps.add_argument("--policy", choices=_POLICIES, default="direct")
    ps.add_argument("--weight", type=float)
    ps.add_argument("--out", required=True)
    ps.set_defaults(func=cmd_plot_sort)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        return _fail("usage", str(exc), EXIT_USAGE)
    except SchemaError as exc:
        return _fail("schema", str(exc), EXIT_SCHEMA)
    except ValueError as exc:
        return _fail("validation", str(exc), EXIT_SCHEMA)
    except OSError as exc:
        return _fail("io", str(exc), EXIT_IO)


if __name__ == "__main__":
    sys.exit(main())
