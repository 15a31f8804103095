"""Command-line surface: solve, check, audit, compare, oracle, scenario.

Exit codes: 0 success, 1 infeasible / no result, 2 input error,
3 refused (oracle search space too large).
"""

from __future__ import annotations

import argparse
import os
import sys

from . import scenarios
from .network import validate_instance
from .nsga2 import SolverConfig, solve
from .oracle import (
    NoFeasibleLatticePointError,
    SearchSpaceTooLargeError,
    brute_force_optimum,
)
from .serialize import (
    InstanceLoadError,
    _atomic_write,
    data_path,
    dumps_canonical,
    emit_trace,
    load_instance_file,
    save_instance,
    save_result,
)

EXIT_OK = 0
EXIT_NO_RESULT = 1
EXIT_INPUT = 2
EXIT_REFUSED = 3


def _load_instance_or_fail(path):
    try:
        return load_instance_file(path)
    except FileNotFoundError:
        print(f"error: no such file: {path}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)
    except InstanceLoadError as exc:
        for err in exc.errors:
            print(f"error: {err}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def _load_table_or_fail(path, scenario_name):
    try:
        spec = scenarios.build_scenario(scenario_name)
    except scenarios.UnknownScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)
    try:
        with open(path, encoding="utf-8") as fh:
            table = scenarios.load_schedule_csv(fh.read())
    except FileNotFoundError:
        print(f"error: no such file: {path}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)
    return spec, table


def cmd_solve(args) -> int:
    instance = _load_instance_or_fail(args.instance)
    config = SolverConfig(
        population_size=args.population,
        crossover_prob=args.crossover,
        mutation_prob=args.mutation,
        max_generations=args.generations,
        seed=args.seed,
    )
    result = solve(instance, config)
    if args.out:
        save_result(result, args.out)
    if args.trace:
        emit_trace(result, args.trace)
    print(f"generations run: {result.generations_run} (terminated by {result.terminated_by})")
    if result.best_feasible is None:
        best_viol = min(ind.violation for ind in result.final_front)
        print(f"no feasible plan found; minimum violation on final front: {best_viol:.6g}")
        return EXIT_NO_RESULT
    _, breakdown = result.best_feasible
    print(f"best feasible cost: {breakdown.total:.6f}")
    print(
        f"  raw {breakdown.raw_cost:.6f} | plant->dc {breakdown.plant_to_dc_cost:.6f} | "
        f"holding {breakdown.holding_cost:.6f} | dc->retailer {breakdown.dc_to_retailer_cost:.6f}"
    )
    return EXIT_OK


def cmd_check(args) -> int:
    try:
        instance = load_instance_file(args.instance)
    except FileNotFoundError:
        print(f"error: no such file: {args.instance}", file=sys.stderr)
        return EXIT_INPUT
    except InstanceLoadError as exc:
        for err in exc.errors:
            print(f"invalid: {err}")
        return EXIT_INPUT
    report = validate_instance(instance)
    if report.ok:
        s, k, j, i = instance.counts
        print(f"ok: {s} suppliers, {k} plants, {j} DCs, {i} retailers")
        return EXIT_OK
    for issue in report.issues:
        print(f"invalid: {issue}")
    return EXIT_INPUT


def _audit_document(audit):
    return {
        "plant_totals": audit.plant_totals,
        "dc_totals": audit.dc_totals,
        "grand_total_rows": audit.grand_total_rows,
        "grand_total_cols": audit.grand_total_cols,
        "breaches": [
            {
                "entity": b.entity,
                "total": b.total,
                "capacity": b.capacity,
                "max_utilization": b.max_utilization,
            }
            for b in audit.breaches
        ],
    }


def cmd_audit(args) -> int:
    spec, table = _load_table_or_fail(args.table, args.scenario)
    try:
        audit = scenarios.check_schedule(table, spec, strict_per_dc=args.strict_per_dc)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.json:
        print(dumps_canonical(_audit_document(audit)), end="")
        return EXIT_OK
    print(f"scenario: {spec.name}")
    print(f"grand total: {audit.grand_total_rows:.0f} (rows) / {audit.grand_total_cols:.0f} (columns)")
    for label, total in zip(table.col_labels, audit.plant_totals):
        print(f"  {label}: {total:.0f}")
    for label, total in zip(table.row_labels, audit.dc_totals):
        print(f"  {label}: {total:.0f}")
    if not audit.breaches:
        print("no capacity breaches")
    for b in audit.breaches:
        extra = "" if b.max_utilization is None else f" (feasible up to u = {b.max_utilization:.4f})"
        print(f"breach: {b.entity} total {b.total:.0f} exceeds capacity {b.capacity:.0f}{extra}")
    return EXIT_OK


def cmd_compare(args) -> int:
    spec_a, table_a = _load_table_or_fail(args.table_a, args.scenario_a)
    spec_b, table_b = _load_table_or_fail(args.table_b, args.scenario_b)
    try:
        audit_a = scenarios.check_schedule(table_a, spec_a)
        audit_b = scenarios.check_schedule(table_b, spec_b)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report = scenarios.compare_scenarios(audit_a, audit_b)
    print(f"old total: {report.old_total:.0f}")
    print(f"new total: {report.new_total:.0f}")
    if report.pct_change_new_basis is None:
        print("percent change (new basis): undefined (new total is zero)")
    else:
        print(f"percent change (new basis): {report.pct_change_new_basis:.2f}%")
    if report.pct_change_old_basis is None:
        print("percent change (old basis): undefined (old total is zero)")
    else:
        print(f"percent change (old basis): {report.pct_change_old_basis:.2f}%")
    return EXIT_OK


def cmd_oracle(args) -> int:
    instance = _load_instance_or_fail(args.instance)
    try:
        plan, cost = brute_force_optimum(instance, grid_step=args.grid)
    except SearchSpaceTooLargeError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except NoFeasibleLatticePointError as exc:
        print(f"no feasible lattice point; minimal violation {exc.min_violation:.6g}", file=sys.stderr)
        return EXIT_NO_RESULT
    print(f"optimum cost: {cost:.6f}")
    print(f"raw_flow: {plan.raw_flow.tolist()}")
    print(f"plant_dc_flow: {plan.plant_dc_flow.tolist()}")
    print(f"dc_retailer_flow: {plan.dc_retailer_flow.tolist()}")
    return EXIT_OK


def cmd_scenario(args) -> int:
    try:
        instance = scenarios.default_instance(args.name)
    except scenarios.UnknownScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    os.makedirs(args.emit, exist_ok=True)
    inst_path = os.path.join(args.emit, f"{args.name}.instance.json")
    save_instance(instance, inst_path)
    table_name = scenarios.scenario_table_name(args.name)
    table_text = data_path(table_name).read_text(encoding="utf-8")
    _atomic_write(os.path.join(args.emit, table_name), table_text)
    print(f"wrote {inst_path}")
    print(f"wrote {os.path.join(args.emit, table_name)}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pdnet",
        description="Four-echelon production-distribution network: NSGA-II solver, oracle and scenario audits",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run the NSGA-II solver on an instance file")
    p.add_argument("instance")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--generations", type=int, default=200)
    p.add_argument("--population", type=int, default=50)
    p.add_argument("--crossover", type=float, default=0.6)
    p.add_argument("--mutation", type=float, default=0.001)
    p.add_argument("--out", default=None, help="write the result JSON here")
    p.add_argument("--trace", default=None, help="write the per-generation trace CSV here")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("check", help="validate an instance file")
    p.add_argument("instance")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("audit", help="audit a schedule table against scenario capacities")
    p.add_argument("table")
    p.add_argument("--scenario", required=True, choices=scenarios.SCENARIO_NAMES)
    p.add_argument("--strict-per-dc", action="store_true", dest="strict_per_dc")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("compare", help="compare throughput of two audited schedules")
    p.add_argument("table_a")
    p.add_argument("table_b")
    p.add_argument("--scenario-a", required=True, choices=scenarios.SCENARIO_NAMES)
    p.add_argument("--scenario-b", required=True, choices=scenarios.SCENARIO_NAMES)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("oracle", help="brute-force optimum of a tiny instance")
    p.add_argument("instance")
    p.add_argument("--grid", type=float, default=1.0)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("scenario", help="emit a scenario's instance and table fixtures")
    p.add_argument("name", choices=scenarios.SCENARIO_NAMES)
    p.add_argument("--emit", required=True, help="output directory")
    p.set_defaults(func=cmd_scenario)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT


def entrypoint():
    sys.exit(main())
