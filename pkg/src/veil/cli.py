"""Command-line front end.

Subcommands: ``simulate``, ``sweep``, ``solve``, ``scan`` and ``verify``.
Exit codes: 0 ok, 1 verification failure, 2 usage or schema error,
3 physics validation error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from typing import Callable, Iterable, Sequence

import numpy as np

from veil.algebra import ORACLE
from veil.analysis import (
    apply_solution,
    dual_condition_feasibility,
    object2_independence_scan,
    solve_invisibility,
    sweep,
)
from veil.config import SchemaError, config_to_dict, load_document
from veil.detection import ProbabilityReport, full_report
from veil.errors import Infeasible, PhysicsError, VeilError
from veil.network import PARAMETERS, NetworkConfig, build_network, random_config
from veil.oracle import compare, oracle_probabilities

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_PHYSICS = 0, 1, 2, 3

CSV_COLUMNS = ("P_A", "P_B", "P_C", "P_I", "P_AI", "P_BI", "P_CI")


def _emit_json(payload, out) -> None:
    json.dump(payload, out, indent=2)
    out.write("\n")


def cmd_simulate(args, out) -> int:
    doc = load_document(args.config)
    report = full_report(build_network(doc.network))
    payload = report.to_dict()
    payload["config"] = config_to_dict(doc.network)
    _emit_json(payload, out)
    return EXIT_OK


def cmd_sweep(args, out, parser) -> int:
    doc = load_document(args.config)
    spec = dict(doc.sweep)
    for key in ("param", "from", "to", "points"):
        value = getattr(args, key if key != "from" else "start")
        if value is not None:
            spec[key] = value
    missing = [k for k in ("param", "from", "to", "points") if k not in spec]
    if missing:
        parser.error(f"sweep needs {', '.join(missing)} (flag or document 'sweep' block)")
    if spec["param"] not in PARAMETERS:
        parser.error(f"unknown parameter {spec['param']!r}; choose from {', '.join(PARAMETERS)}")
    if spec["points"] < 2:
        parser.error("--points must be at least 2")
    grid = np.linspace(spec["from"], spec["to"], spec["points"])
    table = sweep(doc.network, spec["param"], grid)
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow([spec["param"], *CSV_COLUMNS])
    for x, row in zip(table.grid, table.rows):
        values = row.observables()
        writer.writerow([f"{x:.12e}", *(f"{values[c]:.12e}" for c in CSV_COLUMNS)])
    return EXIT_OK


def cmd_solve(args, out) -> int:
    doc = load_document(args.config)
    cfg = doc.network
    g1, g2, _ = cfg.gammas
    delays = (cfg.delays[0], cfg.delays[2])
    if args.dual or doc.solve.get("dual", False):
        result = dual_condition_feasibility(g1, g2, cfg.bs_a, delays)
        _emit_json(result.to_dict(), out)
        return EXIT_OK
    try:
        solution = solve_invisibility(g1, g2, cfg.bs_a, delays)
    except Infeasible as exc:
        _emit_json({"feasible": False, "requiredT1": exc.required_t1}, out)
        return EXIT_OK
    _emit_json({"feasible": True, "T1": solution.T1, "phi1": solution.phi1, "residual": solution.residual}, out)
    return EXIT_OK


def cmd_scan(args, out) -> int:
    doc = load_document(args.config)
    cfg = doc.network
    if args.solve:
        g1, g2, _ = cfg.gammas
        cfg = apply_solution(cfg, solve_invisibility(g1, g2, cfg.bs_a, (cfg.delays[0], cfg.delays[2])))
    t2 = doc.scan.get("T2", list(np.linspace(0.0, 1.0, 9)))
    phi2 = doc.scan.get("phi2", list(np.linspace(0.0, 2 * math.pi, 9)))
    _emit_json(object2_independence_scan(cfg, t2, phi2).to_dict(), out)
    return EXIT_OK


def run_verify(
    configs: Iterable[NetworkConfig],
    out,
    tol: float = ORACLE,
    fast: Callable[[NetworkConfig], ProbabilityReport] | None = None,
) -> int:
    """Compare the fast path with the oracle over ``configs``; print max diffs."""
    fast = fast or (lambda c: full_report(build_network(c)))
    worst: dict[str, float] = {}
    count = 0
    for cfg in configs:
        diff = compare(fast(cfg), oracle_probabilities(cfg), tol)
        for key, value in diff.differences.items():
            worst[key] = max(worst.get(key, 0.0), value)
        count += 1
    for key, value in worst.items():
        out.write(f"{key} {value:.3e}\n")
    overall = max(worst.values(), default=0.0)
    ok = overall <= tol
    out.write(f"configs {count} max_difference {overall:.3e} tol {tol:.1e} {'PASS' if ok else 'FAIL'}\n")
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_verify(args, out, parser) -> int:
    if args.config is None and args.random is None:
        parser.error("verify needs a config path or --random N")
    if args.config is not None:
        configs = [load_document(args.config).network]
    else:
        rng = np.random.default_rng(args.seed)
        configs = (random_config(rng) for _ in range(args.random))
    return run_verify(configs, out, args.tol)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="veil", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="all singles and coincidence probabilities as JSON")
    p.add_argument("config")

    p = sub.add_parser("sweep", help="probabilities over a 1-D parameter grid as CSV")
    p.add_argument("config")
    p.add_argument("--param")
    p.add_argument("--from", dest="start", type=float)
    p.add_argument("--to", type=float)
    p.add_argument("--points", type=int)

    p = sub.add_parser("solve", help="object-1 settings that hide object 2")
    p.add_argument("config")
    p.add_argument("--dual", action="store_true", help="also require A-I coincidences to ignore object 2")

    p = sub.add_parser("scan", help="object-2 independence scan under the condition")
    p.add_argument("config")
    p.add_argument("--solve", action="store_true", help="first set object 1 from the solver")

    p = sub.add_parser("verify", help="fast path vs brute-force oracle")
    p.add_argument("config", nargs="?")
    p.add_argument("--random", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=ORACLE)
    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "simulate":
            return cmd_simulate(args, out)
        if args.command == "sweep":
            return cmd_sweep(args, out, parser)
        if args.command == "solve":
            return cmd_solve(args, out)
        if args.command == "scan":
            return cmd_scan(args, out)
        return cmd_verify(args, out, parser)
    except SchemaError as exc:
        print(f"veil: schema error in {args.config}:\n{exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"veil: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PhysicsError as exc:
        print(f"veil: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PHYSICS
    except VeilError as exc:
        print(f"veil: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
