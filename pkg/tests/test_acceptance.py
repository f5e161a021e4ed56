"""Exit criteria, one test each. A summary line per criterion is printed at the end of the run."""

import math
import time
from dataclasses import replace

import numpy as np

from closed_form import zero_delay_amplitudes
from conftest import ACCEPTANCE_LINES
from draws import feasible_draw
from veil.algebra import inner_product
from veil.analysis import (
    apply_solution,
    dual_condition_feasibility,
    object2_independence_scan,
    solve_invisibility,
    sweep,
)
from veil.detection import full_report
from veil.elements import ObjectSpec, balanced_bs
from veil.network import NetworkConfig, branch_states, build_network, output_state, random_config
from veil.oracle import compare, oracle_probabilities

T_GRID = np.linspace(0, 1, 9)
PHI_GRID = np.linspace(0, 2 * math.pi, 9)
PHASES_33 = np.linspace(0, 2 * math.pi, 33)


def record(number, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_1_fringe_law():
    start = time.perf_counter()
    worst = 0.0
    base = NetworkConfig(gammas=(1.0, 1.0, 0.0))
    for T1 in (0.0, 0.25, 0.5, 0.75, 1.0):
        table = sweep(base.with_param("T1", T1), "phi1_obj", PHASES_33, max_workers=1)
        worst = max(worst, float(np.max(np.abs(table.column("P_A") - (1 - T1 * np.sin(PHASES_33)) / 2))))
    elapsed = time.perf_counter() - start
    record(1, "singles at A follow (1 - T1 sin phi1)/2", worst <= 1e-12 and elapsed < 1.0,
           f"max dev {worst:.2e} <= 1e-12, {elapsed:.3f}s < 1s")


def test_2_invisibility():
    start = time.perf_counter()
    solution = solve_invisibility(1.0, 1.0, balanced_bs())
    cfg = apply_solution(NetworkConfig(), solution)
    scan = object2_independence_scan(cfg, T_GRID, PHI_GRID)
    elapsed = time.perf_counter() - start
    expected = {"P_A": 2 / 3, "P_B": 1 / 6, "P_C": 1 / 6, "P_BI": 1 / 6, "P_CI": 1 / 6}
    oracle_dev = 0.0
    for t2 in T_GRID:
        for phi2 in PHI_GRID:
            obs = oracle_probabilities(replace(cfg, object2=ObjectSpec(t2, phi2))).observables()
            oracle_dev = max(oracle_dev, max(abs(obs[k] - v) for k, v in expected.items()))
    spread = max(scan.max_deviation.values())
    value_dev = max(abs(scan.values[k] - v) for k, v in expected.items())
    ok = (
        solution.T1 == 1.0
        and abs(solution.phi1 - 3 * math.pi / 2) <= 1e-12
        and spread <= 1e-12
        and value_dev <= 1e-12
        and oracle_dev <= 1e-9
        and elapsed < 1.0
    )
    record(2, "object 2 invisible to P_A, P_B, P_C, P_BI, P_CI", ok,
           f"T1={solution.T1}, phi1={solution.phi1:.12f}, spread {spread:.2e}, value dev {value_dev:.2e}, "
           f"oracle dev {oracle_dev:.2e}, {elapsed:.3f}s")


def test_3_residual_detectability():
    cfg = apply_solution(NetworkConfig(), solve_invisibility(1.0, 1.0, balanced_bs()))
    scan = object2_independence_scan(cfg, T_GRID, PHI_GRID)
    ai = scan.fits["P_AI"]
    worst_ai = worst_i = 0.0
    for t2 in T_GRID:
        for phi2 in PHI_GRID:
            r = full_report(build_network(replace(cfg, object2=ObjectSpec(t2, phi2))))
            worst_ai = max(worst_ai, abs(r.coincidences["AI"] - 2 / 3 * t2**2))
            worst_i = max(worst_i, abs(r.singles["I"] - (1 / 3 + 2 / 3 * t2**2)))
    ok = (
        abs(ai.slope - 2 / 3) <= 1e-12
        and abs(ai.intercept) <= 1e-12
        and ai.residual <= 1e-12
        and worst_ai <= 1e-12
        and worst_i <= 1e-12
    )
    record(3, "P_AI = (2/3) T2^2 and P_I = 1/3 + (2/3) T2^2", ok,
           f"slope {ai.slope:.15f}, fit residual {ai.residual:.2e}, pointwise {worst_ai:.2e} / {worst_i:.2e}")


def test_4_general_reduces_to_zero_delay_form():
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(50):
        cfg = replace(random_config(rng), delays=(0.0, 0.0, 0.0))
        got = output_state(build_network(cfg)).by_name()
        want = zero_delay_amplitudes(cfg)
        worst = max(worst, max(abs(got.get(k, 0) - want.get(k, 0)) for k in set(got) | set(want)))
    record(4, "zero-delay output state matches hand-coded amplitudes", worst <= 1e-12,
           f"50 draws, max |diff| {worst:.2e} <= 1e-12")


def test_5_oracle_equivalence():
    rng = np.random.default_rng(42)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(100):
        cfg = random_config(rng)
        worst = max(worst, compare(full_report(build_network(cfg)), oracle_probabilities(cfg), 1e-9).max_difference)
    elapsed = time.perf_counter() - start
    record(5, "fast path equals full-Fock brute force", worst <= 1e-9 and elapsed < 10.0,
           f"100 configs, max diff {worst:.2e} <= 1e-9, {elapsed:.2f}s < 10s")


def test_6_conservation():
    rng = np.random.default_rng(6)
    norm_dev = signal_dev = idler_dev = overlap = 0.0
    for _ in range(200):
        net = build_network(random_config(rng))
        norm_dev = max(norm_dev, abs(output_state(net).norm_squared - 1))
        r = full_report(net)
        signal_dev = max(signal_dev, abs(r.singles["A"] + r.singles["B"] + r.singles["C"] - 1))
        idler_dev = max(idler_dev, abs(r.singles["I"] - sum(r.coincidences.values())))
        b = branch_states(net)
        overlap = max(overlap, *(abs(inner_product(b[m], b[n])) for m, n in ((0, 1), (0, 2), (1, 2))))
    ok = max(norm_dev, signal_dev, idler_dev, overlap) <= 1e-12
    record(6, "norm, signal sum, idler sum, branch orthogonality", ok,
           f"200 configs, devs {norm_dev:.1e} / {signal_dev:.1e} / {idler_dev:.1e} / {overlap:.1e} <= 1e-12")


def test_7_mutual_exclusivity():
    rng = np.random.default_rng(77)
    worst_gap = 0.0
    infeasible = 0
    for _ in range(100):
        g1, g2, bs = feasible_draw(rng)
        solve_invisibility(g1, g2, bs)
        d1, d3 = rng.uniform(0, 2 * math.pi, size=2)
        result = dual_condition_feasibility(g1, g2, bs, (d1, d3))
        infeasible += not result.feasible
        worst_gap = max(worst_gap, abs(result.phase_gap - math.pi))
    ok = infeasible == 100 and worst_gap <= 1e-12
    record(7, "the two cancellation conditions never hold together", ok,
           f"{infeasible}/100 infeasible, max |gap - pi| {worst_gap:.2e}")


def test_8_two_crystal_reduction():
    cfg = NetworkConfig(gammas=(1.0, 1.0, 0.0), object1=ObjectSpec(0.0))
    values = []
    for name in ("phi1_obj", "phi1", "phi3"):
        values += list(sweep(cfg, name, PHASES_33, max_workers=1).column("P_A"))
    spread = max(values) - min(values)
    record(8, "opaque object 1 removes the fringe at A", spread <= 1e-12,
           f"P_A spread {spread:.2e} <= 1e-12 over 33-point phase grids")
