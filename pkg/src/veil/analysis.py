"""Invisibility condition for object 2, parameter sweeps and independence scans.

Object 2 drops out of every signal-side rate when the combined crystal-1 and
crystal-2 amplitude heading towards BS_b vanishes::

    gamma1 * Ta * T1 * exp(i(delay1 + phi1_obj)) + gamma2 * Ra * exp(i delay3) = 0

Only the difference of the two delays enters, so it can be folded into the
object-1 phase. The companion condition that would hide object 2 from the A-I
coincidences swaps Ta and Ra; the two cannot hold together.
"""

from __future__ import annotations

import cmath
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from veil.algebra import CHECK
from veil.detection import ProbabilityReport, full_report
from veil.elements import BeamSplitterSpec, ObjectSpec, reduce_angle
from veil.errors import ConditionNotSatisfied, DegenerateSplitter, Infeasible, InvalidAmplitude, UnknownParameter
from veil.network import PARAMETERS, NetworkConfig, build_network


@dataclass(frozen=True)
class InvisibilitySolution:
    T1: float
    phi1: float
    residual: float


def _check_inputs(gamma1: float, gamma2: float, bs_a: BeamSplitterSpec) -> None:
    if not gamma1 > 0:
        raise InvalidAmplitude(f"gamma1 must be positive, got {gamma1!r}")
    if gamma2 < 0:
        raise InvalidAmplitude(f"gamma2 must be non-negative, got {gamma2!r}")
    if abs(bs_a.T) == 0.0 or abs(bs_a.R) == 0.0:
        raise DegenerateSplitter("BS_a must split: T_a and R_a both nonzero")


def condition_residual(gamma1, gamma2, bs_a, T1, phi1_obj, delays=(0.0, 0.0)) -> float:
    """|gamma1 Ta T1 e^{i(delay1+phi1)} + gamma2 Ra e^{i delay3}|."""
    d1, d3 = delays
    return abs(gamma1 * bs_a.T * T1 * cmath.exp(1j * (d1 + phi1_obj)) + gamma2 * bs_a.R * cmath.exp(1j * d3))


def _implied_phase(gamma1, gamma2, upper, lower, delays) -> float:
    # phase of e^{i phi1} solving gamma1 * lower * T1 e^{i(d1+phi1)} = -gamma2 * upper * e^{i d3}
    d1, d3 = delays
    return reduce_angle(cmath.phase(-gamma2 * upper / (gamma1 * lower) * cmath.exp(1j * (d3 - d1))))


def solve_invisibility(
    gamma1: float,
    gamma2: float,
    bs_a: BeamSplitterSpec,
    delays: tuple[float, float] = (0.0, 0.0),
) -> InvisibilitySolution:
    """Closed-form object-1 transmissivity and phase that hide object 2.

    ``delays`` is (delay on s1, delay on s2). Raises :class:`Infeasible` when
    the required transmissivity exceeds one.
    """
    _check_inputs(gamma1, gamma2, bs_a)
    required = gamma2 * abs(bs_a.R) / (gamma1 * abs(bs_a.T))
    if required > 1.0 + CHECK:
        raise Infeasible(required)
    T1 = min(required, 1.0)
    phi1 = _implied_phase(gamma1, gamma2, bs_a.R, bs_a.T, delays) if gamma2 > 0 else 0.0
    return InvisibilitySolution(T1, phi1, condition_residual(gamma1, gamma2, bs_a, T1, phi1, delays))


def condition_magnitude(config: NetworkConfig) -> float:
    d1, _, d3 = config.delays
    g1, g2, _ = config.gammas
    return condition_residual(g1, g2, config.bs_a, config.object1.T, config.object1.phi, (d1, d3))


def check_invisibility(config: NetworkConfig, tol: float = CHECK) -> bool:
    return condition_magnitude(config) <= tol


def apply_solution(config: NetworkConfig, solution: InvisibilitySolution) -> NetworkConfig:
    return replace(config, object1=ObjectSpec(solution.T1, solution.phi1))


@dataclass(frozen=True)
class DualConditionResult:
    """Outcome of trying to hide object 2 from B/C and from A-I at once.

    ``phase_first``/``phase_second`` are the object-1 phases each condition
    alone would need, ``phase_gap`` their circular separation.
    """

    feasible: bool
    phase_first: float | None = None
    phase_second: float | None = None
    phase_gap: float | None = None
    T1_first: float | None = None
    T1_second: float | None = None
    degenerate: bool = False

    def to_dict(self) -> dict:
        return {k: v for k, v in self.__dict__.items() if v is not None}


def _circular_gap(a: float, b: float) -> float:
    gap = abs(reduce_angle(a - b))
    return min(gap, 2 * math.pi - gap)


def dual_condition_feasibility(
    gamma1: float,
    gamma2: float,
    bs_a: BeamSplitterSpec,
    delays: tuple[float, float] = (0.0, 0.0),
) -> DualConditionResult:
    _check_inputs(gamma1, gamma2, bs_a)
    if gamma2 == 0.0:
        # T1 = 0 zeroes both left-hand sides
        return DualConditionResult(True, T1_first=0.0, T1_second=0.0, degenerate=True)
    first = _implied_phase(gamma1, gamma2, bs_a.R, bs_a.T, delays)
    second = _implied_phase(gamma1, gamma2, bs_a.T, bs_a.R, delays)
    gap = _circular_gap(first, second)
    t_first = gamma2 * abs(bs_a.R) / (gamma1 * abs(bs_a.T))
    t_second = gamma2 * abs(bs_a.T) / (gamma1 * abs(bs_a.R))
    # a common solution needs both the same phase and the same magnitude
    feasible = gap <= CHECK and abs(t_first - t_second) <= CHECK and t_first <= 1.0 + CHECK
    return DualConditionResult(feasible, first, second, gap, t_first, t_second)


@dataclass(frozen=True)
class SweepTable:
    parameter: str
    grid: list[float]
    rows: list[ProbabilityReport]

    def column(self, observable: str) -> np.ndarray:
        return np.array([row.observables()[observable] for row in self.rows])


def _worker_count(max_workers: int | None) -> int:
    if max_workers is None:
        max_workers = int(os.environ.get("VEIL_THREADS", "0") or 0)
    return max_workers if max_workers > 0 else (os.cpu_count() or 1)


def sweep(
    template: NetworkConfig,
    parameter: str,
    grid: Sequence[float],
    max_workers: int | None = None,
) -> SweepTable:
    """Full report at every grid value of one parameter, in grid order.

    ``max_workers`` defaults to ``$VEIL_THREADS`` (0 or unset means one per CPU).
    """
    if parameter not in PARAMETERS:
        raise UnknownParameter(f"unknown parameter {parameter!r}; expected one of {', '.join(PARAMETERS)}")
    grid = [float(x) for x in grid]
    if not grid:
        raise ValueError("sweep grid is empty")
    configs = [template.with_param(parameter, x) for x in grid]
    workers = min(_worker_count(max_workers), len(configs))
    if workers <= 1:
        rows = [full_report(build_network(c)) for c in configs]
    else:
        with ThreadPoolExecutor(workers) as pool:
            rows = list(pool.map(lambda c: full_report(build_network(c)), configs))
    return SweepTable(parameter, grid, rows)


INVARIANT_OBSERVABLES = ("P_A", "P_B", "P_C", "P_BI", "P_CI")
T2_DEPENDENT_OBSERVABLES = ("P_I", "P_AI")


@dataclass(frozen=True)
class QuadraticFit:
    """Least-squares fit ``value ~ intercept + slope * T2**2``."""

    intercept: float
    slope: float
    residual: float


@dataclass(frozen=True)
class ScanReport:
    max_deviation: dict[str, float]
    values: dict[str, float]
    fits: dict[str, QuadraticFit]

    def to_dict(self) -> dict:
        return {
            "max_deviation": dict(self.max_deviation),
            "values": dict(self.values),
            "fits": {k: vars(f).copy() for k, f in self.fits.items()},
        }


def object2_independence_scan(
    config: NetworkConfig,
    t2_grid: Sequence[float],
    phi2_grid: Sequence[float],
    tol: float = CHECK,
) -> ScanReport:
    """Vary object 2 over a (T2, phase) grid under the invisibility condition."""
    if not check_invisibility(config, tol):
        raise ConditionNotSatisfied(f"condition magnitude {condition_magnitude(config):.3e} exceeds {tol:.1e}")
    t2s, observations = [], []
    for t2 in t2_grid:
        for phi2 in phi2_grid:
            cfg = replace(config, object2=ObjectSpec(t2, phi2))
            observations.append(full_report(build_network(cfg)).observables())
            t2s.append(float(t2))
    spread = {}
    values = {}
    for name in INVARIANT_OBSERVABLES:
        column = np.array([o[name] for o in observations])
        spread[name] = float(column.max() - column.min())
        values[name] = float(column.mean())
    design = np.column_stack([np.ones(len(t2s)), np.square(t2s)])
    fits = {}
    for name in T2_DEPENDENT_OBSERVABLES:
        column = np.array([o[name] for o in observations])
        coef, *_ = np.linalg.lstsq(design, column, rcond=None)
        residual = float(np.max(np.abs(design @ coef - column)))
        fits[name] = QuadraticFit(float(coef[0]), float(coef[1]), residual)
    return ScanReport(spread, values, fits)
