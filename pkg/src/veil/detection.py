"""Tracing out the environment modes and computing detection probabilities."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from veil.algebra import CHECK, ModeId, TwoPhotonState
from veil.errors import InvalidDetector
from veil.network import ENVIRONMENT, Network, output_state

DETECTORS = ("A", "B", "C", "I")
SIGNAL_DETECTORS = ("A", "B", "C")
COINCIDENCES = ("AI", "BI", "CI")


@dataclass(frozen=True)
class ReducedDensityState:
    """Ensemble left after tracing out the environment.

    Each block holds the (normalized) conditional pure state for one
    environment occupancy, keyed by the sorted environment mode names it
    contains; ``()`` is the block with no photon absorbed.
    """

    blocks: dict[tuple[str, ...], tuple[TwoPhotonState, float]]
    environment: tuple[str, ...] = ENVIRONMENT

    @property
    def total_weight(self) -> float:
        return math.fsum(w * s.norm_squared for s, w in self.blocks.values())


def _environment_key(pair: tuple[ModeId, ModeId], environment) -> tuple[str, ...]:
    return tuple(sorted(m.name for m in pair if m.name in environment))


def reduce(state: TwoPhotonState, environment: tuple[str, ...] = ENVIRONMENT) -> ReducedDensityState:
    """Partial trace over ``environment``.

    Pairs are grouped by which environment modes they occupy. Coherences
    between groups vanish under the trace; coherences inside a group survive.
    """
    groups: dict[tuple[str, ...], dict] = {}
    for pair, amp in state.items():
        groups.setdefault(_environment_key(pair, environment), {})[pair] = amp
    blocks = {}
    for key in sorted(groups):
        block = TwoPhotonState(groups[key])
        weight = block.norm_squared
        if weight > 0.0:
            blocks[key] = (block.scaled(1.0 / math.sqrt(weight)), weight)
    return ReducedDensityState(blocks, tuple(environment))


def _occupation(pair: tuple[ModeId, ModeId], name: str) -> int:
    return sum(1 for m in pair if m.name == name)


def singles_probability(rho: ReducedDensityState, detector: str) -> float:
    """Mean photon number <n_X> at one detector."""
    if detector not in DETECTORS:
        raise InvalidDetector(f"unknown detector {detector!r}; expected one of {DETECTORS}")
    terms = []
    for state, weight in rho.blocks.values():
        for pair, amp in state.items():
            n = _occupation(pair, detector)
            if n:
                terms.append(weight * n * abs(amp) ** 2)
    return math.fsum(terms)


def coincidence_probability(rho: ReducedDensityState, detector: str, idler: str = "I") -> float:
    """<n_X n_I> for a signal detector X."""
    if detector not in SIGNAL_DETECTORS:
        raise InvalidDetector(f"coincidences need a signal detector in {SIGNAL_DETECTORS}, got {detector!r}")
    if idler != "I":
        raise InvalidDetector(f"coincidences are taken with the idler detector I, got {idler!r}")
    terms = []
    for state, weight in rho.blocks.values():
        for pair, amp in state.items():
            n = _occupation(pair, detector) * _occupation(pair, idler)
            if n:
                terms.append(weight * n * abs(amp) ** 2)
    return math.fsum(terms)


@dataclass(frozen=True)
class ProbabilityReport:
    """Singles and signal-idler coincidence probabilities per generated pair.

    ``unnormalized`` holds the same quantities scaled by the squared
    normalization (sum of squared crystal amplitudes), which is the form the
    proportional rate expressions are usually written in.
    """

    singles: dict[str, float]
    coincidences: dict[str, float]
    norm_squared: float = 1.0
    unnormalized: dict[str, dict[str, float]] = field(default=None)

    def __post_init__(self):
        if self.unnormalized is None:
            object.__setattr__(
                self,
                "unnormalized",
                {
                    "singles": {k: v * self.norm_squared for k, v in self.singles.items()},
                    "coincidences": {k: v * self.norm_squared for k, v in self.coincidences.items()},
                },
            )

    def observables(self) -> dict[str, float]:
        """Flat view keyed ``P_A``, ..., ``P_I``, ``P_AI``, ..."""
        flat = {f"P_{k}": self.singles[k] for k in DETECTORS}
        flat.update({f"P_{k}": self.coincidences[k] for k in COINCIDENCES})
        return flat

    def invariant_violations(self, tol: float = CHECK) -> list[str]:
        problems = []
        signal_sum = sum(self.singles[k] for k in SIGNAL_DETECTORS)
        if abs(signal_sum - 1.0) > tol:
            problems.append(f"P_A+P_B+P_C = {signal_sum!r} != 1")
        for key in COINCIDENCES:
            bound = min(self.singles[key[0]], self.singles["I"]) + tol
            if self.coincidences[key] > bound:
                problems.append(f"P_{key} exceeds min(P_{key[0]}, P_I)")
        idler_sum = sum(self.coincidences.values())
        if abs(idler_sum - self.singles["I"]) > tol:
            problems.append(f"P_I = {self.singles['I']!r} != sum of coincidences {idler_sum!r}")
        return problems

    def to_dict(self) -> dict:
        return {
            "singles": dict(self.singles),
            "coincidences": dict(self.coincidences),
            "unnormalized": {k: dict(v) for k, v in self.unnormalized.items()},
        }


def report_from_rho(rho: ReducedDensityState, norm_squared: float = 1.0) -> ProbabilityReport:
    singles = {d: singles_probability(rho, d) for d in DETECTORS}
    coincidences = {k: coincidence_probability(rho, k[0]) for k in COINCIDENCES}
    return ProbabilityReport(singles, coincidences, norm_squared)


def full_report(network: Network) -> ProbabilityReport:
    report = report_from_rho(reduce(output_state(network)), network.config.norm**2)
    idler_sum = sum(report.coincidences.values())
    if abs(idler_sum - report.singles["I"]) > CHECK:
        raise ArithmeticError(f"idler singles {report.singles['I']!r} != coincidence sum {idler_sum!r}")
    return report
