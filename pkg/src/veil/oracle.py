"""Brute-force reference path.

Works in the dense two-photon Fock space over a fixed set of rails. Every
element is written as a unitary on single-photon mode space, lifted to the
two-photon space through the symmetric embedding, and applied in sequence.
Detection statistics come from the full density matrix with the environment
traced out by explicit index summation. Nothing here reuses the graph walk,
the sparse state type or the block-wise trace of the fast path.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement

import numpy as np

from veil.algebra import CHECK
from veil.detection import COINCIDENCES, DETECTORS, ProbabilityReport
from veil.errors import AllCrystalsDead
from veil.network import NetworkConfig

# Signal rails keep their identity through the splitters: after BS_a rail s1
# carries A and rail s2 carries the link to BS_b; after BS_b s2 is B, s3 is C.
RAILS = ("s1", "s2", "s3", "idl", "v1", "v2")
LABELS = ("A", "B", "C", "I", "v1", "v2")
ENVIRONMENT_LABELS = ("v1", "v2")
M = len(RAILS)
_R = {name: i for i, name in enumerate(RAILS)}


@lru_cache(maxsize=None)
def pair_basis(modes: int = M) -> tuple[tuple[int, int], ...]:
    """Unordered pairs (i <= j), lexicographic in (i, j)."""
    return tuple(combinations_with_replacement(range(modes), 2))


@lru_cache(maxsize=None)
def symmetric_embedding(modes: int = M) -> np.ndarray:
    """Isometry from the pair basis into ``C^modes (x) C^modes``."""
    basis = pair_basis(modes)
    S = np.zeros((modes * modes, len(basis)), dtype=complex)
    for col, (i, j) in enumerate(basis):
        if i == j:
            S[i * modes + i, col] = 1.0
        else:
            S[i * modes + j, col] = S[j * modes + i, col] = 1.0 / math.sqrt(2.0)
    return S


def lift(U: np.ndarray) -> np.ndarray:
    """Two-photon action of a single-photon mode unitary."""
    S = symmetric_embedding(U.shape[0])
    return S.conj().T @ np.kron(U, U) @ S


def mode_unitary(block: np.ndarray, rails: tuple[str, ...]) -> np.ndarray:
    """Embed a small unitary acting on ``rails`` into the full mode space."""
    U = np.eye(M, dtype=complex)
    idx = [_R[r] for r in rails]
    U[np.ix_(idx, idx)] = block
    return U


def splitter_matrix(T: complex, R: complex) -> np.ndarray:
    # columns are inputs (x, y), rows outputs (u, w): x -> R u + T w, y -> T u + R w
    return np.array([[R, T], [T, R]], dtype=complex)


def object_matrix(T: float, phi: float, R: complex) -> np.ndarray:
    # columns: (beam, vacuum input); rows: (beam, environment)
    t = T * cmath.exp(1j * phi)
    return np.array([[t, -np.conj(R)], [R, np.conj(t)]], dtype=complex)


def phase_matrix(phi: float) -> np.ndarray:
    return np.array([[cmath.exp(1j * phi)]], dtype=complex)


@dataclass(frozen=True)
class FullFockState:
    labels: tuple[str, ...]
    vector: np.ndarray

    @property
    def dimension(self) -> int:
        return len(self.vector)

    def amplitudes(self, cutoff: float = 0.0) -> dict[tuple[str, str], complex]:
        out = {}
        for (i, j), amp in zip(pair_basis(len(self.labels)), self.vector):
            if abs(amp) > cutoff:
                out[(self.labels[i], self.labels[j])] = complex(amp)
        return out

    def dump(self) -> str:
        lines = []
        for (i, j), amp in zip(pair_basis(len(self.labels)), self.vector):
            lines.append(f"{self.labels[i]} {self.labels[j]} {amp.real:.17g} {amp.imag:.17g}")
        return "\n".join(lines) + "\n"


def seed(rail_signal: str, rail_idler: str) -> np.ndarray:
    basis = pair_basis()
    i, j = sorted((_R[rail_signal], _R[rail_idler]))
    vec = np.zeros(len(basis), dtype=complex)
    vec[basis.index((i, j))] = 1.0
    return vec


def branch_steps(config: NetworkConfig, k: int) -> list[np.ndarray]:
    """Mode unitaries met by the pair from crystal ``k``, in order."""
    d1, d2, d3 = config.delays
    a, b = config.bs_a, config.bs_b
    signal = [
        mode_unitary(phase_matrix(d1), ("s1",)),
        mode_unitary(phase_matrix(d3), ("s2",)),
        mode_unitary(splitter_matrix(a.T, a.R), ("s1", "s2")),
        mode_unitary(phase_matrix(d2), ("s2",)),
        mode_unitary(splitter_matrix(b.T, b.R), ("s2", "s3")),
    ]
    o1, o2 = config.object1, config.object2
    idler = [
        mode_unitary(object_matrix(o1.T, o1.phi, o1.R), ("idl", "v1")),
        mode_unitary(object_matrix(o2.T, o2.phi, o2.R), ("idl", "v2")),
    ]
    return signal + idler[k - 1:]


def evolve_branch(config: NetworkConfig, k: int, norm_tol: float | None = CHECK) -> tuple[np.ndarray, list[float]]:
    """Unit-norm pair from crystal ``k`` pushed through its downstream elements.

    Returns the final vector and the norm after every step; raises
    ``ArithmeticError`` if a step moves the norm by more than ``norm_tol``.
    """
    vec = seed(f"s{k}", "idl")
    norms = []
    for U in branch_steps(config, k):
        vec = lift(U) @ vec
        norm = float(np.linalg.norm(vec))
        norms.append(norm)
        if norm_tol is not None and abs(norm - 1.0) > norm_tol:
            raise ArithmeticError(f"oracle step broke normalization: {norm!r}")
    return vec, norms


def oracle_output_state(config: NetworkConfig) -> FullFockState:
    gammas = np.asarray(config.gammas, dtype=float)
    norm = math.sqrt(float(gammas @ gammas))
    if norm == 0.0:
        raise AllCrystalsDead("all crystal pair amplitudes are zero")
    total = np.zeros(len(pair_basis()), dtype=complex)
    for k, gamma in enumerate(gammas, start=1):
        if gamma:
            vec, _ = evolve_branch(config, k)
            total += gamma * vec
    return FullFockState(LABELS, total / norm)


def reduced_density_matrix(state: FullFockState, environment=ENVIRONMENT_LABELS):
    """Trace out ``environment`` from |psi><psi| by explicit index summation.

    Returns ``(configs, rho)`` where ``configs`` lists the detected-mode
    occupations (sorted label tuples) indexing the rows of ``rho``.
    """
    basis = pair_basis(len(state.labels))
    rho = np.outer(state.vector, state.vector.conj())
    split = []
    for i, j in basis:
        names = (state.labels[i], state.labels[j])
        env = tuple(sorted(n for n in names if n in environment))
        det = tuple(sorted(n for n in names if n not in environment))
        split.append((det, env))
    configs = sorted({det for det, _ in split})
    where = {c: n for n, c in enumerate(configs)}
    reduced = np.zeros((len(configs), len(configs)), dtype=complex)
    for p, (det_p, env_p) in enumerate(split):
        for q, (det_q, env_q) in enumerate(split):
            if env_p == env_q:
                reduced[where[det_p], where[det_q]] += rho[p, q]
    return configs, reduced


def oracle_probabilities(config: NetworkConfig) -> ProbabilityReport:
    configs, rho = reduced_density_matrix(oracle_output_state(config))
    populations = np.real(np.diag(rho))
    singles = {
        d: float(sum(p * occ.count(d) for occ, p in zip(configs, populations)))
        for d in DETECTORS
    }
    coincidences = {
        k: float(sum(p * occ.count(k[0]) * occ.count("I") for occ, p in zip(configs, populations)))
        for k in COINCIDENCES
    }
    return ProbabilityReport(singles, coincidences, float(np.dot(config.gammas, config.gammas)))


@dataclass(frozen=True)
class DiffReport:
    differences: dict[str, float]
    tol: float

    @property
    def max_difference(self) -> float:
        return max(self.differences.values())

    @property
    def passed(self) -> bool:
        return self.max_difference <= self.tol


def compare(fast: ProbabilityReport, oracle: ProbabilityReport, tol: float) -> DiffReport:
    a, b = fast.observables(), oracle.observables()
    return DiffReport({k: abs(a[k] - b[k]) for k in a}, tol)
