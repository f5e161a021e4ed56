"""The three-crystal interferometer as a weighted directed graph.

Each pump photon is converted into a signal/idler seed by its crystal; the two
seeds are then pushed through the graph independently (single-photon linear
optics) and recombined as a bilinear two-photon term. Summing the three pump
branches, weighted by the crystal pair amplitudes, gives the output state.

Signal side::

    s1 -[delay1]-> BS_a <-[delay3]- s2
                   |   \\
                   A    mid -[delay2]-> BS_b <- s3
                                        |    \\
                                        B     C

Idler side (idler beams are aligned, i.e. identified as one mode)::

    i1 -[object 1]-> j <- i2,   j -[object 2]-> I <- i3
              \\-> v1                   \\-> v2
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field, replace
from graphlib import TopologicalSorter
from typing import Mapping

import numpy as np

from veil.algebra import (
    LinearForm,
    ModeRegistry,
    TwoPhotonState,
    bilinear_product,
    state_add,
)
from veil.elements import (
    BeamSplitterSpec,
    CrystalSpec,
    ObjectSpec,
    PhaseSpec,
    balanced_bs,
    spdc_split,
    validate_bs,
)
from veil.errors import AllCrystalsDead, InvalidAmplitude, InvalidWiring, UnknownParameter

MODE_NAMES = ("p1", "p2", "p3", "A", "B", "C", "I", "v1", "v2", "u1", "u2")
SIGNAL_OUTPUTS = ("A", "B", "C")
IDLER_OUTPUTS = ("I", "v1", "v2")
ENVIRONMENT = ("v1", "v2")
CRYSTAL_PORTS = (("s1", "i1"), ("s2", "i2"), ("s3", "i3"))

PARAMETERS = ("phi1_obj", "T1", "T2", "phi2_obj", "phi1", "phi2", "phi3", "gamma1", "gamma2", "gamma3")


@dataclass(frozen=True)
class NetworkConfig:
    """Full description of one experiment.

    ``gammas`` are the crystal pair amplitudes; zero switches a crystal off.
    ``delays`` are the signal path delays (on s1, between the splitters, on s2).
    Object phases live on the objects themselves.
    """

    gammas: tuple[float, float, float] = (1.0, 1.0, 1.0)
    bs_a: BeamSplitterSpec = field(default_factory=lambda: balanced_bs("a"))
    bs_b: BeamSplitterSpec = field(default_factory=lambda: balanced_bs("b"))
    object1: ObjectSpec = field(default_factory=lambda: ObjectSpec(1.0, 0.0))
    object2: ObjectSpec = field(default_factory=lambda: ObjectSpec(1.0, 0.0))
    delays: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self):
        gammas = tuple(self.gammas)
        if len(gammas) != 3:
            raise InvalidWiring(f"expected 3 crystal amplitudes, got {len(gammas)}")
        for k, g in enumerate(gammas, start=1):
            if isinstance(g, complex):
                raise InvalidAmplitude(f"gamma{k} must be real, got {g!r}")
            if not math.isfinite(g) or g < 0:
                raise InvalidAmplitude(f"gamma{k} must be finite and non-negative, got {g!r}")
        delays = tuple(float(d) for d in self.delays)
        if len(delays) != 3 or not all(math.isfinite(d) for d in delays):
            raise InvalidAmplitude(f"delays must be three finite angles, got {self.delays!r}")
        object.__setattr__(self, "gammas", tuple(float(g) for g in gammas))
        object.__setattr__(self, "delays", delays)

    @property
    def norm(self) -> float:
        return math.sqrt(sum(g * g for g in self.gammas))

    def with_param(self, name: str, value: float) -> NetworkConfig:
        """Copy with one named scalar parameter replaced."""
        if name == "phi1_obj":
            return replace(self, object1=ObjectSpec(self.object1.T, value))
        if name == "T1":
            return replace(self, object1=ObjectSpec(value, self.object1.phi))
        if name == "phi2_obj":
            return replace(self, object2=ObjectSpec(self.object2.T, value))
        if name == "T2":
            return replace(self, object2=ObjectSpec(value, self.object2.phi))
        if name in ("phi1", "phi2", "phi3"):
            delays = list(self.delays)
            delays[int(name[-1]) - 1] = value
            return replace(self, delays=tuple(delays))
        if name in ("gamma1", "gamma2", "gamma3"):
            gammas = list(self.gammas)
            gammas[int(name[-1]) - 1] = value
            return replace(self, gammas=tuple(gammas))
        raise UnknownParameter(f"unknown parameter {name!r}; expected one of {', '.join(PARAMETERS)}")


def random_config(rng: np.random.Generator) -> NetworkConfig:
    """Draw a valid configuration: gammas in (0, 2], T in [0, 1], phases in [0, 2pi)."""

    def splitter(label):
        theta, alpha = rng.uniform(0.0, 2 * math.pi, size=2)
        phase = complex(math.cos(alpha), math.sin(alpha))
        return validate_bs(math.cos(theta) * phase, 1j * math.sin(theta) * phase, label)

    gammas = tuple(2.0 - rng.uniform(0.0, 2.0, size=3))
    t1, t2 = rng.uniform(0.0, 1.0, size=2)
    p1, p2 = rng.uniform(0.0, 2 * math.pi, size=2)
    return NetworkConfig(
        gammas=gammas,
        bs_a=splitter("a"),
        bs_b=splitter("b"),
        object1=ObjectSpec(t1, p1),
        object2=ObjectSpec(t2, p2),
        delays=tuple(rng.uniform(0.0, 2 * math.pi, size=3)),
    )


@dataclass(frozen=True)
class PumpBranch:
    signal: LinearForm
    idler: LinearForm
    weight: float

    def state(self) -> TwoPhotonState:
        return bilinear_product(self.signal, self.idler, self.weight)


class Network:
    """Validated wiring of one configuration. Build with :func:`build_network`."""

    def __init__(self, config: NetworkConfig):
        self.config = config
        self.modes = ModeRegistry(MODE_NAMES)
        self.ports = ModeRegistry(name for pair in CRYSTAL_PORTS for name in pair)
        self.bs_a = validate_bs(config.bs_a.T, config.bs_a.R, "a")
        self.bs_b = validate_bs(config.bs_b.T, config.bs_b.R, "b")
        self.crystals = [CrystalSpec(g) if g > 0 else None for g in config.gammas]
        delay1, delay2, delay3 = (PhaseSpec(d) for d in config.delays)

        edges = [
            *delay1.edges("s1", "s1'"),
            *delay3.edges("s2", "s2'"),
            *self.bs_a.edges(("s1'", "s2'"), ("A", "mid")),
            *delay2.edges("mid", "mid'"),
            *self.bs_b.edges(("mid'", "s3"), ("B", "C")),
            *config.object1.edges("i1", "j", "v1"),
            ("i2", "j", 1.0),
            *config.object2.edges("j", "I", "v2"),
            ("i3", "I", 1.0),
        ]
        self.graph: dict[str, list[tuple[str, complex]]] = defaultdict(list)
        predecessors: dict[str, set[str]] = defaultdict(set)
        for src, dst, amp in edges:
            self.graph[src].append((dst, complex(amp)))
            predecessors[dst].add(src)
            predecessors.setdefault(src, set())
        self.order = tuple(TopologicalSorter(predecessors).static_order())
        sinks = {n for n in self.order if not self.graph.get(n)}
        if sinks != set(SIGNAL_OUTPUTS) | set(IDLER_OUTPUTS):
            raise InvalidWiring(f"unexpected graph sinks {sorted(sinks)}")

    def walk(self, form: LinearForm) -> LinearForm:
        """Push a single-photon form over crystal ports through the graph."""
        acc: dict[str, complex] = defaultdict(complex)
        for port, amp in form.items():
            acc[port.name] += amp
        out = {}
        for node in self.order:
            amp = acc.pop(node, 0j)
            children = self.graph.get(node)
            if not children:
                if amp != 0:
                    out[self.modes[node]] = amp
                continue
            for child, coeff in children:
                acc[child] += coeff * amp
        return LinearForm(out)

    def __repr__(self) -> str:
        return f"Network(gammas={self.config.gammas}, modes={len(self.modes)})"


def build_network(config: NetworkConfig) -> Network:
    return Network(config)


def propagate_pump(network: Network, k: int) -> PumpBranch:
    """Signal and idler output forms of the pair created by crystal ``k`` (1-based)."""
    if k not in (1, 2, 3):
        raise InvalidWiring(f"crystal index must be 1, 2 or 3, got {k!r}")
    signal_port, idler_port = CRYSTAL_PORTS[k - 1]
    gamma = network.config.gammas[k - 1]
    crystal = network.crystals[k - 1]
    if crystal is None:
        signal, idler = LinearForm({network.ports[signal_port]: 1.0}), LinearForm({network.ports[idler_port]: 1.0})
    else:
        signal, idler, gamma = spdc_split(crystal, network.ports[signal_port], network.ports[idler_port])
    return PumpBranch(network.walk(signal), network.walk(idler), gamma)


def branch_states(network: Network) -> list[TwoPhotonState]:
    """The three weighted, unnormalized pump-branch states."""
    return [propagate_pump(network, k).state() for k in (1, 2, 3)]


def output_state(network: Network, normalized: bool = True) -> TwoPhotonState:
    norm = network.config.norm
    if norm == 0.0:
        raise AllCrystalsDead("all crystal pair amplitudes are zero")
    total = TwoPhotonState()
    for branch in branch_states(network):
        total = state_add(total, branch)
    return total.scaled(1.0 / norm) if normalized else total


def output_amplitudes(network: Network, normalized: bool = True) -> Mapping[tuple[str, str], complex]:
    return output_state(network, normalized).by_name()

