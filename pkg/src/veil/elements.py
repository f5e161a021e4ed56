"""Optical elements: beam splitters, absorbing objects, delays and crystals."""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field
from typing import Hashable

from veil.algebra import CHECK, LinearForm, ModeId, check_finite
from veil.errors import (
    DeadCrystal,
    InvalidAmplitude,
    InvalidTransmissivity,
    InvalidWiring,
    NonUnitary,
)

TWO_PI = 2.0 * math.pi

# (source node, target node, amplitude)
Edge = tuple[Hashable, Hashable, complex]

# Phase of the object reflection coefficient. Only |R|^2 of an object ever
# reaches a detection rate, so any unit phase here is observationally equivalent.
OBJECT_REFLECTION_PHASE = 1j


def reduce_angle(phi: float) -> float:
    """Map an angle to [0, 2pi); an exact 2pi after rounding becomes 0."""
    phi = math.fmod(float(phi), TWO_PI)
    if phi < 0.0:
        phi += TWO_PI
    if phi >= TWO_PI:
        phi = 0.0
    return phi


@dataclass(frozen=True)
class BeamSplitterSpec:
    """Lossless splitter with transmission ``T`` and reflection ``R``.

    Port convention: for inputs ``(x, y)`` and outputs ``(u, w)``,
    ``x -> R u + T w`` and ``y -> T u + R w``.
    """

    T: complex
    R: complex
    label: str = ""

    def edges(self, inputs: tuple[Hashable, Hashable], outputs: tuple[Hashable, Hashable]) -> list[Edge]:
        x, y = inputs
        u, w = outputs
        return [(x, u, self.R), (x, w, self.T), (y, u, self.T), (y, w, self.R)]


def validate_bs(T: complex, R: complex, label: str = "") -> BeamSplitterSpec:
    T = check_finite(T, "T")
    R = check_finite(R, "R")
    failures = {}
    power = abs(T) ** 2 + abs(R) ** 2 - 1.0
    if abs(power) > CHECK:
        failures["|T|^2+|R|^2=1"] = abs(power)
    phase = T * R.conjugate() + T.conjugate() * R
    if abs(phase) > CHECK:
        failures["TR*+T*R=0"] = abs(phase)
    if failures:
        raise NonUnitary(failures)
    return BeamSplitterSpec(T, R, label)


def balanced_bs(label: str = "") -> BeamSplitterSpec:
    s = math.sqrt(0.5)
    return BeamSplitterSpec(complex(s, 0.0), complex(0.0, s), label)


@dataclass(frozen=True)
class ObjectSpec:
    """Partially transparent object, modelled as a splitter into an environment mode."""

    T: float
    phi: float = 0.0
    R: complex = field(init=False)

    def __post_init__(self):
        T = float(self.T)
        if not (0.0 <= T <= 1.0) or math.isnan(T):
            raise InvalidTransmissivity(f"object transmissivity must lie in [0, 1], got {self.T!r}")
        if not math.isfinite(self.phi):
            raise InvalidAmplitude(f"object phase is not finite: {self.phi!r}")
        object.__setattr__(self, "T", T)
        object.__setattr__(self, "phi", float(self.phi))
        object.__setattr__(self, "R", OBJECT_REFLECTION_PHASE * math.sqrt(1.0 - T * T))

    @property
    def transmitted(self) -> complex:
        return self.T * cmath.exp(1j * self.phi)

    def edges(self, inp: Hashable, out: Hashable, env: Hashable) -> list[Edge]:
        return [(inp, out, self.transmitted), (inp, env, self.R)]


def object_as_bs(T: float, phi: float = 0.0) -> ObjectSpec:
    return ObjectSpec(T, phi)


@dataclass(frozen=True)
class PhaseSpec:
    phi: float

    def __post_init__(self):
        if not math.isfinite(self.phi):
            raise InvalidAmplitude(f"phase is not finite: {self.phi!r}")
        object.__setattr__(self, "phi", reduce_angle(self.phi))

    @property
    def factor(self) -> complex:
        return cmath.exp(1j * self.phi)

    def edges(self, inp: Hashable, out: Hashable) -> list[Edge]:
        return [(inp, out, self.factor)]


def effective_gamma(alpha: float, g: float) -> float:
    """Pair amplitude of a crystal from its pump amplitude and conversion efficiency."""
    if alpha < 0 or g < 0:
        raise InvalidAmplitude(f"alpha and g must be non-negative, got alpha={alpha!r}, g={g!r}")
    gamma = float(alpha) * float(g)
    if not math.isfinite(gamma):
        raise InvalidAmplitude(f"gamma is not finite: {gamma!r}")
    if gamma == 0.0:
        warnings.warn("crystal has zero pair amplitude and contributes nothing", DeadCrystal, stacklevel=2)
    return gamma


@dataclass(frozen=True)
class CrystalSpec:
    gamma: float
    alpha: float | None = None
    g: float | None = None

    def __post_init__(self):
        if isinstance(self.gamma, complex):
            raise InvalidAmplitude("gamma must be real")
        gamma = float(self.gamma)
        if not math.isfinite(gamma) or gamma <= 0.0:
            raise InvalidAmplitude(f"gamma must be positive and finite, got {self.gamma!r}")
        if (self.alpha is None) != (self.g is None):
            raise InvalidAmplitude("alpha and g must be given together")
        if self.alpha is not None and abs(self.alpha * self.g - gamma) > 1e-15 * max(1.0, gamma):
            raise InvalidAmplitude(f"gamma {gamma!r} != alpha*g {self.alpha * self.g!r}")
        object.__setattr__(self, "gamma", gamma)

    @classmethod
    def from_pump(cls, alpha: float, g: float) -> CrystalSpec:
        return cls(effective_gamma(alpha, g), alpha, g)


def spdc_split(crystal: CrystalSpec, signal_seed: ModeId, idler_seed: ModeId) -> tuple[LinearForm, LinearForm, float]:
    """Seed of one pump branch: a_p^dag -> gamma * a_s^dag a_i^dag."""
    if signal_seed == idler_seed:
        raise InvalidWiring(f"signal and idler seeds coincide ({signal_seed.name})")
    return LinearForm({signal_seed: 1.0}), LinearForm({idler_seed: 1.0}), crystal.gamma
