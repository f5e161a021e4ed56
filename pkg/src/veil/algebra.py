"""Mode bookkeeping, single-photon linear forms and two-photon states.

Amplitudes are plain Python ``complex`` values. A two-photon state is a sparse
map from an unordered mode pair to its amplitude in the normalized Fock basis,
so the probability weight of an entry is always ``abs(amp) ** 2``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping

from veil.errors import DuplicateMode, InvalidAmplitude

PRUNE = 1e-15
CHECK = 1e-12
ORACLE = 1e-9

SQRT2 = math.sqrt(2.0)


def check_finite(value: complex, what: str = "amplitude") -> complex:
    value = complex(value)
    if not (cmath.isfinite(value)):
        raise InvalidAmplitude(f"{what} is not finite: {value!r}")
    return value


@dataclass(frozen=True, order=True)
class ModeId:
    index: int
    name: str = field(compare=False)

    def __str__(self) -> str:
        return self.name


class ModeRegistry:
    """Dense, name-unique collection of bosonic modes."""

    def __init__(self, names: Iterable[str] = ()):
        self._modes: list[ModeId] = []
        self._by_name: dict[str, ModeId] = {}
        for name in names:
            self.register(name)

    def register(self, name: str) -> ModeId:
        if name in self._by_name:
            raise DuplicateMode(f"mode {name!r} already registered")
        mode = ModeId(len(self._modes), name)
        self._modes.append(mode)
        self._by_name[name] = mode
        return mode

    def __getitem__(self, name: str) -> ModeId:
        return self._by_name[name]

    def __contains__(self, name: object) -> bool:
        return name in self._by_name

    def __len__(self) -> int:
        return len(self._modes)

    def __iter__(self) -> Iterator[ModeId]:
        return iter(self._modes)

    @property
    def names(self) -> list[str]:
        return [m.name for m in self._modes]


def register_mode(registry: ModeRegistry, name: str) -> ModeId:
    return registry.register(name)


def _pruned(terms: Mapping) -> dict:
    out = {}
    for key, amp in terms.items():
        amp = check_finite(amp)
        if abs(amp) >= PRUNE:
            out[key] = amp
    return out


class LinearForm:
    """A linear combination of single-photon creation operators."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[ModeId, complex] | None = None):
        self._terms = MappingProxyType(_pruned(terms or {}))

    @property
    def terms(self) -> Mapping[ModeId, complex]:
        return self._terms

    def __getitem__(self, mode: ModeId) -> complex:
        return self._terms.get(mode, 0j)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[ModeId]:
        return iter(self._terms)

    def items(self):
        return self._terms.items()

    def __add__(self, other: LinearForm) -> LinearForm:
        acc = dict(self._terms)
        for mode, amp in other.items():
            acc[mode] = acc.get(mode, 0j) + amp
        return LinearForm(acc)

    def scaled(self, factor: complex) -> LinearForm:
        return LinearForm({m: factor * a for m, a in self._terms.items()})

    @property
    def norm_squared(self) -> float:
        return math.fsum(abs(a) ** 2 for a in self._terms.values())

    def __repr__(self) -> str:
        body = ", ".join(f"{m.name}: {a:.6g}" for m, a in sorted(self._terms.items()))
        return f"LinearForm({{{body}}})"


def pair_key(x: ModeId, y: ModeId) -> tuple[ModeId, ModeId]:
    return (x, y) if x <= y else (y, x)


class TwoPhotonState:
    """Sparse two-photon ket over unordered mode pairs.

    Entries are Fock-basis amplitudes: ``amps[(x, y)]`` multiplies the
    normalized ket ``|1_x 1_y>`` (or ``|2_x>`` when ``x == y``).
    """

    __slots__ = ("_amps",)

    def __init__(self, amps: Mapping[tuple[ModeId, ModeId], complex] | None = None):
        acc: dict[tuple[ModeId, ModeId], complex] = {}
        for (x, y), amp in (amps or {}).items():
            key = pair_key(x, y)
            acc[key] = acc.get(key, 0j) + amp
        self._amps = MappingProxyType(_pruned(acc))

    @property
    def amps(self) -> Mapping[tuple[ModeId, ModeId], complex]:
        return self._amps

    def __getitem__(self, pair: tuple[ModeId, ModeId]) -> complex:
        return self._amps.get(pair_key(*pair), 0j)

    def __len__(self) -> int:
        return len(self._amps)

    def items(self):
        return self._amps.items()

    @property
    def norm_squared(self) -> float:
        return math.fsum(abs(a) ** 2 for a in self._amps.values())

    def scaled(self, factor: complex) -> TwoPhotonState:
        return TwoPhotonState({k: factor * a for k, a in self._amps.items()})

    def __add__(self, other: TwoPhotonState) -> TwoPhotonState:
        return state_add(self, other)

    def by_name(self) -> dict[tuple[str, str], complex]:
        return {(x.name, y.name): a for (x, y), a in self._amps.items()}

    def __repr__(self) -> str:
        body = ", ".join(f"({x.name},{y.name}): {a:.6g}" for (x, y), a in sorted(self._amps.items()))
        return f"TwoPhotonState({{{body}}})"


def bilinear_product(signal: LinearForm, idler: LinearForm, weight: complex = 1.0) -> TwoPhotonState:
    """Expand ``weight * (signal form) * (idler form)`` acting on vacuum.

    Cross terms ``x != y`` accumulate onto the unordered pair. A repeated mode
    gives ``a_x^dag a_x^dag |0> = sqrt(2) |2_x>``, so its amplitude carries the
    extra ``sqrt(2)``.
    """
    weight = check_finite(weight, "weight")
    acc: dict[tuple[ModeId, ModeId], complex] = {}
    for x, sx in signal.items():
        for y, iy in idler.items():
            amp = weight * sx * iy
            if x == y:
                amp *= SQRT2
            key = pair_key(x, y)
            acc[key] = acc.get(key, 0j) + amp
    return TwoPhotonState(acc)


def state_add(a: TwoPhotonState, b: TwoPhotonState) -> TwoPhotonState:
    acc = dict(a.amps)
    for key, amp in b.items():
        acc[key] = acc.get(key, 0j) + amp
    return TwoPhotonState(acc)


def inner_product(a: TwoPhotonState, b: TwoPhotonState) -> complex:
    """<a|b>, conjugate-linear in the first argument."""
    total = 0j
    for key, amp in a.items():
        other = b.amps.get(key)
        if other is not None:
            total += amp.conjugate() * other
    return total
