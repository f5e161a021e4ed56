"""Exception and warning types raised across the package."""

from __future__ import annotations


class VeilError(Exception):
    """Base class for every error raised by veil."""


class PhysicsError(VeilError):
    """A configuration describes something physically invalid."""


class DuplicateMode(VeilError):
    pass


class NonUnitary(PhysicsError):
    def __init__(self, failures: dict[str, float]):
        self.failures = dict(failures)
        detail = ", ".join(f"{name} off by {err:.3g}" for name, err in failures.items())
        super().__init__(f"beam splitter is not unitary: {detail}")


class InvalidTransmissivity(PhysicsError):
    pass


class InvalidAmplitude(PhysicsError):
    pass


class InvalidWiring(PhysicsError):
    pass


class AllCrystalsDead(PhysicsError):
    pass


class DegenerateSplitter(PhysicsError):
    pass


class InvalidDetector(VeilError):
    pass


class UnknownParameter(VeilError):
    pass


class ConditionNotSatisfied(VeilError):
    pass


class Infeasible(VeilError):
    """The invisibility condition needs an object that would amplify (T1 > 1)."""

    def __init__(self, required_t1: float):
        self.required_t1 = required_t1
        super().__init__(f"condition requires T1 = {required_t1:.12g} > 1")


class DeadCrystal(UserWarning):
    """A crystal with zero effective pair amplitude contributes nothing."""
