"""Problem definition: spherical step potential, beam energy, wavenumbers.

Units are fixed by ``hbar**2 / 2m = 1``: energies are measured in inverse
length squared, so ``k**2 = E - V_inf`` holds exactly. The incident beam
travels along the polar axis.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import DomainError


def branch_sqrt(z) -> complex:
    """Square root with negative reals mapped onto the positive imaginary axis.

    Real radicands are handled exactly (``sqrt(-3) -> i*sqrt(3)``); other
    complex radicands use the principal branch.
    """
    z = complex(z)
    if z.imag == 0.0:
        if z.real >= 0.0:
            return complex(math.sqrt(z.real), 0.0)
        return complex(0.0, math.sqrt(-z.real))
    return cmath.sqrt(z)


def _finite(name, value) -> float:
    if isinstance(value, bool):
        raise DomainError(f"{name} must be a real number, got {value!r}")
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise DomainError(f"{name} must be a real number, got {value!r}") from None
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class StepPotential:
    """``V = v1`` for ``r <= radius_a`` and ``V = v_inf`` outside.

    ``v1 == v_inf`` is accepted and describes free propagation.
    """

    radius_a: float
    v1: float
    v_inf: float

    def __post_init__(self):
        object.__setattr__(self, "radius_a", _finite("radius_a", self.radius_a))
        object.__setattr__(self, "v1", _finite("v1", self.v1))
        object.__setattr__(self, "v_inf", _finite("v_inf", self.v_inf))
        if self.radius_a <= 0.0:
            raise DomainError(f"radius_a must be positive, got {self.radius_a}")

    @property
    def strength(self) -> float:
        """Depth of the scatterer relative to the floor, ``v1 - v_inf``."""
        return self.v1 - self.v_inf

    def __call__(self, r: float) -> float:
        return self.v1 if r <= self.radius_a else self.v_inf

    def shifted(self, c: float) -> "StepPotential":
        return StepPotential(self.radius_a, self.v1 + c, self.v_inf + c)


@dataclass(frozen=True)
class BeamSpec:
    energy_E: float

    def __post_init__(self):
        object.__setattr__(self, "energy_E", _finite("energy_E", self.energy_E))


@dataclass(frozen=True)
class WaveNumbers:
    """Exterior ``k``, reference ``k0`` (``k0**2 = E``) and interior ``k1``."""

    k: float
    k0: complex
    k1: complex

    @property
    def energy(self) -> complex:
        return self.k0 * self.k0

    @property
    def v_inf(self) -> complex:
        return self.k0 * self.k0 - self.k * self.k

    @property
    def v1(self) -> complex:
        return self.k0 * self.k0 - self.k1 * self.k1

    @property
    def strength(self) -> complex:
        """``V1 - V_inf = k**2 - k1**2``."""
        return self.k * self.k - self.k1 * self.k1

    @property
    def is_free(self) -> bool:
        return self.k1 == self.k


def derive_wavenumbers(pot: StepPotential, beam: BeamSpec) -> WaveNumbers:
    """Wavenumbers for a beam of energy ``E`` incident on ``pot``.

    Raises :class:`DomainError` if ``E <= V_inf`` since then no propagating
    wave arrives from infinity.
    """
    kinetic = beam.energy_E - pot.v_inf
    if not kinetic > 0.0:
        raise DomainError(
            f"E - V_inf must be positive for an incident wave, got {kinetic:g}"
        )
    k = math.sqrt(kinetic)
    k0 = branch_sqrt(beam.energy_E)
    k1 = branch_sqrt(beam.energy_E - pot.v1)
    return WaveNumbers(k=k, k0=k0, k1=k1)

