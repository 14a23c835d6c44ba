"""Kinematics of a Dirac particle incident on a potential step.

Natural units are used throughout: ``hbar = c = 1`` and energies are measured
in units of the rest energy when ``m = 1`` (the default). Lengths then come out
in reduced Compton wavelengths ``hbar / (m c)``.

The particle moves in the x-z plane and meets the step ``V(x) = V`` for
``x > 0`` at incidence angle ``phi`` measured from the x axis.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import DomainError

__all__ = [
    "Kinematics",
    "Momenta",
    "Regime",
    "derive_momenta",
    "gamma",
    "classify_regime",
    "regime_window",
]


class Regime(str, Enum):
    """Scattering regime of a kinematic configuration."""

    TRANSMITTING = "Transmitting"
    TOTAL_REFLECTION = "TotalReflection"
    OUTSIDE_VALIDITY = "OutsideValidity"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Kinematics:
    """Incident particle and barrier parameters.

    Attributes
    ----------
    E : float
        Total energy of the incident particle. Must exceed ``m``.
    V : float
        Barrier height, ``V > 0``.
    phi : float
        Incidence angle in radians, ``0 <= phi < pi/2``.
    ell : float
        Real ratio of the two positive-energy spin components of the
        incident wave. Observables do not depend on it.
    m : float
        Rest mass.
    """

    E: float
    V: float
    phi: float
    ell: float = 0.0
    m: float = 1.0

    def __post_init__(self):
        for name in ("E", "V", "phi", "ell", "m"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite, got {getattr(self, name)!r}")
        if self.m <= 0:
            raise DomainError(f"mass must be positive, got m={self.m}")
        if self.E <= self.m:
            raise DomainError(
                f"E <= m forbidden: a propagating incident wave needs E > m "
                f"(got E={self.E}, m={self.m})"
            )
        if self.V <= 0:
            raise DomainError(f"barrier height must be positive, got V={self.V}")
        if not 0.0 <= self.phi < math.pi / 2:
            raise DomainError(f"incidence angle must lie in [0, pi/2), got phi={self.phi}")

    @classmethod
    def from_degrees(cls, E: float, V: float, phi_deg: float, ell: float = 0.0,
                     m: float = 1.0) -> "Kinematics":
        return cls(E=E, V=V, phi=math.radians(phi_deg), ell=ell, m=m)

    @property
    def phi_deg(self) -> float:
        return math.degrees(self.phi)


@dataclass(frozen=True)
class Momenta:
    """Momentum decomposition on both sides of the step.

    ``px2_prime`` is the squared x-momentum inside the barrier; it is negative
    when the transmitted wave is evanescent, in which case ``q_x`` holds the
    decay constant and ``p_x' = i q_x``.
    """

    p: float
    p_x: float
    p_z: float
    px2_prime: float
    q_x: float | None = None

    @property
    def p_x_prime(self) -> complex:
        """Transmitted x-momentum: real, or ``+i q_x`` for a decaying wave."""
        if self.q_x is not None:
            return 1j * self.q_x
        return complex(math.sqrt(self.px2_prime), 0.0)


def derive_momenta(k: Kinematics) -> Momenta:
    """Split the incident momentum and solve the dispersion inside the step."""
    if k.E <= k.m:
        raise DomainError(f"E <= m forbidden (E={k.E}, m={k.m})")
    # (E - m)(E + m) keeps precision for E close to m
    p = math.sqrt((k.E - k.m) * (k.E + k.m))
    p_x = p * math.cos(k.phi)
    p_z = p * math.sin(k.phi)
    px2_prime = (k.E - k.V) ** 2 - p_z ** 2 - k.m ** 2
    q_x = math.sqrt(-px2_prime) if px2_prime < 0 else None
    return Momenta(p=p, p_x=p_x, p_z=p_z, px2_prime=px2_prime, q_x=q_x)


def gamma(k: Kinematics) -> float:
    """Half-width of the total-reflection window in ``V``.

    Equal to ``sqrt(E^2 sin^2 phi + m^2 cos^2 phi)``, which lies in ``[m, E]``.
    """
    s, c = math.sin(k.phi), math.cos(k.phi)
    return math.sqrt((k.E * s) ** 2 + (k.m * c) ** 2)


def regime_window(k: Kinematics) -> tuple[float, float]:
    """Open interval ``(E - gamma, E + gamma)`` of barrier heights with total reflection."""
    g = gamma(k)
    return k.E - g, k.E + g


def classify_regime(k: Kinematics) -> Regime:
    """Assign the scattering regime.

    The boundary ``V = E + gamma`` counts as transmitting (``T = 0`` there by
    continuity); ``V = E - gamma`` falls outside the validity window.
    """
    mom = derive_momenta(k)
    if mom.px2_prime < 0:
        return Regime.TOTAL_REFLECTION
    if k.V > k.E:
        return Regime.TRANSMITTING
    return Regime.OUTSIDE_VALIDITY
