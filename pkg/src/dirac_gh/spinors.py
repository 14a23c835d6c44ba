"""Plane-wave spinor amplitudes and the x-component of the probability current.

Dirac matrices are in the representation ``alpha = sigma_x (x) sigma`` and
``beta = sigma_z (x) 1``. Amplitudes are unnormalized 4-vectors whose entries
carry factors of ``E + m`` or momenta; every observable built from them is a
ratio, so the normalization never matters.

Spinors are plain ``complex128`` numpy arrays of shape ``(4,)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import RegimeError, SingularBarrierError
from .kinematics import Kinematics, Momenta, Regime, classify_regime

__all__ = [
    "SIGMA_X", "SIGMA_Y", "SIGMA_Z", "IDENTITY2",
    "ALPHA_X", "ALPHA_Y", "ALPHA_Z", "BETA",
    "FluxComponents",
    "dirac_operator",
    "dirac_residual",
    "incident_spinor",
    "reflected_basis",
    "transmitted_basis",
    "current_x",
    "flux_components",
    "SINGULAR_BARRIER_RTOL",
]

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY2 = np.eye(2, dtype=complex)

ALPHA_X = np.kron(SIGMA_X, SIGMA_X)
ALPHA_Y = np.kron(SIGMA_X, SIGMA_Y)
ALPHA_Z = np.kron(SIGMA_X, SIGMA_Z)
BETA = np.kron(SIGMA_Z, IDENTITY2)

# |V - E + m| below this fraction of (E + m) is treated as the singular barrier
SINGULAR_BARRIER_RTOL = 1e-12


@dataclass(frozen=True)
class FluxComponents:
    """x-directed probability currents of the three partial waves."""

    incident_flux: float
    reflected_flux: float
    transmitted_flux: float


def dirac_operator(energy, p_x, p_z, m: float = 1.0) -> np.ndarray:
    """Matrix ``energy - alpha.p - beta m`` for momentum ``(p_x, 0, p_z)``.

    ``p_x`` may be complex (evanescent waves); no conjugation is applied.
    """
    return (energy * np.eye(4, dtype=complex)
            - p_x * ALPHA_X - p_z * ALPHA_Z - m * BETA)


def dirac_residual(amplitude, energy, p_x, p_z, m: float = 1.0) -> float:
    """Relative residual ``|D a| / (scale |a|)`` of an amplitude ``a``."""
    amplitude = np.asarray(amplitude, dtype=complex)
    scale = abs(energy) + m + abs(p_x) + abs(p_z)
    res = dirac_operator(energy, p_x, p_z, m) @ amplitude
    return float(np.linalg.norm(res) / (scale * np.linalg.norm(amplitude)))


def incident_spinor(k: Kinematics, mom: Momenta) -> np.ndarray:
    """Positive-energy incident amplitude with spin mix ``ell``."""
    em = k.E + k.m
    return np.array([
        em,
        k.ell * em,
        mom.p_z + k.ell * mom.p_x,
        mom.p_x - k.ell * mom.p_z,
    ], dtype=complex)


def reflected_basis(k: Kinematics, mom: Momenta) -> tuple[np.ndarray, np.ndarray]:
    """Columns multiplying the reflection amplitudes ``A`` and ``B``.

    Both solve the free equation at energy ``E`` with ``p_x -> -p_x``.
    """
    em = k.E + k.m
    col_a = np.array([em, 0.0, mom.p_z, -mom.p_x], dtype=complex)
    col_b = np.array([0.0, em, -mom.p_x, -mom.p_z], dtype=complex)
    return col_a, col_b


def _barrier_factor(k: Kinematics) -> float:
    vem = k.V - k.E + k.m
    if abs(vem) < SINGULAR_BARRIER_RTOL * (k.E + k.m):
        raise SingularBarrierError(
            f"V = E - m (V={k.V}, E={k.E}, m={k.m}): transmitted spinor vanishes "
            "and the amplitude ratio n diverges"
        )
    return vem


def transmitted_basis(k: Kinematics, mom: Momenta) -> tuple[np.ndarray, np.ndarray]:
    """Columns multiplying the transmission amplitudes ``C`` and ``D``.

    These are negative-energy spinors with ``E`` replaced by ``E - V``, so they
    solve the free equation at energy ``V - E``. In the evanescent regime the
    transmitted momentum is ``p_x' = +i q_x`` and the columns are complex.

    Raises
    ------
    RegimeError
        Outside the validity window ``V > E - gamma``.
    SingularBarrierError
        At ``V = E - m``.
    """
    if classify_regime(k) is Regime.OUTSIDE_VALIDITY:
        raise RegimeError(
            "transmitted spinors are defined only for V > E - gamma "
            f"(E={k.E}, V={k.V}, phi={k.phi})"
        )
    vem = _barrier_factor(k)
    pxp = mom.p_x_prime
    col_c = np.array([vem, 0.0, mom.p_z, pxp], dtype=complex)
    col_d = np.array([0.0, vem, pxp, -mom.p_z], dtype=complex)
    return col_c, col_d


def current_x(amplitude) -> float:
    """x-component of the probability current ``psi^dagger alpha_x psi``."""
    a = np.asarray(amplitude, dtype=complex)
    return float(np.real(np.conj(a) @ ALPHA_X @ a))


def flux_components(k: Kinematics, mom: Momenta, A: complex, B: complex,
                    C: complex, D: complex) -> FluxComponents:
    """Closed-form incident, reflected and transmitted x-fluxes.

    The transmitted flux vanishes for an evanescent wave.
    """
    em = k.E + k.m
    incident = 2.0 * em * mom.p_x * (1.0 + k.ell ** 2)
    reflected = 2.0 * em * mom.p_x * (abs(A) ** 2 + abs(B) ** 2)
    if mom.px2_prime >= 0:
        vem = k.V - k.E + k.m
        transmitted = 2.0 * vem * mom.p_x_prime.real * (abs(C) ** 2 + abs(D) ** 2)
    else:
        transmitted = 0.0
    return FluxComponents(incident, reflected, transmitted)
