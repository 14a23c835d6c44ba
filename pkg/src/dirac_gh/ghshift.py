"""Reflection phase under total reflection and the Goos-Hänchen shift.

Under total reflection both reflected amplitudes carry the common phase
``exp(-i theta)``, where ``theta`` is the argument of

    Z = p_x^2 - n^2 q_x^2 + (1 - n)^2 p_z^2 + 2 i n p_x q_x .

A beam of finite width is displaced along the interface by
``dz = hbar d(theta)/d(p_z)`` at fixed energy, and the reflected wave picks up
the extra phase ``delta = p_z dz / hbar``. The shift has a closed form in
``(E, V, phi)`` that can change sign when ``V < E``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np
from scipy.optimize import bisect

from .errors import ConvergenceError, DomainError, RegimeError
from .kinematics import Kinematics, Regime, classify_regime, derive_momenta, gamma
from .matching import _amplitude_ratio, closed_form_coefficients

__all__ = [
    "ShiftForms",
    "ShiftResult",
    "Threshold",
    "reflection_phase",
    "reflection_phase_pz",
    "total_reflection_interval",
    "shift_forms",
    "shift_sign_predicate",
    "gh_shift_analytic",
    "phase_derivative",
    "gh_shift_fd_oracle",
    "critical_potential",
    "critical_angle",
    "critical_energy",
    "bisect_critical_potential",
    "bisect_critical_angle",
    "bisect_critical_energy",
    "DIVERGENCE_RTOL",
]

# gamma^2 - (E - V)^2 below this fraction of gamma^2 flags a diverging shift
DIVERGENCE_RTOL = 1e-9


class ShiftForms(NamedTuple):
    """Three algebraically equivalent closed forms of the shift.

    ``momentum`` is written with ``p^2 cos(2 phi)``; ``angular`` with the
    sign-deciding numerator ``(m^2 - E^2) cos^2 phi + E V``; ``window`` with
    ``gamma^2 - (E - V)^2 + (V - E) V``.
    """

    momentum: float
    angular: float
    window: float


@dataclass(frozen=True)
class ShiftResult:
    """Reflection phase and lateral shift at the beam's central momentum.

    Attributes
    ----------
    theta : float
        Reflection phase, radians, from a quadrant-aware arctangent.
    theta_prime : float
        ``d theta / d p_z`` at fixed energy.
    delta_z : float
        Lateral shift along the interface, ``hbar theta_prime``.
    delta_phase : float
        Extra phase ``p_z delta_z / hbar`` of the shifted reflected wave.
    sign : str
        ``"positive"``, ``"negative"`` or ``"zero"``.
    diverging : bool
        True within ``DIVERGENCE_RTOL`` of a regime edge, where ``|dz|``
        grows without bound.
    phase_defect : float
        Largest imaginary part of ``A e^{i theta}`` and ``B e^{i theta}``
        relative to ``max(|A|, |B|)``; zero when both amplitudes share the
        phase ``theta`` up to sign.
    """

    theta: float
    theta_prime: float
    delta_z: float
    delta_phase: float
    sign: str
    diverging: bool = False
    phase_defect: float = 0.0


def _require_total_reflection(k: Kinematics) -> None:
    regime = classify_regime(k)
    if regime is not Regime.TOTAL_REFLECTION:
        raise RegimeError(
            f"requires total reflection (E - gamma < V < E + gamma); "
            f"E={k.E}, V={k.V}, phi={k.phi} is {regime}"
        )


def total_reflection_interval(E: float, V: float, m: float = 1.0) -> tuple[float, float]:
    """Range of ``|p_z|`` over which reflection is total at fixed ``E`` and ``V``.

    The lower end is where the transmitted wave stops decaying (zero when it
    never propagates at normal incidence); the upper end is grazing incidence.
    """
    p = math.sqrt((E - m) * (E + m))
    lo2 = (E - V) ** 2 - m ** 2
    lo = math.sqrt(lo2) if lo2 > 0 else 0.0
    return lo, p


def reflection_phase_pz(E: float, V: float, p_z, m: float = 1.0):
    """Reflection phase as a function of ``p_z`` at fixed ``E`` and ``V``.

    Accepts scalars or arrays. Every ``p_z`` must lie inside the
    total-reflection interval, otherwise :class:`RegimeError` is raised.
    """
    p_z = np.asarray(p_z, dtype=float)
    p2 = (E - m) * (E + m)
    px2 = p2 - p_z ** 2
    qx2 = p_z ** 2 + m ** 2 - (V - E) ** 2
    if np.any(px2 <= 0) or np.any(qx2 <= 0):
        raise RegimeError(
            f"p_z outside the total-reflection interval for E={E}, V={V}")
    vem = V - E + m
    n = (E + m) / vem
    p_x = np.sqrt(px2)
    q_x = np.sqrt(qx2)
    re = px2 - n ** 2 * qx2 + (1.0 - n) ** 2 * p_z ** 2
    im = 2.0 * n * p_x * q_x
    theta = np.arctan2(im, re)
    return float(theta) if theta.ndim == 0 else theta


def reflection_phase(k: Kinematics) -> float:
    """Phase ``theta`` with ``A = |A| e^{-i theta}``.

    Lies in ``(0, pi)`` when ``V > E - m`` and in ``(-pi, 0)`` below, where the
    amplitude ratio ``n`` is negative.
    """
    _require_total_reflection(k)
    _amplitude_ratio(k)  # raises on the singular barrier
    return reflection_phase_pz(k.E, k.V, derive_momenta(k).p_z, k.m)


def shift_forms(k: Kinematics) -> ShiftForms:
    """Evaluate the three closed forms of the shift.

    Arithmetic is carried out in ``numpy.longdouble`` so that the forms stay
    comparable near the sign change, where their numerators cancel.
    """
    _require_total_reflection(k)
    ld = np.longdouble
    E, V, m = ld(k.E), ld(k.V), ld(k.m)
    phi = ld(k.phi)
    s, c = np.sin(phi), np.cos(phi)
    t = np.tan(phi)
    m2 = m * m
    p2 = (E - m) * (E + m)
    g2 = E * E * s * s + m2 * c * c
    root = np.sqrt(g2 - (E - V) ** 2)

    c2phi = np.cos(2 * phi)
    momentum = ((E * E - m2 - 2 * E * V + p2 * c2phi) * t
                / ((-(E * E + m2) + p2 * c2phi)
                   * np.sqrt(m2 - (E - V) ** 2 + p2 * s * s)))
    angular = ((m2 - E * E) * c * c + E * V) * t / (g2 * root)
    window = (g2 - (E - V) ** 2 + (V - E) * V) * t / (g2 * root)
    return ShiftForms(float(momentum), float(angular), float(window))


def shift_sign_predicate(k: Kinematics) -> float:
    """Numerator ``(m^2 - E^2) cos^2 phi + E V`` that fixes the sign of the shift."""
    return (k.m ** 2 - k.E ** 2) * math.cos(k.phi) ** 2 + k.E * k.V


def _phase_defect(k: Kinematics, theta: float) -> float:
    mom = derive_momenta(k)
    n = _amplitude_ratio(k)
    A, B, _, _ = closed_form_coefficients(mom.p_x, mom.p_z, mom.p_x_prime, n, k.ell)
    rot = complex(math.cos(theta), math.sin(theta))
    scale = max(abs(A), abs(B))
    return max(abs((A * rot).imag), abs((B * rot).imag)) / scale


def gh_shift_analytic(k: Kinematics) -> ShiftResult:
    """Closed-form Goos-Hänchen shift at the kinematic point ``k``.

    Normal incidence gives zero by continuity.

    Raises
    ------
    RegimeError
        Unless the configuration is totally reflecting.
    SingularBarrierError
        At ``V = E - m``.
    """
    _require_total_reflection(k)
    theta = reflection_phase(k)
    defect = _phase_defect(k, theta)
    g = gamma(k)
    gap = g * g - (k.E - k.V) ** 2
    diverging = gap < DIVERGENCE_RTOL * g * g
    if k.phi == 0.0:
        dz = 0.0
    else:
        dz = shift_forms(k).angular
    p_z = derive_momenta(k).p_z
    sign = "positive" if dz > 0 else "negative" if dz < 0 else "zero"
    return ShiftResult(theta=theta, theta_prime=dz, delta_z=dz,
                       delta_phase=p_z * dz, sign=sign, diverging=diverging,
                       phase_defect=defect)


def phase_derivative(func: Callable[[np.ndarray], np.ndarray], x: float,
                     h: float) -> float:
    """Derivative of a phase function by central differences.

    Uses steps ``h`` and ``h/2`` and one Richardson step, so the error is
    fourth order in ``h``. The four samples are unwrapped before differencing.
    """
    pts = np.array([x - h, x - h / 2, x + h / 2, x + h])
    vals = np.unwrap(np.asarray(func(pts), dtype=float))
    d_h = (vals[3] - vals[0]) / (2 * h)
    d_h2 = (vals[2] - vals[1]) / h
    return float((4 * d_h2 - d_h) / 3)


def _oracle_step(k: Kinematics, p_z: float) -> float:
    lo, hi = total_reflection_interval(k.E, k.V, k.m)
    edge = hi - abs(p_z)
    if lo > 0:
        edge = min(edge, abs(p_z) - lo)
    scale = max(1.0, abs(p_z))
    h = 1e-3 * min(scale, edge)
    if not h > 1e-8 * scale:
        raise ConvergenceError(
            f"no usable finite-difference step: p_z={p_z} lies within "
            f"{edge:.3e} of a total-reflection edge")
    return h


def gh_shift_fd_oracle(k: Kinematics, h: float | None = None) -> float:
    """Shift from a numerical derivative of the reflection phase.

    Independent of the closed forms: differentiates ``theta(p_z)`` at fixed
    energy. The default step is ``1e-3`` times the smaller of
    ``max(1, |p_z|)`` and the distance from ``p_z`` to the nearest edge of
    total reflection.

    Raises
    ------
    RegimeError
        Unless totally reflecting.
    ConvergenceError
        When ``p_z`` is too close to a regime edge for a stable step.
    """
    _require_total_reflection(k)
    _amplitude_ratio(k)
    p_z = derive_momenta(k).p_z
    if h is None:
        h = _oracle_step(k, p_z)
    return phase_derivative(lambda q: reflection_phase_pz(k.E, k.V, q, k.m), p_z, h)


@dataclass(frozen=True)
class Threshold:
    """Parameter value where the shift changes sign.

    ``value`` is ``None`` when no sign change exists in the physical domain;
    ``negative_when`` says on which side of ``value`` the shift is negative.
    """

    kind: str
    value: float | None
    exists: bool
    negative_when: str


def critical_potential(E: float, phi: float, m: float = 1.0) -> Threshold:
    """Barrier height below which the shift is negative at fixed ``E``, ``phi``."""
    if E <= m:
        raise DomainError(f"E <= m forbidden (E={E}, m={m})")
    if not 0.0 <= phi < math.pi / 2:
        raise DomainError(f"phi must lie in [0, pi/2), got {phi}")
    v_c = (E - m * m / E) * math.cos(phi) ** 2
    return Threshold("potential", v_c, True, "V < value")


def critical_angle(E: float, V: float, m: float = 1.0) -> Threshold:
    """Incidence angle below which the shift is negative at fixed ``E``, ``V``.

    Raises
    ------
    DomainError
        For ``V >= E``: the shift is then positive at every angle.
    """
    if E <= m:
        raise DomainError(f"E <= m forbidden (E={E}, m={m})")
    if V <= 0:
        raise DomainError(f"V must be positive, got {V}")
    if V >= E:
        raise DomainError(
            f"no sign change for V >= E (E={E}, V={V}): the shift is positive")
    ratio = E * V / ((E - m) * (E + m))
    if ratio > 1.0:
        return Threshold("angle", None, False, "never")
    return Threshold("angle", math.acos(math.sqrt(ratio)), True, "phi < value")


def critical_energy(V: float, phi: float, m: float = 1.0) -> Threshold:
    """Energy above which the shift is negative at fixed ``V``, ``phi``."""
    if V <= 0:
        raise DomainError(f"V must be positive, got {V}")
    if not 0.0 <= phi < math.pi / 2:
        raise DomainError(f"phi must lie in [0, pi/2), got {phi}")
    half = V / (2.0 * math.cos(phi) ** 2)
    return Threshold("energy", half + math.sqrt(half * half + m * m), True, "E > value")


def _reduced_shift(E: float, V: float, phi: float, m: float) -> float:
    # shift / tan(phi) in the momentum form; finite at phi = 0 and signed
    # correctly up to the regime edges, where the root is floored
    p2 = (E - m) * (E + m)
    c2phi = math.cos(2 * phi)
    num = E * E - m * m - 2 * E * V + p2 * c2phi
    den = -(E * E + m * m) + p2 * c2phi
    root = math.sqrt(max(m * m - (E - V) ** 2 + p2 * math.sin(phi) ** 2, 1e-300))
    return num / (den * root)


def _bisect(f, lo: float, hi: float) -> float:
    return bisect(f, lo, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps, maxiter=400)


def bisect_critical_angle(E: float, V: float, m: float = 1.0) -> float:
    """Sign-change angle found by bisection on the shift (no closed form used)."""
    if not 0 < V < E:
        raise DomainError(f"requires 0 < V < E (E={E}, V={V})")
    p2 = (E - m) * (E + m)
    lo2 = ((E - V) ** 2 - m * m) / p2
    lo = math.asin(math.sqrt(lo2)) if lo2 > 0 else 0.0
    hi = math.pi / 2 * (1 - 1e-12)
    f = lambda phi: _reduced_shift(E, V, phi, m)
    if f(lo) * f(hi) >= 0:
        raise DomainError(f"shift does not change sign in angle for E={E}, V={V}")
    return _bisect(f, lo, hi)


def bisect_critical_potential(E: float, phi: float, m: float = 1.0) -> float:
    """Sign-change barrier height found by bisection on the shift."""
    g = gamma(Kinematics(E=E, V=E, phi=phi, m=m))
    f = lambda v: _reduced_shift(E, v, phi, m)
    return _bisect(f, max(E - g, 0.0), E)


def bisect_critical_energy(V: float, phi: float, m: float = 1.0) -> float:
    """Sign-change energy found by bisection on the shift."""
    c2 = math.cos(phi) ** 2
    lo = max(V, m) * (1 + 1e-12)
    hi = (V + math.sqrt(V * V * (1 - c2) + m * m * c2 * c2)) / c2
    f = lambda e: _reduced_shift(e, V, phi, m)
    return _bisect(f, lo, hi)
