import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from dirac_gh import (
    ConvergenceError,
    DomainError,
    Kinematics,
    RegimeError,
    SingularBarrierError,
    bisect_critical_angle,
    bisect_critical_energy,
    bisect_critical_potential,
    critical_angle,
    critical_energy,
    critical_potential,
    gamma,
    gh_shift_analytic,
    gh_shift_fd_oracle,
    reflection_phase,
    shift_forms,
    solve_matching,
)
from dirac_gh.ghshift import phase_derivative, reflection_phase_pz, total_reflection_interval

DEG = math.pi / 180

# mpmath references: atan2 argument (-1111, 1099.94...) and d theta/d p_z
THETA_EQUAL = 2.361194573529428
DZ_EQUAL = 0.14071950894605837
DZ_NEG = -0.04833981316035424      # E=10, V=9.7, phi=5 deg
DZ_ABOVE = 0.13186027173195823     # E=10, V=10.4, phi=30 deg


def test_reflection_phase_reference():
    assert reflection_phase(Kinematics(10.0, 10.0, 45 * DEG)) == pytest.approx(THETA_EQUAL, rel=1e-14)


def test_reflection_phase_limits():
    E, V = 10.0, 10.0
    lo, hi = total_reflection_interval(E, V)
    assert lo == 0.0
    # grazing with a negative real part: theta -> pi from below
    near_grazing = reflection_phase_pz(E, V, hi * (1 - 1e-12))
    assert math.pi - 1e-4 < near_grazing < math.pi
    # n < 0 when E - gamma < V < E - m: theta in (-pi, 0)
    assert -math.pi < reflection_phase(Kinematics(10.0, 5.0, 60 * DEG)) < 0


def test_reflection_phase_rejects_transmitting_momenta():
    with pytest.raises(RegimeError):
        reflection_phase_pz(10.0, 10.0, np.array([1.0, 20.0]))
    with pytest.raises(RegimeError):
        reflection_phase(Kinematics(10.0, 25.0, 30 * DEG))


@pytest.mark.parametrize("V, phi_deg, ref", [
    (10.0, 45.0, DZ_EQUAL),
    (9.7, 5.0, DZ_NEG),
    (10.4, 30.0, DZ_ABOVE),
])
def test_shift_references(V, phi_deg, ref):
    res = gh_shift_analytic(Kinematics(10.0, V, phi_deg * DEG))
    assert res.delta_z == pytest.approx(ref, rel=1e-13)
    assert gh_shift_fd_oracle(Kinematics(10.0, V, phi_deg * DEG)) == pytest.approx(ref, rel=1e-9)
    assert res.sign == ("negative" if ref < 0 else "positive")


def test_equal_energy_and_barrier_shift_is_inverse_gamma():
    # at V = E the shift reduces to tan(phi) / gamma, i.e. 1/sqrt(50.5) at 45 deg
    res = gh_shift_analytic(Kinematics(10.0, 10.0, 45 * DEG))
    assert res.delta_z == pytest.approx(1 / math.sqrt(50.5), rel=1e-12)
    assert res.delta_phase == pytest.approx(res.delta_z * 7.035623639735144, rel=1e-15)
    assert res.phase_defect < 1e-14


def test_normal_incidence_has_no_shift():
    res = gh_shift_analytic(Kinematics(10.0, 9.7, 0.0))
    assert res.delta_z == 0.0 and res.sign == "zero"
    assert abs(gh_shift_fd_oracle(Kinematics(10.0, 9.7, 0.0))) < 1e-10
    # linear in phi near normal incidence
    small = gh_shift_analytic(Kinematics(10.0, 9.7, 1e-8)).delta_z
    assert small < 0 and abs(small) < 1e-6


def test_singular_barrier():
    with pytest.raises(SingularBarrierError):
        gh_shift_analytic(Kinematics(10.0, 9.0, 45 * DEG))


def test_divergence_at_window_edges():
    E, phi = 10.0, 30 * DEG
    g = gamma(Kinematics(E, 1.0, phi))
    upper = [gh_shift_analytic(Kinematics(E, E + g * (1 - eps), phi)).delta_z
             for eps in (1e-2, 1e-4, 1e-6, 1e-8)]
    assert np.all(np.diff(upper) > 0) and upper[-1] > 1e3
    lower = [gh_shift_analytic(Kinematics(E, E - g * (1 - eps), phi)).delta_z
             for eps in (1e-2, 1e-4, 1e-6, 1e-8)]
    assert np.all(np.diff(lower) < 0) and lower[-1] < -500
    assert gh_shift_analytic(Kinematics(E, E + g * (1 - 1e-12), phi)).diverging
    assert not gh_shift_analytic(Kinematics(E, E + g * (1 - 1e-6), phi)).diverging


def test_oracle_refuses_edge():
    E, phi = 10.0, 30 * DEG
    g = gamma(Kinematics(E, 1.0, phi))
    with pytest.raises(ConvergenceError):
        gh_shift_fd_oracle(Kinematics(E, E + g * (1 - 1e-14), phi))


def test_phase_derivative_on_known_function():
    assert phase_derivative(np.sin, 0.3, 1e-3) == pytest.approx(math.cos(0.3), rel=1e-12)
    # unwrapping removes a 2 pi jump across the stencil
    wrapped = lambda x: np.angle(np.exp(1j * 3 * x))
    assert phase_derivative(wrapped, math.pi / 3, 1e-3) == pytest.approx(3.0, rel=1e-10)


@st.composite
def tr(draw, margin=1e-2):
    """Totally reflecting points at least ``margin`` (relative) inside the window."""
    E = draw(st.floats(1.01, 50.0))
    phi = draw(st.floats(0.01, 1.5))
    g = math.hypot(E * math.sin(phi), math.cos(phi))
    # E - V = g * s with |s| < sqrt(1 - margin)
    s = draw(st.floats(-1.0, 1.0)) * math.sqrt(1 - margin) * (1 - 1e-12)
    V = E - g * s
    ell = draw(st.floats(-10.0, 10.0))
    assume(V > 0 and abs(V - E + 1) > 1e-6)
    return Kinematics(E, V, phi, ell=ell)


def _is_tr(k, margin=1e-2):
    g2 = k.E ** 2 * math.sin(k.phi) ** 2 + math.cos(k.phi) ** 2
    return g2 - (k.E - k.V) ** 2 > margin * g2


@given(tr())
def test_three_forms_agree(k):
    assume(_is_tr(k))
    f = shift_forms(k)
    scale = abs(f.angular)
    assert abs(f.momentum - f.angular) <= 1e-12 * scale
    assert abs(f.window - f.angular) <= 1e-12 * scale


@given(tr())
def test_closed_form_matches_numerical_derivative(k):
    assume(_is_tr(k))
    dz = gh_shift_analytic(k).delta_z
    assert gh_shift_fd_oracle(k) == pytest.approx(dz, rel=1e-6, abs=1e-300)


@given(tr())
def test_sign_law(k):
    assume(_is_tr(k))
    pred = (1 - k.E ** 2) * math.cos(k.phi) ** 2 + k.E * k.V
    assume(abs(pred) > 1e-9 * k.E * k.V)
    assert math.copysign(1, gh_shift_analytic(k).delta_z) == math.copysign(1, pred)


@given(tr())
def test_common_phase_of_reflected_amplitudes(k):
    assume(_is_tr(k))
    res = gh_shift_analytic(k)
    assert res.phase_defect < 1e-12
    m = solve_matching(k)
    # A e^{i theta} is real
    assert abs((m.A * np.exp(1j * res.theta)).imag) <= 1e-12 * max(abs(m.A), abs(m.B))


def test_critical_values_examples():
    assert critical_potential(10.0, 0.0).value == pytest.approx(9.9, rel=1e-15)
    assert critical_energy(9.0, 0.0).value == pytest.approx(9.109772228646444, rel=1e-15)
    th = critical_angle(10.0, 9.7)
    assert th.exists
    assert math.degrees(th.value) == pytest.approx(8.171339556579, abs=1e-9)
    assert not critical_angle(10.0, 9.95).exists
    with pytest.raises(DomainError, match="V >= E"):
        critical_angle(10.0, 10.0)


def test_sign_flips_across_critical_angle():
    phi_c = critical_angle(10.0, 9.7).value
    assert gh_shift_analytic(Kinematics(10.0, 9.7, phi_c * 0.99)).delta_z < 0
    assert gh_shift_analytic(Kinematics(10.0, 9.7, phi_c * 1.01)).delta_z > 0


@settings(max_examples=60)
@given(st.floats(2.0, 50.0), st.floats(0.05, 0.99))
def test_bisection_agrees_with_closed_threshold_angle(E, frac):
    V = E * frac
    th = critical_angle(E, V)
    assume(th.exists and th.value > 1e-3)
    lo2 = ((E - V) ** 2 - 1) / ((E - 1) * (E + 1))
    assume(lo2 < math.sin(th.value) ** 2 * (1 - 1e-6))
    assert bisect_critical_angle(E, V) == pytest.approx(th.value, abs=1e-10)


@settings(max_examples=60)
@given(st.floats(1.5, 50.0), st.floats(0.0, 1.4))
def test_bisection_agrees_with_closed_threshold_potential_and_energy(E, phi):
    assert bisect_critical_potential(E, phi) == pytest.approx(
        critical_potential(E, phi).value, abs=1e-10)
    V = critical_potential(E, phi).value
    assume(V > 0.05)
    assert bisect_critical_energy(V, phi) == pytest.approx(
        critical_energy(V, phi).value, abs=1e-10 * max(1.0, E))
