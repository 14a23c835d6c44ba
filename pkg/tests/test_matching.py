import logging
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dirac_gh import (
    Kinematics,
    Regime,
    RegimeError,
    SingularBarrierError,
    derive_momenta,
    interface_values,
    scatter,
    solve_matching,
)
from dirac_gh.matching import closed_form_coefficients, matching_system

from _sampling import random_points

# 40-digit mpmath solution of the matching system at E=10, V=25, phi=30 deg
REF_ELL0 = (-0.06608864577833757, 0.07924769466334827,
            0.6420640560273929, 0.05448279008105193)
REF_ELL1 = (-0.1453363404416858, 0.01315904888501070,
            0.5875812659463410, 0.6965468461084449)
R_REF = 0.01064790621026985


@pytest.mark.parametrize("ell, ref", [(0.0, REF_ELL0), (1.0, REF_ELL1)])
def test_transmitting_amplitudes(ell, ref):
    m = solve_matching(Kinematics(10.0, 25.0, math.pi / 6, ell=ell))
    np.testing.assert_allclose(m.coefficients.real, ref, rtol=1e-13)
    assert np.all(m.coefficients.imag == 0)
    assert m.n == pytest.approx(11 / 16, rel=1e-15)


@pytest.mark.parametrize("ell", [0.0, 1.0, -3.5])
def test_transmitting_coefficients(ell):
    s = scatter(Kinematics(10.0, 25.0, math.pi / 6, ell=ell))
    assert s.regime is Regime.TRANSMITTING
    assert s.R == pytest.approx(R_REF, rel=1e-13)
    assert s.T == pytest.approx(1 - R_REF, rel=1e-14)
    assert s.R_closed == pytest.approx(s.R, abs=1e-15)
    assert s.T_closed == pytest.approx(s.T, abs=1e-15)
    assert s.diagnostics == ()


def test_normal_incidence_reduces_to_one_dimension():
    k = Kinematics(10.0, 25.0, 0.0)
    m = solve_matching(k)
    mom = derive_momenta(k)
    pxp = mom.p_x_prime.real
    assert m.A == pytest.approx((mom.p_x - m.n * pxp) / (mom.p_x + m.n * pxp), rel=1e-14)
    assert m.B == 0 and m.D == 0


def test_reflectionless_point():
    # V = 2E gives n p_x' = p_x and n = 1 at every angle
    k = Kinematics(10.0, 20.0, 0.4, ell=2.0)
    m = solve_matching(k)
    assert abs(m.A) < 1e-15 and abs(m.B) < 1e-15
    s = scatter(k)
    assert s.R == pytest.approx(0.0, abs=1e-15)
    assert s.T == pytest.approx(1.0, rel=1e-15)


def test_total_reflection_summary():
    s = scatter(Kinematics(10.0, 10.0, math.pi / 4, ell=2.0))
    assert s.regime is Regime.TOTAL_REFLECTION
    assert (s.R, s.T) == (1.0, 0.0)
    assert s.R_closed is None and s.diagnostics == ()


def test_errors():
    with pytest.raises(RegimeError, match="OutsideValidity"):
        solve_matching(Kinematics(10.0, 1.0, math.pi / 6))
    with pytest.raises(SingularBarrierError):
        solve_matching(Kinematics(10.0, 9.0, math.pi / 4))


def test_vectorized_closed_form_matches_scalar():
    p_x = np.array([1.0, 2.0, 3.0])
    p_z = np.array([0.5, 0.1, 2.0])
    pxp = np.array([2j, 0.3j, 1.5])
    vec = closed_form_coefficients(p_x, p_z, pxp, 0.7, 1.5)
    for i in range(3):
        scalar = closed_form_coefficients(p_x[i], p_z[i], pxp[i], 0.7, 1.5)
        np.testing.assert_allclose([v[i] for v in vec], scalar, rtol=1e-15)


def test_large_deviation_is_logged(caplog, monkeypatch):
    import dirac_gh.matching as mod
    monkeypatch.setattr(mod, "SOLVE_WARN_RTOL", -1.0)
    with caplog.at_level(logging.WARNING, logger="dirac_gh.matching"):
        solve_matching(Kinematics(10.0, 25.0, 0.3))
    assert "deviate from LU" in caplog.text


valid = st.builds(
    Kinematics,
    E=st.floats(1.01, 50.0),
    V=st.floats(0.01, 100.0),
    phi=st.floats(0.0, 1.5),
    ell=st.floats(-10.0, 10.0),
).filter(lambda k: k.V > k.E - math.hypot(k.E * math.sin(k.phi), math.cos(k.phi))
         and abs(k.V - k.E + 1) > 1e-3)


@given(valid)
def test_closed_form_solves_system(k):
    m = solve_matching(k)
    assert m.residual <= 1e-12 * np.max(np.abs(m.rhs)) * max(1.0, abs(m.n))
    M, d = matching_system(*_args(k))
    np.testing.assert_allclose(M @ m.coefficients, d, rtol=0,
                               atol=1e-11 * np.max(np.abs(d)) * max(1.0, abs(m.n)))


def _args(k):
    mom = derive_momenta(k)
    return mom.p_x, mom.p_z, mom.p_x_prime, (k.E + 1) / (k.V - k.E + 1), k.ell


@given(valid, st.floats(-50.0, 50.0))
def test_wavefunction_continuous(k, z):
    psi1, psi2 = interface_values(k, solve_matching(k), z)
    assert np.max(np.abs(psi1 - psi2)) <= 1e-12 * np.max(np.abs(psi1)) * 10


@given(valid)
def test_flux_balance(k):
    s = scatter(k)
    if s.regime is Regime.TRANSMITTING:
        assert abs(s.R + s.T - 1.0) <= 1e-10
        assert 0.0 <= s.R <= 1.0 + 1e-12
    else:
        m = solve_matching(k)
        assert abs(abs(m.A) ** 2 + abs(m.B) ** 2 - (1 + k.ell ** 2)) <= 1e-10 * (1 + k.ell ** 2)


@given(valid)
def test_propagating_amplitudes_are_real(k):
    m = solve_matching(k)
    if derive_momenta(k).q_x is None:
        assert np.all(m.coefficients.imag == 0)


@settings(max_examples=50)
@given(valid, st.floats(-10.0, 10.0))
def test_coefficients_do_not_depend_on_spin_mixing(k, ell):
    base = scatter(k)
    other = scatter(Kinematics(k.E, k.V, k.phi, ell=ell))
    assert abs(base.R - other.R) < 1e-12
    assert abs(base.T - other.T) < 1e-12


@settings(max_examples=30)
@given(st.floats(1.5, 50.0), st.floats(0.0, 1.4))
def test_reflection_grows_towards_total_reflection(E, phi):
    # from V = 2E (no reflection) towards the upper window edge E + gamma
    k0 = Kinematics(E, 2 * E, phi)
    g = math.hypot(E * math.sin(phi), math.cos(phi))
    vs = np.linspace(2 * E, E + g * (1 + 1e-6), 40)
    rs = [scatter(Kinematics(E, v, phi)).R for v in vs]
    assert scatter(k0).R < 1e-14
    assert np.all(np.diff(rs) >= -1e-14)
    assert rs[-1] > 0.9
