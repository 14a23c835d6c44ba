"""Reflection of Dirac particles at a potential step and the Goos-Hänchen shift.

Natural units ``hbar = c = 1``; with the default ``m = 1`` energies are in
units of the rest energy and lengths in reduced Compton wavelengths.
"""
from .errors import (
    ConvergenceError,
    DiracGHError,
    DomainError,
    RegimeError,
    SingularBarrierError,
)
from .kinematics import (
    Kinematics,
    Momenta,
    Regime,
    classify_regime,
    derive_momenta,
    gamma,
    regime_window,
)
from .spinors import (
    FluxComponents,
    current_x,
    incident_spinor,
    reflected_basis,
    transmitted_basis,
)
from .matching import MatchResult, ScatterSummary, interface_values, scatter, solve_matching
from .ghshift import (
    ShiftForms,
    ShiftResult,
    Threshold,
    bisect_critical_angle,
    bisect_critical_energy,
    bisect_critical_potential,
    critical_angle,
    critical_energy,
    critical_potential,
    gh_shift_analytic,
    gh_shift_fd_oracle,
    reflection_phase,
    shift_forms,
    shift_sign_predicate,
)
from .wavepacket import (
    BeamSpec,
    Envelope,
    PacketProfile,
    reflected_profile,
    shift_from_packet,
    spectrum,
    write_profile,
)

__version__ = "0.1.0"
