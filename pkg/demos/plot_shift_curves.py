"""
Sign of the lateral shift
=========================

At ``E = 10`` the shift is computed against the incidence angle for three
barrier heights close to ``E``. Just below ``E`` the shift is negative at small
angles and changes sign once. At or above ``E`` it stays positive. The
crossing angle has a closed form, which is checked here against bisection.
"""
import math

import numpy as np

from dirac_gh import (
    Kinematics,
    bisect_critical_angle,
    critical_angle,
    critical_energy,
    critical_potential,
    gh_shift_analytic,
)

E = 10.0
BARRIERS = (9.7, 10.0, 10.4)
phi_deg = np.linspace(89.0 / 300, 89.0, 300)

###############################################################################
# Three curves
# ------------

curves = {
    V: np.array([gh_shift_analytic(Kinematics.from_degrees(E, V, p)).delta_z for p in phi_deg])
    for V in BARRIERS
}
for V, dz in curves.items():
    print(f"V = {V:5.1f}: min {dz.min():+.4f}, max {dz.max():+.4f}, "
          f"sign changes {np.count_nonzero(np.diff(np.sign(dz)))}")

###############################################################################
# Where the sign changes
# ----------------------
# The numerator ``(m^2 - E^2) cos^2 phi + E V`` decides the sign. Setting it to
# zero gives a threshold in angle, barrier height or energy.

th = critical_angle(E, 9.7)
print(f"critical angle for V = 9.7: {math.degrees(th.value):.6f} deg (closed form), "
      f"{math.degrees(bisect_critical_angle(E, 9.7)):.6f} deg (bisection)")
print(f"critical barrier at phi = 0: V_c = {critical_potential(E, 0.0).value:.6f}")
print(f"critical energy for V = 9, phi = 0: E_c = {critical_energy(9.0, 0.0).value:.6f}")
print(f"V = 9.95 has a crossing: {critical_angle(E, 9.95).exists}")

###############################################################################
# The curves converge at large angles
# -----------------------------------

for p in (20.0, 80.0):
    vals = [gh_shift_analytic(Kinematics.from_degrees(E, V, p)).delta_z for V in BARRIERS]
    print(f"phi = {p:g} deg: " + ", ".join(f"{v:.4f}" for v in vals))

###############################################################################
# Plot
# ----

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, ax = plt.subplots(figsize=(6, 3.5))
    for V, dz in curves.items():
        ax.plot(phi_deg, dz, label=f"V = {V:g}")
    ax.axhline(0.0, color="0.5", lw=0.8)
    ax.axvline(math.degrees(th.value), color="0.5", ls=":", lw=0.8)
    # the shift grows without bound towards grazing incidence
    ax.set_ylim(-0.1, 0.6)
    ax.set_xlabel("phi (deg)")
    ax.set_ylabel("shift / (hbar / m c)")
    ax.set_title(f"E = {E:g}")
    ax.legend()
    fig.tight_layout()
    fig.savefig("shift_curves.png", dpi=120)
    print("saved shift_curves.png")
