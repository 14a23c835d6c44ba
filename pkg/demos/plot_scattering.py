"""
Reflection and transmission at a potential step
===============================================

A Dirac particle of energy ``E`` meets a step of height ``V`` at angle ``phi``.
Depending on ``V`` the transmitted wave propagates (``V >= E + gamma``),
decays (``E - gamma < V < E + gamma``) or the model does not apply. This
script sweeps the barrier height and prints where each regime begins.
"""
import math

import numpy as np

from dirac_gh import Kinematics, Regime, classify_regime, gamma, scatter

###############################################################################
# The regime window
# -----------------
# ``gamma`` sets the half-width of the total-reflection window around ``E``.
# At normal incidence it equals the rest energy; at grazing incidence it
# approaches ``E``.

E = 10.0
for phi_deg in (0.0, 30.0, 60.0, 85.0):
    g = gamma(Kinematics.from_degrees(E, 1.0, phi_deg))
    print(f"phi = {phi_deg:4.0f} deg  gamma = {g:7.4f}  window: {E - g:7.4f} < V < {E + g:7.4f}")

###############################################################################
# Sweeping the barrier height
# ---------------------------
# Above the window the step transmits. Reflection is strongest just above the
# window edge and vanishes at ``V = 2E``, where the two sides are matched.

phi_deg = 30.0
V = np.linspace(1.0, 40.0, 400)
R = np.full(V.shape, np.nan)
regimes = []
for i, v in enumerate(V):
    k = Kinematics.from_degrees(E, v, phi_deg)
    regime = classify_regime(k)
    regimes.append(regime)
    if regime is not Regime.OUTSIDE_VALIDITY and abs(v - E + 1.0) > 1e-9:
        R[i] = scatter(k).R

for regime in Regime:
    hits = [v for v, r in zip(V, regimes) if r is regime]
    if hits:
        print(f"{regime.value:>16}: V from {min(hits):6.2f} to {max(hits):6.2f}")
print(f"R at V = 2E: {scatter(Kinematics.from_degrees(E, 2 * E, phi_deg)).R:.2e}")

###############################################################################
# The spin mix does not matter
# ----------------------------
# ``ell`` mixes the two positive-energy spin states of the incident wave. The
# probabilities are the same for every mix.

k_values = [Kinematics.from_degrees(E, 25.0, phi_deg, ell=ell) for ell in (0.0, 0.5, 1.0, 10.0)]
print("R for ell = 0, 0.5, 1, 10:", [f"{scatter(k).R:.15f}" for k in k_values])

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
    g = gamma(Kinematics.from_degrees(E, 1.0, phi_deg))
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.plot(V, R, label="R")
    ax.plot(V, 1 - R, label="T")
    ax.axvspan(E - g, E + g, color="0.9", label="total reflection")
    ax.set_xlabel("V / (m c^2)")
    ax.set_ylabel("probability")
    ax.set_title(f"E = {E:g}, phi = {phi_deg:g} deg")
    ax.legend()
    fig.tight_layout()
    fig.savefig("scattering.png", dpi=120)
    print("saved scattering.png")
