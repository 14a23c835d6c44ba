"""Random kinematic samples shared by the unit and acceptance tests."""
import math

import numpy as np

from dirac_gh import Kinematics, Regime, classify_regime, gamma


def random_points(rng, count, regime=None, E=(1.0, 50.0), V=(0.0, 100.0),
                  phi_deg=(0.0, 89.0), ell=(-10.0, 10.0), edge_margin=None,
                  singular_margin=1e-6):
    """Draw ``count`` kinematic points, optionally restricted to one regime.

    ``regime`` may be a :class:`Regime` or a set of them. ``edge_margin`` keeps
    total-reflection points with ``gamma^2 - (E - V)^2 > edge_margin * gamma^2``.
    Points within ``singular_margin`` of ``V = E - 1`` are skipped.
    """
    if isinstance(regime, Regime):
        regime = {regime}
    out = []
    while len(out) < count:
        e = rng.uniform(*E)
        v = rng.uniform(*V)
        phi = math.radians(rng.uniform(*phi_deg))
        if e <= 1.0 or v <= 0.0 or phi <= 0.0:
            continue
        k = Kinematics(e, v, phi, ell=rng.uniform(*ell))
        r = classify_regime(k)
        if regime is not None and r not in regime:
            continue
        if r is not Regime.OUTSIDE_VALIDITY and abs(v - e + 1.0) < singular_margin:
            continue
        if edge_margin is not None:
            g2 = gamma(k) ** 2
            if not g2 - (e - v) ** 2 > edge_margin * g2:
                continue
        out.append(k)
    return out
