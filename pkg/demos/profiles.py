"""Magnetization profiles of long chains: flat bulk for |Delta| < 1, kink for Delta > 1."""

import numpy as np

from drivenchain.observables import xxz_two_leg, magnetization_profile, rescaled_coordinate, subdiffusive_slope
from drivenchain.operators import ChainModel

for delta in (0.5, 1.5):
    print(f"Delta = {delta}")
    for n in (10, 20, 40, 80):
        prof = magnetization_profile(xxz_two_leg(ChainModel("xxz", n=n, eps=1.0, delta=delta)), n)
        xs = rescaled_coordinate(n)
        pick = [int(k) for k in np.linspace(0, n - 1, 7)]
        print(f"  n={n:>3}  " + "  ".join(f"{xs[k]:+.2f}:{prof[k]:+.3f}" for k in pick))

print(f"isotropic current exponent (log J vs log n): {subdiffusive_slope(2.0, 8, 64):.3f}")
