"""Drude weight lower bounds from the pseudo-local charges at rational anisotropy."""

import numpy as np

from drivenchain import pseudolocal as pl

print(f"{'l/m':>5} {'Delta':>8} {'D_Z':>10} {'D_K':>10}")
for l, m in [(1, 2), (1, 3), (1, 5), (2, 5), (1, 7), (3, 7)]:
    delta = np.cos(np.pi * l / m)
    dk = pl.dk_closed(l, m) if l == 1 else float("nan")
    print(f"{l}/{m:<3} {delta:>8.4f} {pl.dz_closed(l, m):>10.6f} {dk:>10.6f}")

print("numerical D_Z from the transfer matrix, (1,3):", pl.dz_numeric(1, 3))
