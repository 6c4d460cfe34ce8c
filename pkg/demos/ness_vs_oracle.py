"""Compare the matrix-product steady state with the Liouvillian null vector."""

from drivenchain.lax import build_lax
from drivenchain.lindblad import build_liouvillian, solve_ness, fidelity, relative_residual
from drivenchain.ness import assemble_ness
from drivenchain.operators import ChainModel

print(f"{'n':>3} {'eps':>5} {'residual':>10} {'1 - fidelity':>13}")
for eps in (0.5, 1.0, 2.0):
    for n in range(2, 7):
        m = ChainModel("xxz", n=n, eps=eps, gamma_frac=(1, 3))
        L = build_liouvillian(m)
        rho = assemble_ness(build_lax(m), n).rho
        sigma = solve_ness(L).states[0]
        print(f"{n:>3} {eps:>5} {relative_residual(L, rho):>10.1e} {1 - fidelity(rho, sigma):>13.1e}")
