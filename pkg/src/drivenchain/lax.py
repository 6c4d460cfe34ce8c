"""Lax operators whose vacuum contraction gives the NESS amplitude operator.

A :class:`LaxOperator` stores a ``(d, d, D, D)`` array ``grid`` in which
``grid[i, j]`` is the auxiliary matrix multiplying the physical unit
``|i><j|``.  The amplitude operator is

    S_n = sum <left| grid[i1,j1] ... grid[in,jn] |right> |i1><j1| (x) ... (x) |in><jn|

and the steady state is ``rho = S_n S_n^dagger``.
"""

from dataclasses import dataclass, field

import numpy as np

from .auxiliary import q_number, verma_q, verma_classical, gl_n, boson

GAUGES = ("lowest-weight", "chebyshev", "classical")


@dataclass
class LaxOperator:
    grid: np.ndarray
    left: np.ndarray
    right: np.ndarray
    params: dict = field(default_factory=dict)
    convention: str = "lowest-weight"

    @property
    def d(self):
        return self.grid.shape[0]

    @property
    def D(self):
        return self.grid.shape[2]

    def __getitem__(self, ij):
        return self.grid[ij]


def _vacuum(D, k=0):
    v = np.zeros(D, dtype=complex)
    v[k] = 1.0
    return v


def eps_from_p(p, gamma):
    """Coupling ``eps = 4i cos(gamma p) / [p]_q`` of the boundary solution."""
    if gamma == 0:
        return 4j / p
    return 4j * np.cos(gamma * p) / q_number(p, gamma)


def solve_p(eps, gamma, tol=1e-14, maxiter=200):
    """Representation parameter ``p`` for a real coupling ``eps``.

    Solves ``eps_from_p(p) = eps`` by complex Newton iteration.  In the
    easy-plane regime the starting point is ``pi/(2 gamma) + i y`` when
    ``eps < 4 sin(gamma)`` (the purely imaginary branch does not exist there)
    and the isotropic value ``4i/eps`` otherwise.
    """
    if gamma == 0:
        return 4j / eps
    if np.isreal(gamma) and 0 < np.real(gamma) < np.pi and eps < 4 * np.sin(np.real(gamma)):
        g = np.real(gamma)
        # on Re p = pi/(2 gamma): eps = 4 sin(g) tanh(g y)
        y = np.arctanh(eps / (4 * np.sin(g))) / g
        p = np.pi / (2 * g) + 1j * y
    else:
        p = 4j / eps
        if np.isreal(gamma):
            g = np.real(gamma)
            ratio = eps / (4 * np.sin(g))
            if ratio > 1:
                # eps = 4 sin(g) coth(g y) on the imaginary axis
                p = 1j * np.arctanh(1 / ratio) / g
    for _ in range(maxiter):
        f = eps_from_p(p, gamma) - eps
        if abs(f) <= tol * max(1.0, eps):
            break
        qp = q_number(p, gamma)
        c, s = np.cos(gamma * p), np.sin(gamma * p)
        df = -4j * gamma * (s / qp + c * c / (np.sin(gamma) * qp * qp))
        step = f / df
        p = p - step
        if abs(step) < tol * max(1.0, abs(p)):
            break
    else:
        raise RuntimeError(f"eps-p inversion did not converge for eps={eps}, gamma={gamma}")
    if abs(eps_from_p(p, gamma) - eps) > 1e-9 * max(1.0, eps):
        raise RuntimeError(f"eps-p inversion converged to a spurious root for eps={eps}")
    return p


def xxz_lax(p, gamma, D, u=0.0):
    """Lowest-weight gauge Lax operator of the XXZ chain.

    ``grid = [[ [u + s^z]_q, s^- ], [ s^+, [u - s^z]_q ]]`` on ``verma_q(p)``.
    """
    rep = verma_q(p, gamma, D)
    z = np.diag(rep["z"])
    grid = np.zeros((2, 2, D, D), dtype=complex)
    grid[0, 0] = np.diag(q_number(u + z, gamma))
    grid[1, 1] = np.diag(q_number(u - z, gamma))
    grid[0, 1] = rep["-"]
    grid[1, 0] = rep["+"]
    params = {"kind": "xxz", "p": p, "gamma": gamma, "u": u, "eps": eps_from_p(p, gamma),
              "exactness": rep.exactness}
    return LaxOperator(grid, _vacuum(D), _vacuum(D), params, "lowest-weight")


def xxz_boundary_operator(lax):
    """Diagonal companion ``B`` of the lowest-weight Lax operator.

    Satisfies ``[h, L (x) L] = B (x) L - L (x) B`` with ``B = -2 cos(gamma s^z) 1``,
    which equals ``-(2 sin(gamma)/gamma) dL/du`` at ``u = 0``.
    """
    gamma = lax.params["gamma"]
    D = lax.D
    z = np.arange(D) - lax.params["p"]
    c = -2 * np.cos(gamma * z) if gamma != 0 else -2 * np.ones(D)
    B = np.zeros_like(lax.grid)
    B[0, 0] = B[1, 1] = np.diag(c)
    return B


def twisted_lax(p, gamma, theta, D):
    """Lax operator of the Peierls-twisted chain.

    With ``E = exp(i theta s^z)`` and ``F = exp(i theta (s^z + 1/2))``:
    ``grid[0,0] = e^{-i theta/2}[s^z]_q E``, ``grid[1,1] = e^{i theta/2}[-s^z]_q E``,
    ``grid[0,1] = F s^-``, ``grid[1,0] = s^+ F``.  The twist leaves the
    coupling relation and the boundary channels unchanged.
    """
    rep = verma_q(p, gamma, D)
    z = np.diag(rep["z"])
    E = np.diag(np.exp(1j * theta * z))
    F = np.diag(np.exp(1j * theta * (z + 0.5)))
    grid = np.zeros((2, 2, D, D), dtype=complex)
    grid[0, 0] = np.exp(-0.5j * theta) * np.diag(q_number(z, gamma)) @ E
    grid[1, 1] = np.exp(0.5j * theta) * np.diag(q_number(-z, gamma)) @ E
    grid[0, 1] = F @ rep["-"]
    grid[1, 0] = rep["+"] @ F
    params = {"kind": "xxz-twisted", "p": p, "gamma": gamma, "theta": theta, "eps": eps_from_p(p, gamma)}
    return LaxOperator(grid, _vacuum(D), _vacuum(D), params, "lowest-weight")


def chebyshev_amplitudes(coupling, gamma, D):
    """Diagonal amplitudes ``a_k`` and hopping products ``b_k``.

    ``a_k = cos(k gamma) + (i c / 2) sin(k gamma)/sin(gamma)`` and
    ``b_k - b_{k-1} = a_{k+1} a_k - a_k a_{k-1}`` with ``b_0 = i c``.
    """
    k = np.arange(D + 1)
    if gamma == 0:
        a = 1 + 0.5j * coupling * k
    else:
        a = np.cos(k * gamma) + 0.5j * coupling * q_number(k, gamma)
    b = np.zeros(D, dtype=complex)
    b[0] = 1j * coupling
    for j in range(1, D):
        b[j] = b[j - 1] + a[j + 1] * a[j] - a[j] * a[j - 1]
    return a[:D], b


def chebyshev_lax(coupling, gamma, D):
    """Tridiagonal gauge with ``A_0 = diag(a_k)``, unit ``A_+`` and ``A_- = b_k``.

    ``A_0`` multiplies the identity, ``A_+`` multiplies ``sigma^+`` and
    ``A_-`` multiplies ``sigma^-``.  The operator satisfies
    ``i[H, S_n] = c (sigma^z (x) S_{n-1} - S_{n-1} (x) sigma^z)`` and its
    ``S_n S_n^dagger`` is the fixed point at channel rate ``2c``.
    """
    a, b = chebyshev_amplitudes(coupling, gamma, D)
    A0 = np.diag(a)
    Ap = np.diag(np.ones(D - 1), 1).astype(complex)
    Am = np.diag(b[:-1], -1)
    grid = np.zeros((2, 2, D, D), dtype=complex)
    grid[0, 0] = grid[1, 1] = A0
    grid[0, 1] = Ap
    grid[1, 0] = Am
    params = {"kind": "xxz", "gamma": gamma, "coupling": coupling, "eps": 2 * coupling}
    return LaxOperator(grid, _vacuum(D), _vacuum(D), params, "chebyshev")


def classical_lax(p, D):
    """Triangular gauge of the isotropic chain.

    ``A_0 = p - k`` multiplies the identity, ``A_+`` multiplies ``sigma^+``,
    ``A_-`` multiplies ``sigma^-``.  With ``p = 4i/eps`` the vacuum
    contraction is the isotropic NESS amplitude, upper triangular in the
    computational basis with diagonal ``p^n``.
    """
    rep = verma_classical(p, D)
    grid = np.zeros((2, 2, D, D), dtype=complex)
    grid[0, 0] = grid[1, 1] = rep["0"]
    grid[0, 1] = rep["+"]
    grid[1, 0] = rep["-"]
    return LaxOperator(grid, _vacuum(D), _vacuum(D), {"kind": "xxx", "p": p, "eps": 4j / p}, "classical")


def sun_parameters(N, eps):
    """Representation weights ``(r0, r1)`` of the gl_N solution."""
    r0 = -4j / (eps * (N - 1) ** 2)
    return r0, -N * r0


def sun_lax(N, eps, cap):
    """Lax operator of the ``N``-state permutation chain.

    ``grid[a, b] = G[b, a]`` with ``G`` the polynomial realization of
    :func:`drivenchain.auxiliary.gl_n` at weights :func:`sun_parameters`.
    """
    r0, r1 = sun_parameters(N, eps)
    rep = gl_n(N, r0, r1, cap)
    D = rep.D
    grid = np.zeros((N, N, D, D), dtype=complex)
    for a in range(N):
        for b in range(N):
            grid[a, b] = rep[(b, a)]
    params = {"kind": "suN", "N": N, "eps": eps, "r0": r0, "r1": r1}
    return LaxOperator(grid, _vacuum(D), _vacuum(D), params, "lowest-weight")


def lai_sutherland_parameters(eps):
    """``(eta, p) = (i eps, 1/2 + i/eps)``."""
    return 1j * eps, 0.5 + 1j / eps


def lai_sutherland_lax(eps, D, mu=0.0):
    """Boson (x) boson (x) Verma Lax operator of the three-level chain.

    Site basis (up, hole, down) = (0, 1, 2).  Auxiliary space is
    ``C^D (x) C^D (x) C^D`` with annihilators ``b_up``, ``b_dn`` and the
    lowest-weight ladder ``s^+|l> = l|l-1>``, ``s^-|l> = (2p - l)|l+1>``,
    ``s^z|l> = (p - l)|l>``.  Entries in the hole row are dressed by
    ``exp(mu/2)``.
    """
    eta, p = lai_sutherland_parameters(eps)
    b = boson(D)
    I = np.eye(D)
    k = np.arange(D)
    sP = np.diag(k[1:] + 0j, 1)
    sM = np.diag(2 * p - k[:-1], -1)
    sZ = np.diag(p - k)
    kron3 = lambda a, b_, c: np.kron(np.kron(a, b_), c)
    bu = kron3(b, I, I)
    bd = kron3(I, b, I)
    splus = kron3(I, I, sP)
    sminus = kron3(I, I, sM)
    sz = kron3(I, I, sZ)
    Id = np.eye(D ** 3)
    grid = np.zeros((3, 3, D ** 3, D ** 3), dtype=complex)
    grid[0, 1] = bu
    grid[1, 0] = eta * bu.T
    grid[1, 2] = eta * bd
    grid[2, 1] = bd.T
    grid[0, 2] = eta * (bu @ bd + splus)
    grid[2, 0] = eta * (bu.T @ bd.T - sminus)
    grid[0, 0] = eta * (bu.T @ bu + 0.5 * Id - sz)
    grid[2, 2] = eta * (bd.T @ bd + 0.5 * Id - sz)
    grid[1, 1] = Id
    grid[1] *= np.exp(mu / 2)
    params = {"kind": "lai-sutherland", "eps": eps, "mu": mu, "p": p, "eta": eta, "ladder": D}
    return LaxOperator(grid, _vacuum(D ** 3), _vacuum(D ** 3), params, "lowest-weight")


def default_cap(n):
    """Ladder depth sufficient for exact vacuum-to-vacuum contraction over ``n`` sites."""
    return n // 2 + 2


def build_lax(model, D=None, gauge=None):
    """Lax operator for a :class:`~drivenchain.operators.ChainModel`.

    Parameters
    ----------
    model : ChainModel
    D : int, optional
        Ladder truncation.  Defaults to ``n // 2 + 2``; at a root of unity
        ``gamma = pi l / m`` the exact truncation ``D = m`` is used when smaller.
    gauge : str, optional
        ``lowest-weight`` (default), ``chebyshev`` or ``classical`` for the
        spin-1/2 chains.
    """
    n = model.n
    if D is None:
        D = default_cap(n)
        if model.gamma_frac is not None and model.kind in ("xxz", "xxz-twisted"):
            D = min(D, model.gamma_frac[1])
    gauge = gauge or "lowest-weight"
    kind = model.kind
    if kind in ("xxx", "xxz"):
        gamma = model.gamma
        if gauge == "chebyshev":
            return chebyshev_lax(model.eps / 2, gamma, D)
        if gauge == "classical":
            if gamma != 0:
                raise ValueError("the triangular gauge is implemented for the isotropic chain")
            return classical_lax(4j / model.eps, D)
        return xxz_lax(solve_p(model.eps, gamma), gamma, D)
    if kind == "xxz-twisted":
        gamma = model.gamma
        return twisted_lax(solve_p(model.eps, gamma), gamma, model.theta, D)
    if kind == "suN":
        return sun_lax(model.N, model.eps, D if D is not None else n // 2 + 1)
    if kind == "lai-sutherland":
        return lai_sutherland_lax(model.eps, D, model.mu)
    raise ValueError(kind)
