"""Pseudo-local almost-conserved charges of the gapless XXZ chain and Drude-weight bounds.

At anisotropy ``Delta = cos(pi l / m)`` a family ``Z_n(phi)`` of operators is
generated by a split-vacuum Lax operator with auxiliary states
``|L>, |R>, |1>, ..., |m-1>``; ``Z_n(phi) = <L| L(phi)^{(x) n} |R>``.  Their
Hilbert-Schmidt overlaps ``K_n(phi, phi') = 2^-n tr(Z_n(conj phi)^dag Z_n(phi'))``
are generated by an ``(m+1)``-dimensional transfer matrix and grow linearly
in ``n``, which bounds the spin Drude weight from below.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as la

from .auxiliary import tilde_spin
from .basis import sigma_z, sigma_plus, sigma_minus
from .lax import LaxOperator, chebyshev_lax
from .ness import contract_s
from .operators import ChainModel, build_hamiltonian, embed


def strip_halfwidth(m):
    return np.pi / (2 * m)


def in_strip(phi, m):
    """``|Re phi - pi/2| < pi/(2m)``."""
    return abs(np.real(phi) - np.pi / 2) < strip_halfwidth(m)


def tilde_lax(l, m, phi, cap=None):
    """Split-vacuum Lax operator as a physical ``2 x 2`` grid.

    ``grid[0,0] = L^0 + L^z``, ``grid[1,1] = L^0 - L^z``, ``grid[0,1] = L^+``,
    ``grid[1,0] = L^-``; boundary vectors ``<L|`` and ``|R>``.
    """
    rep = tilde_spin(l, m, phi, cap)
    D = rep.D
    grid = np.zeros((2, 2, D, D), dtype=complex)
    grid[0, 0] = rep["0"] + rep["z"]
    grid[1, 1] = rep["0"] - rep["z"]
    grid[0, 1] = rep["+"]
    grid[1, 0] = rep["-"]
    left = np.zeros(D, dtype=complex)
    right = np.zeros(D, dtype=complex)
    left[0] = right[1] = 1.0
    return LaxOperator(grid, left, right, {"kind": "tilde", "l": l, "m": m, "phi": phi}, "highest-weight")


@dataclass
class ZCharge:
    l: int
    m: int
    phi: complex
    n: int
    matrix: np.ndarray
    lax: LaxOperator


def build_z(l, m, phi, n, check_strip=True):
    """Dense ``Z_n(phi)``."""
    if check_strip and not in_strip(phi, m):
        raise ValueError(f"phi={phi} lies outside the strip of width pi/{m} around pi/2")
    if abs(np.sin(phi)) < 1e-12:
        raise ValueError("cot(phi) pole")
    if n > 12:
        raise ValueError("dense Z_n limited to n <= 12")
    lax = tilde_lax(l, m, phi)
    return ZCharge(l, m, phi, n, contract_s(lax, n, guard=False), lax)


def xxz_hamiltonian(l, m, n):
    return build_hamiltonian(ChainModel("xxz", n=n, eps=1.0, gamma_frac=(l, m))).toarray()


def almost_commutation_residual(l, m, phi, n):
    """Relative residual of
    ``[H, Z_n] = (s^z (x) 1 - 1 (x) s^z) - 2 sin(gamma) cot(phi) (1 (x) Z_{n-1} - Z_{n-1} (x) 1)``.
    """
    g = np.pi * l / m
    H = xxz_hamiltonian(l, m, n)
    Z = build_z(l, m, phi, n).matrix
    Zm = build_z(l, m, phi, n - 1).matrix
    I2 = np.eye(2)
    In = np.eye(2 ** (n - 1))
    lhs = H @ Z - Z @ H
    rhs = (np.kron(sigma_z, In) - np.kron(In, sigma_z)
           - 2 * np.sin(g) / np.tan(phi) * (np.kron(I2, Zm) - np.kron(Zm, I2)))
    return la.norm(lhs - rhs) / max(1.0, la.norm(lhs), la.norm(rhs))


def hs_inner(A, B):
    """Normalized Hilbert-Schmidt product ``2^-n tr(A^dag B)``."""
    return np.vdot(A.ravel(), B.ravel()) / A.shape[0]


def transfer_matrix(l, m, phi, phip):
    """The ``(m+1)``-dimensional transfer matrix ``T(phi, phi')``.

    Basis ``|L>, |R>, |1>, ..., |m-1>``.  The bulk block is the symmetric
    tridiagonal matrix with diagonal ``cos^2(gamma k) + sin^2(gamma k) cot(phi) cot(phi')``
    and off-diagonal ``|sin(gamma k) sin(gamma (k+1))| / (2 sin(phi) sin(phi'))``.
    """
    g = np.pi * l / m
    T = np.zeros((m + 1, m + 1), dtype=complex)
    T[0, 0] = T[1, 1] = 1.0
    T[0, 2] = T[2, 1] = 0.5
    for k in range(1, m):
        T[k + 1, k + 1] = np.cos(g * k) ** 2 + np.sin(g * k) ** 2 / (np.tan(phi) * np.tan(phip))
        if k < m - 1:
            v = abs(np.sin(g * k) * np.sin(g * (k + 1))) / (2 * np.sin(phi) * np.sin(phip))
            T[k + 1, k + 2] = T[k + 2, k + 1] = v
    return T


def bulk_block(l, m, phi, phip):
    return transfer_matrix(l, m, phi, phip)[2:, 2:]


def k_transfer(l, m, phi, phip, n):
    """``K_n = <L| T(phi, phi')^n |R>`` by vector iteration."""
    T = transfer_matrix(l, m, phi, phip)
    v = np.zeros(m + 1, dtype=complex)
    v[1] = 1.0
    for _ in range(n):
        v = T @ v
    return v[0]


def k_sequence(l, m, phi, phip, nmax):
    T = transfer_matrix(l, m, phi, phip)
    v = np.zeros(m + 1, dtype=complex)
    v[1] = 1.0
    out = [v[0]]
    for _ in range(nmax):
        v = T @ v
        out.append(v[0])
    return np.array(out)


def k_brute(l, m, phi, phip, n):
    """``2^-n tr(Z_n(conj phi)^dag Z_n(phi'))`` from dense operators."""
    A = build_z(l, m, np.conj(phi), n).matrix
    B = build_z(l, m, phip, n).matrix
    return hs_inner(A, B)


def k_closed(l, m, phi, phip):
    """``K(phi, phi') = -sin(phi) sin(phi') / (2 sin^2 gamma) * sin((m-1)(phi+phi')) / sin(m(phi+phi'))``."""
    g = np.pi * l / m
    s = phi + phip
    return -np.sin(phi) * np.sin(phip) / (2 * np.sin(g) ** 2) * np.sin((m - 1) * s) / np.sin(m * s)


def k_center(l, m):
    """Limit of :func:`k_closed` at ``phi = phi' = pi/2``: ``(m-1)/(2m sin^2 gamma)``."""
    return (m - 1) / (2 * m * np.sin(np.pi * l / m) ** 2)


def leading_bulk_eigenvalue(l, m, phi, phip=None):
    """Largest ``|tau|`` of the bulk tridiagonal block (``< 1`` inside the strip)."""
    phip = phi if phip is None else phip
    return float(np.max(np.abs(la.eigvals(bulk_block(l, m, np.conj(phi), phip)))))


@dataclass
class OverlapReport:
    l: int
    m: int
    phi: complex
    phip: complex
    n: int
    k_transfer: complex
    k_closed: complex
    k_brute: complex | None = None
    tau1: float | None = None
    extra: dict = field(default_factory=dict)


def overlap_transfer(l, m, phi, phip, n, brute_max=10):
    """Transfer-matrix overlap with the brute-force value for ``n <= brute_max``."""
    kt = k_transfer(l, m, phi, phip, n)
    kb = k_brute(l, m, phi, phip, n) if n <= brute_max else None
    tau = leading_bulk_eigenvalue(l, m, phi, phip)
    return OverlapReport(l, m, phi, phip, n, kt, k_closed(l, m, phi, phip), kb, tau)


def dz_closed(l, m):
    """``D_Z = (1/2)(1 - Delta^2) m / (m - 1)``."""
    return 0.5 * np.sin(np.pi * l / m) ** 2 * m / (m - 1)


def dz_numeric(l, m, window=(100, 400)):
    """``(1/4) lim n / K_n`` at ``phi = phi' = pi/2``.

    ``K_n = a n + b + sum_i c_i tau_i^n`` exactly, with ``tau_i`` the bulk
    eigenvalues; the coefficients are fitted over ``window`` and ``1/(4a)``
    is returned.
    """
    n0, n1 = window
    K = np.real(k_sequence(l, m, np.pi / 2, np.pi / 2, n1))
    ns = np.arange(n0, n1 + 1)
    taus = np.real(la.eigvals(bulk_block(l, m, np.pi / 2, np.pi / 2)))
    cols = [ns.astype(float), np.ones(len(ns))] + [np.sign(t) ** ns * np.abs(t) ** (ns - n0) for t in taus]
    coef, *_ = la.lstsq(np.column_stack(cols), K[n0:n1 + 1])
    return 1.0 / (4 * coef[0])


def dk_closed(l, m):
    """``[sin^2(pi l/m)/sin^2(pi/m)] (1 - (m/2pi) sin(2pi/m))``."""
    return np.sin(np.pi * l / m) ** 2 / np.sin(np.pi / m) ** 2 * (1 - m / (2 * np.pi) * np.sin(2 * np.pi / m))


def strip_nodes(m, nx=32, ny=128, ymax=10.0):
    """Product Gauss-Legendre rule on the strip, with ``y = sinh(T t)`` in the imaginary direction.

    Returns complex nodes and area weights for ``d Re(phi) d Im(phi)``.
    """
    w = strip_halfwidth(m)
    xs, wx = np.polynomial.legendre.leggauss(nx)
    xs, wx = np.pi / 2 + w * xs, w * wx
    t, wt = np.polynomial.legendre.leggauss(ny)
    T = np.arcsinh(ymax)
    ys, wy = np.sinh(T * t), wt * T * np.cosh(T * t)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    return (X + 1j * Y).ravel(), np.outer(wx, wy).ravel()


def measure_constant(l, m, phi=np.pi / 2, nodes=None):
    """Constant ``c`` such that ``f = c/|sin|^4`` solves ``int K(conj phi, phi') f(phi') d^2phi' = 1``."""
    z, w = strip_nodes(m) if nodes is None else nodes
    f = 1.0 / np.abs(np.sin(z)) ** 4
    return 1.0 / np.sum(w * k_closed(l, m, np.conj(phi), z) * f)


def dk_quadrature(l, m, nx=32, ny=128, probes=None):
    """``D_K = (1/4) int f`` with the measure ``f = c/|sin phi|^4`` on the strip.

    Returns ``(D_K, c, spread)`` where ``spread`` is the relative variation of
    ``c`` across the probe points (zero for an exact solution).
    """
    nodes = strip_nodes(m, nx, ny)
    z, w = nodes
    hw = strip_halfwidth(m)
    probes = [np.pi / 2, np.pi / 2 + 0.3 * hw + 0.2j, np.pi / 2 - 0.5 * hw - 0.4j] if probes is None else probes
    cs = np.array([measure_constant(l, m, p, nodes) for p in probes])
    c = cs[0]
    spread = float(np.max(np.abs(cs - c)) / abs(c))
    dk = c * np.sum(w / np.abs(np.sin(z)) ** 4) / 4
    return float(np.real(dk)), complex(c), spread


def dk_fredholm(l, m, nx=16, ny=64, rcond=1e-12):
    """Discretized Fredholm solve without assuming the form of ``f``.

    With the symmetric kernel ``B = sqrt(w) K sqrt(w)``, ``D_K = (1/4) <sqrt w| B^+ |sqrt w>``
    using an eigenvalue-regularized pseudo-inverse.
    """
    z, w = strip_nodes(m, nx, ny)
    K = k_closed(l, m, np.conj(z)[:, None], z[None, :])
    sw = np.sqrt(w)
    B = sw[:, None] * K * sw[None, :]
    B = (B + B.conj().T) / 2
    ev, U = la.eigh(B)
    keep = ev > rcond * ev.max()
    r = U.conj().T @ sw
    return float(np.real(np.sum(np.abs(r[keep]) ** 2 / ev[keep])) / 4)


def dk_real_interval(l, m, npts=200):
    """The same construction restricted to the real segment of the strip (diagnostic)."""
    hw = strip_halfwidth(m)
    x, wx = np.polynomial.legendre.leggauss(npts)
    x, wx = np.pi / 2 + hw * x, hw * wx
    f = 1 / np.sin(x) ** 4
    c = 1.0 / np.sum(wx * k_closed(l, m, np.pi / 2, x) * f)
    return float(np.real(c * np.sum(wx * f) / 4))


@dataclass
class DrudeBound:
    l: int
    m: int
    delta: float
    dz_formula: float
    dz_numeric: float
    dk_formula: float
    dk_numeric: float
    extra: dict = field(default_factory=dict)


def drude_bounds(l, m, fredholm=False):
    from math import gcd
    if m < 2 or gcd(l, m) != 1 or not 1 <= l < m:
        raise ValueError(f"need coprime 1 <= l < m, got {l}/{m}")
    dzf, dkf = dz_closed(l, m), dk_closed(l, m)
    dzn = dz_numeric(l, m)
    dkn, c, spread = dk_quadrature(l, m)
    extra = {"measure_constant": c, "measure_spread": spread}
    if fredholm:
        extra["dk_fredholm"] = dk_fredholm(l, m)
    return DrudeBound(l, m, float(np.cos(np.pi * l / m)), dzf, dzn, dkf, dkn, extra)


def spin_current_total(n):
    j = 4j * (np.kron(sigma_plus, sigma_minus) - np.kron(sigma_minus, sigma_plus))
    return sum(embed(j, x, n, 2) for x in range(1, n)).toarray()


def current_overlaps(l, m, phi, n):
    """``(J_n, Z_n(phi))`` and ``(J_n, Z_n(phi)^dag)`` in the normalized HS product."""
    J = spin_current_total(n)
    Z = build_z(l, m, phi, n).matrix
    return hs_inner(J, Z), hs_inner(J, Z.conj().T)


def mazur_summand_brute(l, m, n):
    """``(1/2n) |w(J_n Q)|^2 / w(Q^2)`` with ``Q = i(Z_n(pi/2) - Z_n(pi/2)^dag)`` and ``w = 2^-n tr``."""
    J = spin_current_total(n)
    Z = build_z(l, m, np.pi / 2, n).matrix
    Q = 1j * (Z - Z.conj().T)
    wJQ = np.trace(J @ Q) / 2 ** n
    wQQ = np.real(np.trace(Q @ Q)) / 2 ** n
    return float(abs(wJQ) ** 2 / wQQ / (2 * n))


def mazur_summand_transfer(l, m, n):
    """Same quantity from ``w(Q^2) = 2 K_n(pi/2, pi/2)`` and ``|w(J_n Q)| = 2(n - 1)``."""
    K = np.real(k_transfer(l, m, np.pi / 2, np.pi / 2, n))
    return float((2 * (n - 1)) ** 2 / (2 * K) / (2 * n))


def density(l, m, phi, r):
    """``r``-point density ``q_r = sigma^- (x) <1|L^{(x) r-2}|1> (x) sigma^+`` of ``Z_n(phi)``."""
    lax = tilde_lax(l, m, phi)
    if r < 2:
        raise ValueError("densities start at r = 2")
    if r == 2:
        mid = np.ones((1, 1), dtype=complex)
    else:
        D = lax.D
        e1 = np.zeros(D, dtype=complex)
        e1[2] = 1.0
        inner = LaxOperator(lax.grid, e1, e1, lax.params, lax.convention)
        mid = contract_s(inner, r - 2, guard=False)
    return np.kron(np.kron(sigma_minus, mid), sigma_plus)


def density_hs_transfer(l, m, phi, r):
    """``(q_r, q_r) = (1/4) <1| T_bulk(conj phi, phi)^(r-2) |1>``."""
    B = bulk_block(l, m, np.conj(phi), phi)
    v = np.zeros(B.shape[0], dtype=complex)
    v[0] = 1.0
    for _ in range(r - 2):
        v = B @ v
    return float(np.real(v[0]) / 4)


def density_norms(l, m, phi, dmax=12, opnorm_max=10):
    """Table of ``(r, HS norm, operator norm)``; operator norms only up to ``opnorm_max``."""
    rows = []
    for r in range(2, dmax + 1):
        hs = density_hs_transfer(l, m, phi, r)
        op = float(la.norm(density(l, m, phi, r), 2)) if r <= opnorm_max else float("nan")
        rows.append((r, hs, op))
    return rows


def qz_normalization(l, m, n, h=1e-6):
    """Constant ``c`` with ``d/dc S_n(c)|_0 = c * Z_n(pi/2)^dag`` for the Chebyshev gauge.

    Returns ``(c, residual)``; the derivative is a central difference, exact
    up to ``O(h^2)`` because ``S_n`` is a polynomial in the coupling.
    """
    g = np.pi * l / m
    D = n + 2
    dS = (contract_s(chebyshev_lax(h, g, D), n) - contract_s(chebyshev_lax(-h, g, D), n)) / (2 * h)
    Zd = build_z(l, m, np.pi / 2, n).matrix.conj().T
    c = np.vdot(Zd.ravel(), dS.ravel()) / np.vdot(Zd.ravel(), Zd.ravel())
    return complex(c), float(la.norm(dS - c * Zd) / la.norm(dS))


def spin_flip(n):
    """Global spin reversal ``F = sigma^x (x) ... (x) sigma^x``."""
    X = np.array([[0, 1], [1, 0]], dtype=complex)
    out = np.ones((1, 1), dtype=complex)
    for _ in range(n):
        out = np.kron(out, X)
    return out
