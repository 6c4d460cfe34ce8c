"""Exterior integrability of the isotropic driven chain.

The triangular-gauge Lax operator ``L(p) = [[A0, A+], [A-, A0]]`` built from
:func:`drivenchain.auxiliary.verma_classical` admits an auxiliary intertwiner

    R(p, p') L_1(p) L_2(p') = L_1(p') L_2(p) R(p, p'),

with ``R(p, p') = exp((p - p') H((p + p')/2))``.  The generator ``H(x)`` is
block diagonal in the sum ``alpha = k1 + k2`` of ladder indices (ice rule)
and has simple poles at ``x in {0, 1/2, 1, ...}``.

Tensor products of two ladders use the flat index ``k1 * D + k2``.
"""

from dataclasses import dataclass, field
from math import comb

import numpy as np
import scipy.linalg as la

from .auxiliary import verma_classical

POLE_GUARD = 1e-8


class PoleError(ValueError):
    """Raised when ``x`` lies within the guard radius of a pole ``m/2``."""

    def __init__(self, x, m):
        super().__init__(f"x={x} is within {POLE_GUARD} of the pole m/2 with m={m}")
        self.m = m


def check_pole(x, alpha, guard=POLE_GUARD):
    for m in range(alpha + 1):
        if abs(x - m / 2) < guard:
            raise PoleError(x, m)


def generator_block(alpha, x, guard=POLE_GUARD):
    """Block ``H^(alpha)(x)`` of the exterior generator, an ``(alpha+1)``-square matrix.

    With ``f_m = 1/(x - m/2)``, the lower triangle (``k > l``) is

        H_kl = (-1)^(k+1)/2 * C(k, l) * sum_{m=l}^{k-1} (-1)^m C(k-l-1, m-l) f_m,

    the diagonal for ``2k <= alpha`` is ``-1/2 sum_{m=k}^{alpha-k-1} f_m`` and
    the remaining entries follow from the parity ``H_{a-k,a-l} = -H_{k,l}``.
    """
    check_pole(x, alpha, guard)
    f = [1.0 / (x - m / 2) for m in range(alpha + 1)]
    H = np.zeros((alpha + 1, alpha + 1), dtype=complex)
    for k in range(alpha + 1):
        for l in range(k):
            s = sum((-1) ** m * comb(k - l - 1, m - l) * f[m] for m in range(l, k))
            H[k, l] = (-1) ** (k + 1) / 2 * comb(k, l) * s
        if 2 * k <= alpha:
            H[k, k] = -0.5 * sum(f[m] for m in range(k, alpha - k))
    for k in range(alpha + 1):
        for l in range(alpha + 1):
            if k < l or (k == l and 2 * k > alpha):
                H[k, l] = -H[alpha - k, alpha - l]
    return H


def nilpotent_expm(A, order=None):
    """``exp(A)`` by a terminating series for a matrix with a single eigenvalue 0.

    ``H^(alpha)`` is similar to a strictly triangular matrix, so the series
    stops after ``alpha + 1`` terms.
    """
    n = A.shape[0]
    order = n if order is None else order
    out = np.eye(n, dtype=complex)
    term = np.eye(n, dtype=complex)
    for j in range(1, order + 1):
        term = term @ A / j
        out = out + term
    return out


def block_indices(alpha, D):
    """Flat indices ``k * D + (alpha - k)`` of the ``alpha`` block, ``k = 0..alpha``."""
    return np.array([k * D + (alpha - k) for k in range(alpha + 1)])


@dataclass
class ExteriorBlocks:
    """Blocks ``H^(alpha)`` and ``R^(alpha)`` for ``alpha = 0..alpha_max``."""

    p: complex
    pp: complex
    alpha_max: int
    H: list
    R: list
    params: dict = field(default_factory=dict)

    @property
    def x(self):
        return (self.p + self.pp) / 2

    def dense(self, D=None, which="R"):
        """Assemble the blocks on ``C^D (x) C^D`` (entries with ``k1 + k2 > alpha_max`` left zero)."""
        D = self.alpha_max + 1 if D is None else D
        out = np.zeros((D * D, D * D), dtype=complex)
        blocks = self.R if which == "R" else self.H
        for a, B in enumerate(blocks):
            if a > 2 * (D - 1):
                break
            idx = block_indices(a, D)
            keep = [i for i, k in enumerate(range(a + 1)) if k < D and a - k < D]
            ix = idx[keep]
            out[np.ix_(ix, ix)] = B[np.ix_(keep, keep)]
        return out


def exterior_R(p, pp, alpha_max, guard=POLE_GUARD):
    """Exterior intertwiner blocks ``R^(alpha)(p, p') = exp((p - p') H^(alpha)((p+p')/2))``."""
    if alpha_max < 1:
        raise ValueError("alpha_max must be at least 1")
    x, y = (p + pp) / 2, p - pp
    H = [generator_block(a, x, guard) for a in range(alpha_max + 1)]
    R = [nilpotent_expm(y * h) for h in H]
    return ExteriorBlocks(p, pp, alpha_max, H, R)


def classical_lax_blocks(p, D):
    """``[[A0, A+], [A-, A0]]`` of the triangular-gauge Lax operator."""
    rep = verma_classical(p, D)
    return [[rep["0"], rep["+"]], [rep["-"], rep["0"]]]


def _mask(D, alpha_max):
    return np.array([(i // D + i % D) <= alpha_max for i in range(D * D)])


def rll_residual(p, pp, alpha_max=6):
    """Max residual of ``R L_1(p) L_2(p') - L_1(p') L_2(p) R`` on columns with ``alpha <= alpha_max - 1``."""
    D = alpha_max + 1
    R = exterior_R(p, pp, alpha_max).dense(D)
    L1, L2 = classical_lax_blocks(p, D), classical_lax_blocks(pp, D)
    M1, M2 = classical_lax_blocks(pp, D), classical_lax_blocks(p, D)
    mask = _mask(D, alpha_max - 1)
    res = 0.0
    for i in range(2):
        for j in range(2):
            LL = sum(np.kron(L1[i][k], L2[k][j]) for k in range(2))
            MM = sum(np.kron(M1[i][k], M2[k][j]) for k in range(2))
            lhs, rhs = R @ LL, MM @ R
            res = max(res, la.norm((lhs - rhs)[:, mask]) / max(1.0, la.norm(lhs[:, mask])))
    return res


def braided_ybe_residual(p, pp, ppp, alpha_max=4):
    """Residual of the braided Yang-Baxter equation on three truncated ladders.

    ``R12(p', p'') R23(p, p'') R12(p, p') = R23(p, p') R12(p, p'') R23(p', p'')``
    evaluated on states whose total ladder index is at most ``alpha_max``
    (all three operators conserve the total index).
    """
    D = alpha_max + 1
    I = np.eye(D)

    def r12(a, b):
        return np.kron(exterior_R(a, b, alpha_max).dense(D), I)

    def r23(a, b):
        return np.kron(I, exterior_R(a, b, alpha_max).dense(D))

    lhs = r12(pp, ppp) @ r23(p, ppp) @ r12(p, pp)
    rhs = r23(p, pp) @ r12(p, ppp) @ r23(pp, ppp)
    k = np.indices((D, D, D)).reshape(3, -1).sum(axis=0)
    keep = k <= alpha_max
    diff = (lhs - rhs)[np.ix_(keep, keep)]
    return la.norm(diff) / max(1.0, la.norm(lhs[np.ix_(keep, keep)]))


def unitarity_residual(p, pp, alpha_max=6):
    a = exterior_R(p, pp, alpha_max)
    b = exterior_R(pp, p, alpha_max)
    return max(la.norm(ra @ rb - np.eye(len(ra))) for ra, rb in zip(a.R, b.R))


def ice_rule_residual(p, pp, alpha_max=6):
    """``||[R, N]||`` with ``N`` the total ladder index, on the assembled truncation."""
    D = alpha_max + 1
    R = exterior_R(p, pp, alpha_max).dense(D)
    k = np.arange(D)
    N = np.diag((k[:, None] + k[None, :]).ravel()).astype(complex)
    return la.norm(R @ N - N @ R)


def eigenvalue_spread(p, pp, alpha_max=6):
    """Max ``|lambda - 1|`` over the characteristic roots of every ``R^(alpha)``.

    Computed from the characteristic polynomial of ``R - 1``, which should be
    ``t^(alpha+1)``; returned as the largest non-leading coefficient.
    """
    out = 0.0
    for B in exterior_R(p, pp, alpha_max).R:
        c = np.poly(B - np.eye(len(B)))
        out = max(out, np.max(np.abs(c[1:])) if len(c) > 1 else 0.0)
    return out


def kernel_vectors(alpha):
    """``v = sum (-1)^k |k>`` and ``u = sum (-1)^k k |k>``."""
    k = np.arange(alpha + 1)
    return (-1.0) ** k + 0j, (-1.0) ** k * k + 0j


def kernel_residuals(alpha, x):
    """Residuals of ``H v = 0``, ``H u = alpha/(2x) v`` and ``H^2 u = 0``."""
    H = generator_block(alpha, x)
    v, u = kernel_vectors(alpha)
    return (la.norm(H @ v),
            la.norm(H @ u - alpha / (2 * x) * v),
            la.norm(H @ H @ u))


def gen_binom(z, j):
    """Generalized binomial ``C(z, j)`` for complex ``z`` and integer ``j >= 0``."""
    out = 1.0 + 0j
    for i in range(j):
        out *= (z - i) / (i + 1)
    return out


def jordan_factors(alpha, x):
    """Triangular ``W^(alpha)(x)`` and nilpotent ``Delta^(alpha)``.

    ``W_kl = (-1)^(k+l) 2^(l-alpha) C(alpha, l)^(-1) C(alpha-k, alpha-l) C(2x, alpha-l)``,
    ``Delta_kl = 2^(l-k+1)/(k-l)`` for ``k > l``.
    """
    W = np.zeros((alpha + 1, alpha + 1), dtype=complex)
    Dl = np.zeros((alpha + 1, alpha + 1), dtype=complex)
    for k in range(alpha + 1):
        for l in range(alpha + 1):
            if alpha - l <= alpha - k:
                W[k, l] = ((-1) ** (k + l) * 2.0 ** (l - alpha) / comb(alpha, l)
                           * comb(alpha - k, alpha - l) * gen_binom(2 * x, alpha - l))
            if k > l:
                Dl[k, l] = 2.0 ** (l - k + 1) / (k - l)
    return W, Dl


def jordan_residual(alpha, x, scale=0.5):
    """``||H - scale * W Delta W^-1||`` (relative)."""
    H = generator_block(alpha, x)
    W, Dl = jordan_factors(alpha, x)
    G = scale * W @ Dl @ la.inv(W)
    return la.norm(H - G) / max(1.0, la.norm(H))


def transposition_matrix(p, D):
    """Diagonal ``U(p)`` with entries ``C(2p, k)``."""
    return np.diag([gen_binom(2 * p, k) for k in range(D)])


def swap_matrix(D):
    """Permutation ``P|k, l> = |l, k>`` on ``C^D (x) C^D``."""
    P = np.zeros((D * D, D * D))
    for a in range(D):
        for b in range(D):
            P[a * D + b, b * D + a] = 1.0
    return P


def transposition_residual(p, pp, alpha_max=5):
    """Residual of the transposition symmetry of ``R(p, p')``.

    In the ``k1 * D + k2`` ordering the identity reads
    ``(U(p') (x) U(p)) R (U(p)^-1 (x) U(p')^-1) = P R^T P``.
    """
    D = alpha_max + 1
    R = exterior_R(p, pp, alpha_max).dense(D)
    Up, Upp = transposition_matrix(p, D), transposition_matrix(pp, D)
    lhs = np.kron(Upp, Up) @ R @ np.kron(la.inv(Up), la.inv(Upp))
    P = swap_matrix(D)
    mask = _mask(D, alpha_max)
    diff = (lhs - P @ R.T @ P)[np.ix_(mask, mask)]
    return la.norm(diff) / max(1.0, la.norm(R))


def lax_transposition_residual(p, D=8):
    """Residual of ``A_s^T = (-1)^s U A_{-s} U^-1`` for ``s = 0, +, -``."""
    rep = verma_classical(p, D)
    U = transposition_matrix(p, D)
    Ui = la.inv(U)
    pairs = [("0", "0", 1), ("+", "-", -1), ("-", "+", -1)]
    return max(la.norm(rep[a].T - sgn * U @ rep[b] @ Ui) for a, b, sgn in pairs)


def _lambda_operators(D):
    """Physical components of ``Lambda_1`` and ``Lambda_2`` on ``C^D (x) C^D``."""
    rep = verma_classical(0.0, D)
    A0, Ap, Am = rep["0"], rep["+"], rep["-"]
    I = np.eye(D)
    K = 2 * np.diag(np.ones(D - 1), 1)
    kr = np.kron
    L1 = {
        (0, 0): kr(A0, I) - kr(I, A0) + kr(K, Am),
        (0, 1): kr(Ap, I) - kr(I, Ap) + kr(K, A0) - kr(A0, K),
        (1, 0): kr(Am, I) - kr(I, Am),
        (1, 1): kr(A0, I) - kr(I, A0) - kr(Am, K),
    }
    Z = np.zeros((D * D, D * D))
    L2 = {(0, 0): kr(I, I), (1, 1): kr(I, I), (0, 1): -(kr(K, I) + kr(I, K)), (1, 0): Z}
    return L1, L2


def master_symmetry_residuals(x, alpha_max=5):
    """Residuals of ``ad_H^2 Lambda_1 + 3 ad_H Lambda_2 = 0`` and ``ad_H^2 Lambda_2 = 0``.

    Evaluated blockwise: the ``Lambda`` operators change ``alpha`` by at most
    one, so the identities are checked on rows and columns with
    ``alpha <= alpha_max - 1`` of a truncation holding blocks up to
    ``alpha_max``.
    """
    D = alpha_max + 1
    H = ExteriorBlocks(x, x, alpha_max, [generator_block(a, x) for a in range(alpha_max + 1)], []).dense(D, "H")
    ad = lambda X: H @ X - X @ H
    L1, L2 = _lambda_operators(D)
    mask = _mask(D, alpha_max - 1)
    cut = lambda X: X[np.ix_(mask, mask)]
    r1 = r2 = 0.0
    for key in L1:
        a = ad(ad(L1[key])) + 3 * ad(L2[key])
        b = ad(ad(L2[key]))
        r1 = max(r1, la.norm(cut(a)) / max(1.0, la.norm(cut(ad(ad(L1[key]))))))
        r2 = max(r2, la.norm(cut(b)) / max(1.0, la.norm(cut(L2[key]))))
    return r1, r2


def hll_residual(x, alpha_max=5):
    """Residual of the first-order relation ``[H(x), Lambda_0(x)] = Lambda_1``."""
    D = alpha_max + 1
    H = ExteriorBlocks(x, x, alpha_max, [generator_block(a, x) for a in range(alpha_max + 1)], []).dense(D, "H")
    rep = verma_classical(x, D)
    A0, Ap, Am = rep["0"], rep["+"], rep["-"]
    kr = np.kron
    L0 = {
        (0, 0): kr(A0, A0) + kr(Ap, Am),
        (0, 1): kr(A0, Ap) + kr(Ap, A0),
        (1, 0): kr(A0, Am) + kr(Am, A0),
        (1, 1): kr(A0, A0) + kr(Am, Ap),
    }
    L1, _ = _lambda_operators(D)
    mask = _mask(D, alpha_max - 1)
    cut = lambda X: X[np.ix_(mask, mask)]
    return max(la.norm(cut(H @ L0[k] - L0[k] @ H - L1[k])) / max(1.0, la.norm(cut(L1[k]))) for k in L0)
