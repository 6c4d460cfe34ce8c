"""The sl2-invariant intertwiner of two lowest-weight modules.

Each module of complex spin ``l`` is realized on polynomials in one variable,
``s^z x^k = (k - l) x^k``, ``s^- = d/dx``, ``s^+ = x (2l - x d/dx)``.  The
product of two modules splits into irreducibles with lowest-weight vectors
``(x1 - x2)^z``; the intertwiner acts on the ``z``-th component by a scalar
``r_z(u)``.
"""

from dataclasses import dataclass, field
from math import comb

import numpy as np
import scipy.linalg as la
from scipy.special import loggamma


@dataclass
class UniversalRSpec:
    l1: complex
    l2: complex
    u: complex
    eigenvalues: np.ndarray
    zmax: int
    extra: dict = field(default_factory=dict)


def eigenvalue_recurrence(l1, l2, u, zmax, guard=1e-12):
    """``r_0 = 1``, ``r_z = -r_{z-1} (L - u - z + 1) / (L + u - z + 1)`` with ``L = l1 + l2``."""
    L = l1 + l2
    r = [1.0 + 0j]
    for z in range(1, zmax + 1):
        den = L + u - z + 1
        if abs(den) < guard:
            raise ZeroDivisionError(f"pole of the recurrence at z={z}")
        r.append(-r[-1] * (L - u - z + 1) / den)
    return np.array(r)


def eigenvalue_gamma(l1, l2, u, zmax):
    """Closed form ``(-1)^z G(L-u+1) G(L+u-z+1) / (G(L+u+1) G(L-u-z+1))``."""
    L = l1 + l2
    z = np.arange(zmax + 1)
    lg = loggamma(L - u + 1) + loggamma(L + u - z + 1) - loggamma(L + u + 1) - loggamma(L - u - z + 1)
    return (-1.0) ** z * np.exp(lg)


def universal_sl2_R(l1, l2, u, zmax):
    r = eigenvalue_recurrence(l1, l2, u, zmax)
    g = eigenvalue_gamma(l1, l2, u, zmax)
    spec = UniversalRSpec(l1, l2, u, r, zmax)
    spec.extra["gamma_residual"] = float(np.max(np.abs(r - g)) / max(1.0, np.max(np.abs(r))))
    return spec


class PolyModule:
    """Two-variable polynomial basis ``x1^a x2^b`` with ``a + b <= cap``."""

    def __init__(self, cap):
        self.cap = cap
        self.monomials = [(i, d - i) for d in range(cap + 1) for i in range(d + 1)]
        self.index = {m: k for k, m in enumerate(self.monomials)}
        self.dim = len(self.monomials)

    def op(self, f):
        M = np.zeros((self.dim, self.dim), dtype=complex)
        for m in self.monomials:
            for m2, c in f(m):
                if m2 in self.index:
                    M[self.index[m2], self.index[m]] += c
        return M

    def spin(self, l, which):
        """``(s^z, s^-, s^+)`` of the module in variable ``which``."""
        def bump(m, d):
            m2 = list(m)
            m2[which] += d
            return tuple(m2)
        Sz = self.op(lambda m: [(m, m[which] - l)])
        Sm = self.op(lambda m: [(bump(m, -1), m[which])] if m[which] > 0 else [])
        Sp = self.op(lambda m: [(bump(m, 1), 2 * l - m[which])])
        return Sz, Sm, Sp

    def degree(self):
        return np.array([sum(m) for m in self.monomials])


def intertwiner_matrix(l1, l2, u, cap):
    """Matrix of the intertwiner on polynomials of total degree ``<= cap``.

    Degree ``d`` is spanned by ``(S^+)^(d-z) (x1 - x2)^z``, ``z = 0..d``, on which
    the operator acts as ``r_z(u)``.
    """
    mod = PolyModule(cap)
    r = eigenvalue_recurrence(l1, l2, u, cap)
    Sp = mod.spin(l1, 0)[2] + mod.spin(l2, 1)[2]
    R = np.zeros((mod.dim, mod.dim), dtype=complex)
    for d in range(cap + 1):
        cols = []
        for z in range(d + 1):
            v = np.zeros(mod.dim, dtype=complex)
            for i in range(z + 1):
                v[mod.index[(i, z - i)]] += comb(z, i) * (-1) ** (z - i)
            for _ in range(d - z):
                v = Sp @ v
            cols.append(v)
        blk = [mod.index[(i, d - i)] for i in range(d + 1)]
        W = np.array(cols).T[blk, :]
        R[np.ix_(blk, blk)] = W @ np.diag(r[: d + 1]) @ la.inv(W)
    return R, mod


def rll_ybe_residual(l1, l2, a, b, cap=7):
    """Residual of ``R12 L1(a) L2(b) = L2(b) L1(a) R12`` with ``u = a - b``.

    ``L_i(a) = [[a + s^z_i, s^-_i], [s^+_i, a - s^z_i]]`` acts on the
    fundamental space; the identity is checked on columns of total degree
    ``<= cap - 2`` of the truncated Verma (x) Verma (x) fundamental space.
    """
    R, mod = intertwiner_matrix(l1, l2, a - b, cap)
    I = np.eye(mod.dim)
    S1, S2 = mod.spin(l1, 0), mod.spin(l2, 1)

    def lax(S, c):
        Sz, Sm, Sp = S
        return [[c * I + Sz, Sm], [Sp, c * I - Sz]]

    def mul(A, B):
        return [[A[i][0] @ B[0][j] + A[i][1] @ B[1][j] for j in range(2)] for i in range(2)]

    A = mul(lax(S1, a), lax(S2, b))
    B = mul(lax(S2, b), lax(S1, a))
    mask = mod.degree() <= cap - 2
    res = 0.0
    for i in range(2):
        for j in range(2):
            lhs = R @ A[i][j]
            res = max(res, la.norm((lhs - B[i][j] @ R)[:, mask]) / max(1.0, la.norm(lhs[:, mask])))
    return res
