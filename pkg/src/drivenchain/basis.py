"""Local operator tables for spin-1/2 and three-level sites.

Basis convention: index 0 is spin up (``sigma^z = +1``).  For three-level
sites the order is (up, hole, down), so ``e^{22}`` in one-based notation is
the hole projector ``weyl(1, 1, 3)``.
"""

import numpy as np

sigma_plus = np.array([[0, 1], [0, 0]], dtype=complex)
sigma_minus = sigma_plus.T.copy()
sigma_x = sigma_plus + sigma_minus
sigma_y = -1j * (sigma_plus - sigma_minus)
sigma_z = np.diag([1.0, -1.0]).astype(complex)
identity2 = np.eye(2, dtype=complex)

PAULI = {
    "0": identity2,
    "x": sigma_x,
    "y": sigma_y,
    "z": sigma_z,
    "+": sigma_plus,
    "-": sigma_minus,
}


def weyl(i, j, d):
    """Matrix unit ``|i><j|`` of size ``d`` (zero-based indices)."""
    e = np.zeros((d, d), dtype=complex)
    e[i, j] = 1.0
    return e


def permutation(d):
    """Two-site swap ``sum_ij e^{ij} (x) e^{ji}`` on ``C^d (x) C^d``."""
    P = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            P[i * d + j, j * d + i] = 1.0
    return P


def spin_one():
    """Spin-1 components ``(s1, s2, s3)`` with ``[s^i, s^j] = i eps_ijk s^k``.

    The diagonal generator is ``s3 = diag(1, 0, -1)``, matching the
    (up, hole, down) site ordering.
    """
    sp = np.sqrt(2.0) * (weyl(0, 1, 3) + weyl(1, 2, 3))
    sm = sp.conj().T
    s1 = (sp + sm) / 2
    s2 = (sp - sm) / 2j
    s3 = np.diag([1.0, 0.0, -1.0]).astype(complex)
    return s1, s2, s3


def spin_one_ladder():
    """Spin-1 raising and lowering operators ``(s^+, s^-)``."""
    s1, s2, _ = spin_one()
    return s1 + 1j * s2, s1 - 1j * s2
