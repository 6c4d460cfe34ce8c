"""Auxiliary-space representations.

Every representation is a dictionary of ``D x D`` matrices acting on column
vectors over the ladder basis ``|0>, |1>, ...``.  Three ladder conventions
appear and are tagged explicitly:

``lowest-weight``
    ``s^-|0> = 0``, ``s^z|k> = (k - p)|k>``, ``s^+`` raises ``k``.
``classical``
    the undeformed lowest-weight module in the triangular gauge, with
    ``A_0 = p - k`` on the diagonal and a raising operator ``A_-``.
``highest-weight``
    the split-vacuum ladder used for the pseudo-local charges, where the
    raising generator lowers the ladder index.
"""

from dataclasses import dataclass, field
import itertools

import numpy as np

EXACT = "exact-truncation"
CAPPED = "capped"


def q_number(x, gamma):
    """Symmetric q-number ``[x]_q = sin(gamma x) / sin(gamma)``.

    ``gamma = 0`` returns ``x`` (undeformed limit).  ``gamma`` may be
    complex: ``gamma = i eta`` gives the hyperbolic regime ``Delta > 1``.
    """
    if gamma == 0:
        return np.asarray(x) + 0j if np.ndim(x) else complex(x)
    s = np.sin(gamma)
    if abs(s) < 1e-15:
        raise ValueError(f"q-number undefined at gamma={gamma}")
    return np.sin(gamma * np.asarray(x)) / s


@dataclass
class AuxRep:
    """Truncated auxiliary representation.

    Attributes
    ----------
    kind : str
    params : dict
    D : int
        Truncation dimension.
    generators : dict of str -> ndarray
    exactness : str
        ``exact-truncation`` when the ladder decouples at ``D``, else ``capped``.
    convention : str
    """

    kind: str
    params: dict
    D: int
    generators: dict
    exactness: str = CAPPED
    convention: str = "lowest-weight"
    extra: dict = field(default_factory=dict)

    def __getitem__(self, key):
        return self.generators[key]


def verma_q(p, gamma, D):
    """Lowest-weight module of the deformed spin algebra with complex spin ``p``.

    ``s^+|k> = [2p - k]_q |k+1>``, ``s^-|k> = [k]_q |k-1>``,
    ``s^z|k> = (k - p)|k>`` so that ``[s^+, s^-] = [2 s^z]_q``.
    At ``gamma = pi l / m`` and ``D = m`` the lowering amplitude ``[m]_q``
    vanishes, so the first ``m`` states span a quotient on which row-vector
    contractions from ``<0|`` are exact.
    """
    k = np.arange(D)
    sz = np.diag(k - p).astype(complex)
    splus = np.diag(q_number(2 * p - k[:-1], gamma), -1).astype(complex)
    sminus = np.diag(q_number(k[1:], gamma), 1).astype(complex)
    exact = CAPPED
    if gamma != 0 and np.isreal(gamma):
        ratio = D * np.real(gamma) / np.pi
        if abs(ratio - round(ratio)) < 1e-12 and round(ratio) > 0:
            exact = EXACT
    return AuxRep("verma-q", {"p": p, "gamma": gamma}, D,
                  {"z": sz, "+": splus, "-": sminus}, exact, "lowest-weight")


def verma_classical(p, D):
    """Undeformed module in the triangular gauge.

    ``A0 = diag(p - k)``, ``A+ = (k - 2p)|k><k+1|``, ``A- = (k+1)|k+1><k|``.
    """
    k = np.arange(D)
    A0 = np.diag(p - k).astype(complex)
    Ap = np.diag(k[:-1] - 2 * p, 1).astype(complex)
    Am = np.diag(k[:-1] + 1.0, -1).astype(complex)
    return AuxRep("verma-classical", {"p": p}, D, {"0": A0, "+": Ap, "-": Am}, CAPPED, "classical")


def casimir_q(rep):
    """``C = s^+ s^- + [s^z]_q [s^z - 1]_q`` of a ``verma-q`` representation."""
    g = rep.params["gamma"]
    z = np.diag(rep["z"])
    return rep["+"] @ rep["-"] + np.diag(q_number(z, g) * q_number(z - 1, g))


def boson(D):
    """Truncated bosonic annihilation operator ``b|k> = sqrt(k)|k-1>``."""
    return np.diag(np.sqrt(np.arange(1, D)), 1).astype(complex)


def _monomials(nvar, cap):
    mons = [m for m in itertools.product(range(cap + 1), repeat=nvar) if sum(m) <= cap]
    mons.sort(key=lambda m: (sum(m), tuple(-c for c in m)))
    return mons


def gl_n(N, r0, r1, cap):
    """Differential-operator realization of ``gl_N`` on polynomials.

    Polynomials in ``N - 1`` variables of total degree ``<= cap`` form the
    basis; the constant monomial is index 0.  With Euler operator ``E``:

    * ``G[a, b] = x_a d_b + delta_ab r0`` for ``a, b < N - 1``,
    * ``G[N-1, a] = d_a``,
    * ``G[a, N-1] = x_a (r1 - E)``,
    * ``G[N-1, N-1] = r0 + r1 - E``.

    These satisfy the ``gl_N`` relations ``[G_ab, G_cd] = delta_bc G_ad - delta_ad G_cb``
    wherever the degree cap is not reached.
    """
    mons = _monomials(N - 1, cap)
    idx = {m: i for i, m in enumerate(mons)}
    Dm = len(mons)

    def op(f):
        M = np.zeros((Dm, Dm), dtype=complex)
        for m in mons:
            for m2, c in f(m):
                if m2 in idx:
                    M[idx[m2], idx[m]] += c
        return M

    X = [op(lambda m, i=i: [(tuple(m[k] + (k == i) for k in range(N - 1)), 1.0)]) for i in range(N - 1)]
    Dd = [op(lambda m, i=i: [(tuple(m[k] - (k == i) for k in range(N - 1)), m[i])] if m[i] > 0 else [])
          for i in range(N - 1)]
    E = sum(X[i] @ Dd[i] for i in range(N - 1))
    I = np.eye(Dm)
    G = {}
    for a in range(N - 1):
        for b in range(N - 1):
            G[(a, b)] = X[a] @ Dd[b] + (r0 * I if a == b else 0)
        G[(N - 1, a)] = Dd[a]
        G[(a, N - 1)] = X[a] @ (r1 * I - E)
    G[(N - 1, N - 1)] = (r0 + r1) * I - E
    degree = np.array([sum(m) for m in mons])
    return AuxRep("gl-n", {"N": N, "r0": r0, "r1": r1}, Dm, G, CAPPED, "lowest-weight",
                  {"degree": degree, "monomials": mons})


def tilde_spin(l, m, phi, cap=None):
    """Split-vacuum ladder for the pseudo-local charge family.

    Basis order: ``|L>, |R>, |1>, ..., |cap>`` (indices 0, 1, 2, ...).
    Returns the Lax components ``{"0", "z", "+", "-"}`` multiplying
    ``sigma^0, sigma^z, sigma^+, sigma^-``.  With ``cap = m - 1`` the
    truncation is exact because ``[m]_q = 0``.
    """
    gamma = np.pi * l / m
    cap = m - 1 if cap is None else cap
    Dm = cap + 2
    L0 = np.zeros((Dm, Dm), dtype=complex)
    Lz, Lp, Lm = L0.copy(), L0.copy(), L0.copy()
    L0[0, 0] = L0[1, 1] = 1.0
    c = np.sin(gamma) / np.sin(phi)
    for k in range(1, cap + 1):
        L0[k + 1, k + 1] = np.cos(gamma * k)
        Lz[k + 1, k + 1] = -np.sin(gamma * k) / np.tan(phi)
    Lp[2, 1] = 1.0
    Lm[0, 2] = 1.0
    for k in range(1, cap):
        Lm[k + 1, k + 2] += c * q_number(k + 1, gamma)
        Lp[k + 2, k + 1] += c * q_number(-k, gamma)
    exact = EXACT if cap >= m - 1 else CAPPED
    return AuxRep("tilde-spin", {"l": l, "m": m, "phi": phi}, Dm,
                  {"0": L0, "z": Lz, "+": Lp, "-": Lm}, exact, "highest-weight")


def build_rep(kind, D, **params):
    """Dispatch to the representation constructors by ``kind``."""
    if D < 2:
        raise ValueError("truncation dimension must be at least 2")
    if kind == "verma-q":
        rep = verma_q(params["p"], params.get("gamma", 0.0), D)
        if params.get("exact") and rep.exactness != EXACT:
            raise ValueError("exact truncation requested but the ladder does not decouple")
        return rep
    if kind == "verma-classical":
        return verma_classical(params["p"], D)
    if kind == "gl-n":
        return gl_n(params["N"], params["r0"], params["r1"], D)
    if kind == "tilde-spin":
        return tilde_spin(params["l"], params["m"], params["phi"], D - 2)
    raise ValueError(f"unknown representation kind {kind!r}")
