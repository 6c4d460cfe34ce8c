"""Chain models, site embeddings, Hamiltonians and current densities.

All many-body operators are ``scipy.sparse`` CSR matrices acting on
``(C^d)^{(x) n}`` with site 1 the most significant tensor factor.
"""

from dataclasses import dataclass, field
from math import gcd

import numpy as np
import scipy.sparse as sp

from .basis import sigma_plus, sigma_minus, sigma_z, weyl, permutation

KINDS = ("xxx", "xxz", "xxz-twisted", "suN", "lai-sutherland")


@dataclass(frozen=True)
class ChainModel:
    """Parameters of an open boundary-driven chain.

    Parameters
    ----------
    kind : str
        One of ``xxx``, ``xxz``, ``xxz-twisted``, ``suN``, ``lai-sutherland``.
    n : int
        Number of sites.
    eps : float
        Coupling parameter of the boundary driving.  The actual channel
        rates are derived per model by :func:`drivenchain.lindblad.default_channels`.
    delta : float, optional
        Anisotropy ``Delta``.  Ignored when ``gamma_frac`` is given.
    gamma_frac : tuple of int, optional
        Root-of-unity anisotropy ``gamma = pi l / m`` with coprime ``1 <= l < m``.
    theta : float
        Twist angle (``xxz-twisted`` only).
    N : int
        Number of local states (``suN`` only).
    mu : float
        Hole chemical potential (``lai-sutherland`` only).
    """

    kind: str
    n: int
    eps: float = 1.0
    delta: float | None = None
    gamma_frac: tuple | None = None
    theta: float = 0.0
    N: int = 2
    mu: float = 0.0
    extra: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unsupported model kind {self.kind!r}")
        if self.n < 1:
            raise ValueError("need at least one site")
        if not self.eps > 0:
            raise ValueError("coupling eps must be positive")
        if self.gamma_frac is not None:
            l, m = self.gamma_frac
            if not (1 <= l < m) or gcd(l, m) != 1:
                raise ValueError(f"gamma_frac {l}/{m} must be coprime with 1 <= l < m")
        if self.theta != 0.0 and self.kind != "xxz-twisted":
            raise ValueError("twist angle only applies to xxz-twisted")
        if self.kind == "suN" and self.N < 2:
            raise ValueError("suN needs N >= 2")

    @property
    def d(self):
        if self.kind == "suN":
            return self.N
        if self.kind == "lai-sutherland":
            return 3
        return 2

    @property
    def gamma(self):
        """Anisotropy angle with ``Delta = cos(gamma)``.

        Real in the easy-plane regime, purely imaginary for ``Delta > 1``
        and zero for the isotropic chain.
        """
        if self.kind == "xxx":
            return 0.0
        if self.gamma_frac is not None:
            l, m = self.gamma_frac
            return np.pi * l / m
        if self.delta is None:
            raise ValueError("anisotropy not specified")
        if self.delta > 1:
            return 1j * np.arccosh(self.delta)
        return float(np.arccos(self.delta))

    @property
    def anisotropy(self):
        if self.kind == "xxx":
            return 1.0
        if self.gamma_frac is None and self.delta is not None:
            return float(self.delta)
        return float(np.real(np.cos(self.gamma)))


def embed_site(op, x, model):
    """Embed an operator starting at site ``x`` (one-based) of ``model``.

    Returns ``1_{d^{x-1}} (x) op (x) 1_{d^{n-x-k+1}}`` in sparse form, where
    ``k`` is the number of sites ``op`` acts on.
    """
    return embed(op, x, model.n, model.d)


def embed(op, x, n, d=None):
    """Embed a ``d^k x d^k`` operator at sites ``x..x+k-1`` of ``n`` sites.

    ``d`` is inferred from the matrix size when omitted.
    """
    op = np.asarray(op) if not sp.issparse(op) else op
    dim = op.shape[0]
    if d is None:
        d = _infer_local_dim(dim)
    k = int(round(np.log(dim) / np.log(d)))
    if d ** k != dim or op.shape[1] != dim:
        raise ValueError(f"operator of shape {op.shape} does not act on sites of dimension {d}")
    if not 1 <= x <= n - k + 1:
        raise ValueError(f"site {x} out of range for support {k} on {n} sites")
    left = sp.identity(d ** (x - 1), dtype=complex, format="csr")
    right = sp.identity(d ** (n - x - k + 1), dtype=complex, format="csr")
    return sp.kron(sp.kron(left, sp.csr_matrix(op)), right, format="csr")


def _infer_local_dim(dim):
    for d in (2, 3):
        k = round(np.log(dim) / np.log(d))
        if d ** k == dim:
            return d
    return dim


def bond_hamiltonian(model):
    """Two-site interaction density of ``model`` as a dense matrix."""
    if model.kind in ("xxx", "xxz"):
        delta = model.anisotropy
        return (2 * (np.kron(sigma_plus, sigma_minus) + np.kron(sigma_minus, sigma_plus))
                + delta * np.kron(sigma_z, sigma_z))
    if model.kind == "xxz-twisted":
        ph = np.exp(1j * model.theta)
        return (2 * (ph * np.kron(sigma_plus, sigma_minus) + np.conj(ph) * np.kron(sigma_minus, sigma_plus))
                + model.anisotropy * np.kron(sigma_z, sigma_z))
    return permutation(model.d)


def build_hamiltonian(model):
    """Open-chain Hamiltonian ``sum_x h_{x,x+1}`` as a sparse matrix."""
    h = bond_hamiltonian(model)
    d, n = model.d, model.n
    H = sp.csr_matrix((d ** n, d ** n), dtype=complex)
    for x in range(1, n):
        H = H + embed(h, x, n, d)
    return H.tocsr()


def current_density(model, species=None):
    """Two-site current density.

    For spin-1/2 chains this is ``j = 4i(s+ s- - s- s+)`` (with the Peierls
    phase in the twisted chain).  For three-level sites ``species=(i, j)``
    selects ``J^{ij} = i(e^{ij} e^{ji} - e^{ji} e^{ij})`` and ``species=i``
    the total ``J^i = sum_j J^{ij}``.
    """
    if model.d == 2 and model.kind != "suN":
        if species is not None:
            raise ValueError("species only applies to multi-level sites")
        ph = np.exp(1j * model.theta)
        return 4j * (ph * np.kron(sigma_plus, sigma_minus) - np.conj(ph) * np.kron(sigma_minus, sigma_plus))
    d = model.d
    if species is None:
        raise ValueError("multi-level currents need a species index")
    if np.ndim(species) == 0:
        return sum(current_density(model, (species, j)) for j in range(d))
    i, j = species
    if not (0 <= i < d and 0 <= j < d):
        raise ValueError(f"species {species} out of range")
    eij, eji = weyl(i, j, d), weyl(j, i, d)
    return 1j * (np.kron(eij, eji) - np.kron(eji, eij))


def build_current(model, species=None):
    """Bond currents ``[J_{1,2}, ..., J_{n-1,n}]`` and their sum ``J_n``.

    Returns
    -------
    bonds : list of scipy.sparse.csr_matrix
    total : scipy.sparse.csr_matrix
    """
    j = current_density(model, species)
    bonds = [embed(j, x, model.n, model.d) for x in range(1, model.n)]
    total = sum(bonds) if bonds else sp.csr_matrix((model.d ** model.n,) * 2, dtype=complex)
    return bonds, total.tocsr()


def charge_density(model, species=None):
    """On-site charge whose flow is measured by :func:`current_density`."""
    if model.d == 2 and model.kind != "suN":
        return sigma_z
    return weyl(species, species, model.d)


def total_magnetization(n):
    return sum(embed(sigma_z, x, n, 2) for x in range(1, n + 1)).tocsr()
