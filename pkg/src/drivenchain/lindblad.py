"""Brute-force Lindblad generator, steady-state solver and propagation.

Vectorization is column stacking: ``vec(A rho B) = (B^T (x) A) vec(rho)``.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .basis import sigma_plus, sigma_minus, weyl
from .operators import build_hamiltonian, embed

VEC_CONVENTION = "column-stacking"

# largest chain length per local dimension accepted by build_liouvillian
SIZE_GUARD = {2: 7, 3: 4}


@dataclass(frozen=True)
class LindbladChannel:
    """Jump operator ``sqrt(rate) * operator`` acting on a boundary site."""

    operator: np.ndarray
    site: int
    rate: float

    def __post_init__(self):
        if self.rate < 0:
            raise ValueError("channel rate must be nonnegative")


@dataclass
class Liouvillian:
    matrix: sp.csr_matrix
    d: int
    n: int
    convention: str = VEC_CONVENTION

    @property
    def dim(self):
        return self.d ** self.n


@dataclass
class SteadyStateSet:
    states: list
    null_dimension: int
    residuals: list
    singular_values: np.ndarray


def default_channels(model):
    """Boundary channels that drive ``model`` towards its solvable NESS.

    * spin-1/2 chains: ``s+`` on site 1 and ``s-`` on site n, rate ``eps``;
    * ``suN``: ``e^{iN}`` on site 1 with rate ``eps/2`` and ``e^{Ni}`` on
      site n with rate ``(N-1)^2 eps/2`` for every ``i < N``;
    * ``lai-sutherland``: ``e^{13}`` on site 1 and ``e^{31}`` on site n,
      rate ``2 eps``.

    The rates are those for which the Lax-operator solution of
    :mod:`drivenchain.lax` at coupling ``eps`` is the exact fixed point.
    """
    n, eps = model.n, model.eps
    if model.kind in ("xxx", "xxz", "xxz-twisted"):
        return [LindbladChannel(sigma_plus, 1, eps), LindbladChannel(sigma_minus, n, eps)]
    if model.kind == "suN":
        N = model.N
        left = [LindbladChannel(weyl(i, N - 1, N), 1, eps / 2) for i in range(N - 1)]
        right = [LindbladChannel(weyl(N - 1, i, N), n, (N - 1) ** 2 * eps / 2) for i in range(N - 1)]
        return left + right
    if model.kind == "lai-sutherland":
        return [LindbladChannel(weyl(0, 2, 3), 1, 2 * eps), LindbladChannel(weyl(2, 0, 3), n, 2 * eps)]
    raise ValueError(model.kind)


def liouvillian_from_operators(H, jumps):
    """Sparse generator from a Hamiltonian and a list of jump operators."""
    H = sp.csr_matrix(H)
    dim = H.shape[0]
    I = sp.identity(dim, dtype=complex, format="csr")
    L = -1j * (sp.kron(I, H) - sp.kron(H.T, I))
    for A in jumps:
        A = sp.csr_matrix(A)
        AdA = (A.conj().T @ A).tocsr()
        L = L + sp.kron(A.conj(), A) - 0.5 * sp.kron(I, AdA) - 0.5 * sp.kron(AdA.T, I)
    return L.tocsr()


def build_liouvillian(model, channels=None, guard=True):
    """Assemble ``L`` with ``L vec(rho) = vec(-i[H, rho] + D(rho))``.

    Parameters
    ----------
    model : ChainModel
    channels : list of LindbladChannel, optional
        Defaults to :func:`default_channels`.
    guard : bool
        Refuse chains larger than the dense-feasibility ceiling.
    """
    d, n = model.d, model.n
    if guard and n > SIZE_GUARD.get(d, 3):
        raise ValueError(f"n={n} exceeds the oracle size guard for d={d}")
    if channels is None:
        channels = default_channels(model)
    jumps = []
    for ch in channels:
        if ch.site not in (1, n):
            raise ValueError(f"channel on interior site {ch.site}")
        jumps.append(np.sqrt(ch.rate) * embed(ch.operator, ch.site, n, d))
    return Liouvillian(liouvillian_from_operators(build_hamiltonian(model), jumps), d, n)


def apply(L, rho):
    """``L(rho)`` as a matrix."""
    dim = rho.shape[0]
    v = L.matrix @ np.asarray(rho).reshape(-1, order="F")
    return v.reshape(dim, dim, order="F")


def relative_residual(L, rho):
    """``||L vec(rho)|| / ||vec(rho)||``."""
    rho = np.asarray(rho)
    return la.norm(apply(L, rho)) / la.norm(rho)


def _normalize_state(v, dim):
    rho = v.reshape(dim, dim, order="F")
    rho = (rho + rho.conj().T) / 2
    tr = np.trace(rho)
    if abs(tr) < 1e-14:
        return rho
    return rho / tr


def null_space(L, rank_tol=1e-8, block=None, dense_max=1296, seed=0, max_block=64):
    """Orthonormal basis of the (numerical) null space of a Liouvillian.

    Small generators are handled with a dense SVD.  Larger ones use block
    shifted inverse iteration on the sparse matrix, followed by a
    Rayleigh-Ritz step on the resulting subspace.

    Returns
    -------
    basis : ndarray, shape (dim^2, k)
    svals : ndarray
        Singular values of ``L`` restricted to the probed subspace (ascending).
    """
    A = L.matrix if isinstance(L, Liouvillian) else sp.csr_matrix(L)
    N = A.shape[0]
    if N <= dense_max:
        U, s, Vh = la.svd(A.toarray())
        null = s <= rank_tol * s[0]
        return Vh[null].conj().T, s[::-1]
    scale = spla.norm(A, 1)
    shift = 1e-10 * scale
    lu = spla.splu((A - shift * sp.identity(N, format="csc")).tocsc())
    rng = np.random.default_rng(seed)
    k = block or 8
    while True:
        X = rng.standard_normal((N, k)) + 1j * rng.standard_normal((N, k))
        for _ in range(3):
            X, _ = la.qr(lu.solve(X), mode="economic")
        _, s, Vh = la.svd(A @ X, full_matrices=False)
        order = np.argsort(s)
        s, Vh = s[order], Vh[order]
        null = s <= rank_tol * scale
        if null.sum() < k or k >= max_block:
            return X @ Vh[null].conj().T, s
        k *= 2


def solve_ness(L, rank_tol=1e-8, symmetry=None, **kwargs):
    """Steady states of a Liouvillian.

    Parameters
    ----------
    L : Liouvillian
    rank_tol : float
        Singular values below ``rank_tol * sigma_max`` count as null.
    symmetry : array_like, optional
        Hermitian strong-symmetry generator ``Q``.  When given, degenerate
        null spaces are split into joint eigenstates of ``rho -> Q rho`` and
        ``rho -> rho Q``; only diagonal sectors (hermitian states) are kept.

    Returns
    -------
    SteadyStateSet
    """
    basis, svals = null_space(L, rank_tol=rank_tol, **kwargs)
    dim = L.dim
    k = basis.shape[1]
    vecs = [basis[:, i] for i in range(k)]
    if symmetry is not None and k > 1:
        Q = sp.csr_matrix(symmetry)
        I = sp.identity(dim, format="csr")
        # the null space is invariant under both rho -> Q rho and rho -> rho Q
        Ml = basis.conj().T @ (sp.kron(I, Q) @ basis)
        Mr = basis.conj().T @ (sp.kron(Q.T, I) @ basis)
        _, V = la.eig(Ml + np.sqrt(2) * np.pi * Mr)
        vecs = []
        for i in range(k):
            v = V[:, i]
            qa = np.vdot(v, Ml @ v) / np.vdot(v, v)
            qb = np.vdot(v, Mr @ v) / np.vdot(v, v)
            if abs(qa - qb) < 1e-6:
                vecs.append(basis @ v)
    states, residuals = [], []
    for v in vecs:
        rho = _normalize_state(v, dim)
        states.append(rho)
        residuals.append(relative_residual(L, rho))
    return SteadyStateSet(states, k, residuals, svals)


def evolve(L, rho0, t, steps=1):
    """Propagate ``rho0`` under ``exp(t L)``.

    Returns the list of states at ``t * j / steps`` for ``j = 1..steps``.
    """
    dim = rho0.shape[0]
    v = np.asarray(rho0, dtype=complex).reshape(-1, order="F")
    out = spla.expm_multiply(L.matrix, v, start=0.0, stop=t, num=steps + 1, endpoint=True)
    return [row.reshape(dim, dim, order="F") for row in out[1:]]


def fidelity(rho, sigma):
    """Uhlmann fidelity ``(tr sqrt(sqrt(rho) sigma sqrt(rho)))^2`` of unit-trace states."""
    rho = rho / np.trace(rho)
    sigma = sigma / np.trace(sigma)
    r = la.sqrtm(rho)
    return float(np.real(np.trace(la.sqrtm(r @ sigma @ r))) ** 2)


def subspace_fidelity(rho, basis):
    """Fraction of ``vec(rho)`` lying in the span of orthonormal ``basis``."""
    v = np.asarray(rho).reshape(-1, order="F")
    proj = basis.conj().T @ v
    return float(np.real(np.vdot(proj, proj) / np.vdot(v, v)))


def spectral_gap(L):
    """Smallest nonzero ``|Re lambda|`` of a dense-feasible Liouvillian."""
    w = la.eigvals(L.matrix.toarray())
    re = np.sort(-np.real(w))
    return re[re > 1e-9][0]
