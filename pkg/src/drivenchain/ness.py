"""Contraction of Lax operators into amplitude operators and steady states."""

from dataclasses import dataclass, field
import itertools

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp

from .basis import sigma_z
from .operators import build_hamiltonian

DENSE_GUARD = {2: 10, 3: 6}


def contract_s(lax, n, guard=True):
    """Dense amplitude operator ``S_n = <left| L_1 ... L_n |right>``.

    The contraction propagates a row vector from the left boundary, so the
    cost is ``O(d^{2n} D^2)`` and no auxiliary power is ever formed.
    """
    d, D = lax.d, lax.D
    if guard and n > DENSE_GUARD.get(d, 4):
        raise ValueError(f"dense S_n beyond the guard for d={d}, n={n}")
    # state[a, b, :] is the auxiliary row vector attached to |a><b|
    state = lax.left.reshape(1, 1, D).astype(complex)
    sparse = D > 32
    blocks = {(i, j): (sp.csr_matrix(lax.grid[i, j]) if sparse else lax.grid[i, j])
              for i in range(d) for j in range(d)}
    for _ in range(n):
        A, B, _ = state.shape
        flat = state.reshape(A * B, D)
        new = np.zeros((A, d, B, d, D), dtype=complex)
        for (i, j), M in blocks.items():
            if sparse and M.nnz == 0:
                continue
            prod = (M.T @ flat.T).T if sparse else flat @ M
            new[:, i, :, j, :] = prod.reshape(A, B, D)
        state = new.reshape(A * d, B * d, D)
    return state @ lax.right


def monodromy_word_amplitude(lax, word):
    """``<left| grid[w1] ... grid[wn] |right>`` for a list of ``(i, j)`` pairs."""
    v = lax.left.astype(complex)
    for ij in word:
        v = v @ lax.grid[ij]
    return v @ lax.right


@dataclass
class TwoLegLax:
    """Two-leg vertex operators ``LL[i, k] = sum_j L[i, j] (x) conj(L[k, j])``.

    ``LL[i, k]`` multiplies ``|i><k|`` in ``rho = S S^dagger``, so the
    expectation of an on-site ``O`` lifts to ``sum_ab O_ab LL[b, a]``.
    """

    grid: dict
    left: np.ndarray
    right: np.ndarray
    d: int
    D: int
    transfer: sp.csr_matrix
    params: dict = field(default_factory=dict)
    parent: "TwoLegLax | None" = None
    indices: np.ndarray | None = None
    cache: dict = field(default_factory=dict, repr=False, compare=False)

    def distances(self):
        """Steps needed to reach each auxiliary index from the left and right vectors.

        Breadth-first search on the union sparsity pattern of all vertex
        operators.  Components farther than the remaining number of sites
        from a boundary cannot contribute to a contraction.
        """
        if "distances" not in self.cache:
            pattern = sum(abs(M) for M in self.grid.values()).tocsr()
            pattern = (pattern + abs(self.transfer)).tocsr()
            self.cache["distances"] = (_bfs(pattern.T, self.left), _bfs(pattern, self.right))
        return self.cache["distances"]

    def vertex(self, op):
        """Vertex lift of a ``k``-site operator given as ``d^k x d^k`` matrix.

        On a restricted copy, multi-site lifts are multiplied in the parent
        space first: single-site factors may leave the reduced subspace even
        when their product does not.
        """
        op = np.asarray(op)
        if self.parent is not None:
            M = self.parent.vertex(op)
            return M[self.indices][:, self.indices].tocsr()
        d = self.d
        k = int(round(np.log(op.shape[0]) / np.log(d)))
        T = op.reshape((d,) * (2 * k))
        out = sp.csr_matrix((self.D, self.D), dtype=complex)
        for idx in itertools.product(range(d), repeat=2 * k):
            c = T[idx]
            if c == 0:
                continue
            rows, cols = idx[:k], idx[k:]
            M = self.grid[(cols[0], rows[0])]
            for r, c_ in zip(rows[1:], cols[1:]):
                M = M @ self.grid[(c_, r)]
            out = out + c * M
        return out.tocsr()

    def restrict(self, indices):
        """Copy with every vertex operator restricted to ``indices``."""
        ix = np.asarray(indices)
        sub = lambda M: M[ix][:, ix].tocsr()
        grid = {k: sub(v) for k, v in self.grid.items()}
        root = self.parent if self.parent is not None else self
        full_ix = ix if self.indices is None else self.indices[ix]
        return TwoLegLax(grid, self.left[ix], self.right[ix], self.d, len(ix), sub(self.transfer),
                         dict(self.params, restricted=True), root, full_ix)


def _bfs(adj, start):
    """Graph distance from the support of ``start`` along ``adj @ v``."""
    dist = np.full(adj.shape[0], np.iinfo(np.int64).max // 2, dtype=np.int64)
    front = np.abs(start) > 0
    dist[front] = 0
    step = 0
    adj = (adj != 0).astype(np.int8).tocsr()
    while front.any():
        step += 1
        reach = (adj @ front.astype(np.int8)) > 0
        front = reach & (dist > step)
        dist[front] = step
    return dist


def two_leg(lax):
    """Assemble the two-leg vertex operators of a Lax operator."""
    d, D = lax.d, lax.D
    blocks = {(i, j): sp.csr_matrix(lax.grid[i, j]) for i in range(d) for j in range(d)}
    grid = {}
    for i in range(d):
        for k in range(d):
            M = sp.csr_matrix((D * D, D * D), dtype=complex)
            for j in range(d):
                M = M + sp.kron(blocks[(i, j)], blocks[(k, j)].conj())
            grid[(i, k)] = M.tocsr()
    T = sum(grid[(i, i)] for i in range(d)).tocsr()
    left = np.kron(lax.left, lax.left.conj())
    right = np.kron(lax.right, lax.right.conj())
    return TwoLegLax(grid, left, right, d, D * D, T, dict(lax.params, aux_dim=D))


def kappa_indices(D):
    """Diagonal sublattice ``|k> (x) |k>`` of a two-leg ladder space."""
    return np.array([k * D + k for k in range(D)])


def ls_sublattice(D):
    """Two-leg indices of the boson-boson-Verma chain reachable from the vacuum.

    Labels ``(j, k, l)`` and ``(jb, kb, lb)`` of both legs obey
    ``j - k = jb - kb`` and ``j + k + 2l = jb + kb + 2lb``.
    """
    A = D ** 3
    a = np.arange(A)
    j, k, l = a // (D * D), (a // D) % D, a % D
    c1, c2 = j - k, j + k + 2 * l
    match = (c1[:, None] == c1[None, :]) & (c2[:, None] == c2[None, :])
    ia, ib = np.nonzero(match)
    return ia * A + ib


def reduce_two_leg(tl):
    """Restrict to the symmetry-reduced subspace appropriate for the model."""
    kind = tl.params.get("kind")
    if tl.params.get("restricted"):
        return tl
    if tl.d == 2 and kind in ("xxz", "xxx") and tl.params.get("theta", 0) == 0:
        return tl.restrict(kappa_indices(tl.params["aux_dim"]))
    if kind == "lai-sutherland":
        return tl.restrict(ls_sublattice(tl.params["ladder"]))
    return tl


@dataclass
class NessResult:
    rho: np.ndarray
    S: np.ndarray
    Z: float
    residual: float | None = None
    sectors: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)


def assemble_ness(lax, n, model=None):
    """Unnormalized ``rho = S_n S_n^dagger`` with optional oracle residual."""
    S = contract_s(lax, n)
    rho = S @ S.conj().T
    Z = float(np.real(np.trace(rho)))
    res = None
    if model is not None:
        from .lindblad import build_liouvillian, relative_residual
        res = relative_residual(build_liouvillian(model), rho)
    return NessResult(rho, S, Z, res, params=dict(lax.params, n=n))


def hole_count_projector(n, nu, hole=1, d=3):
    """Diagonal projector onto basis words with exactly ``nu`` holes."""
    digits = np.array(list(itertools.product(range(d), repeat=n)))
    mask = (digits == hole).sum(axis=1) == nu
    return mask


def project_sector(result, nu):
    """Fixed-hole-number component ``rho^(nu) = (P S)(P S)^dagger``."""
    S = result.S
    d = 3
    n = int(round(np.log(S.shape[0]) / np.log(d)))
    if not 0 <= nu <= n:
        raise ValueError(f"hole number {nu} out of range for n={n}")
    mask = hole_count_projector(n, nu)
    Snu = np.where(mask[:, None], S, 0)
    rho = Snu @ Snu.conj().T
    return NessResult(rho, Snu, float(np.real(np.trace(rho))), params=dict(result.params, nu=nu))


def defining_relation_residual(lax, n, coupling, hamiltonian, local_charge=sigma_z):
    """Relative residual of ``i[H, S_n] = c (q (x) S_{n-1} - S_{n-1} (x) q)``."""
    S = contract_s(lax, n)
    S1 = contract_s(lax, n - 1)
    H = hamiltonian.toarray() if sp.issparse(hamiltonian) else hamiltonian
    lhs = 1j * (H @ S - S @ H)
    rhs = coupling * (np.kron(local_charge, S1) - np.kron(S1, local_charge))
    return relative_norm(lhs - rhs, lhs, rhs)


def relative_norm(diff, lhs, rhs):
    """``||diff|| / max(1, ||lhs||, ||rhs||)`` in Frobenius norm."""
    return la.norm(diff) / max(1.0, la.norm(lhs), la.norm(rhs))


def commutator_norm(A, B):
    """``||[A, B]|| / (||A|| ||B||)``."""
    return la.norm(A @ B - B @ A) / (la.norm(A) * la.norm(B))


def xxz_hamiltonian_dense(model):
    return build_hamiltonian(model).toarray()
