"""Steady-state expectation values from two-leg vertex operators.

All contractions propagate boundary vectors through sparse vertex operators;
the auxiliary transfer operator is never raised to a power.
"""

import numpy as np
import scipy.linalg as la

from .auxiliary import q_number
from .basis import sigma_z, sigma_plus, sigma_minus, weyl
from .lax import lai_sutherland_lax, build_lax, xxz_lax
from .ness import two_leg, reduce_two_leg, kappa_indices


# extra reach allowed for vertex operators inserted between the two sweeps
VERTEX_REACH = 2


def _propagate_right(tl, n, log=False, total=None):
    """Vectors ``T^k |right>`` for ``k = 0..n`` (rescaled when ``log``).

    With ``total`` given, components that cannot reach the left vector
    within the remaining ``total - k`` sites are dropped; this is exact and
    keeps the rescaling from being dominated by irrelevant components.
    Returns the list of vectors and the accumulated log scale factors.
    """
    dist = tl.distances()[0] if total is not None else None
    v = tl.right.astype(complex)
    vecs, logs = [v], [0.0]
    acc = 0.0
    for k in range(n):
        v = tl.transfer @ v
        if dist is not None:
            v = np.where(dist <= total - k - 1 + VERTEX_REACH, v, 0)
        if log:
            s = np.max(np.abs(v))
            if s > 0:
                v = v / s
                acc += np.log(s)
        vecs.append(v)
        logs.append(acc)
    return vecs, logs


def _propagate_left(tl, steps, total=None):
    """``<<left| T^steps`` rescaled to unit max-norm, with its log scale."""
    dist = tl.distances()[1] if total is not None else None
    w = tl.left.astype(complex)
    acc = 0.0
    for k in range(steps):
        w = tl.transfer.T @ w
        if dist is not None:
            w = np.where(dist <= total - k - 1 + VERTEX_REACH, w, 0)
        s = np.max(np.abs(w))
        w = w / s
        acc += np.log(s)
    return w, acc


def partition_function(tl, n, log=False):
    """``Z_n = <<left| T^n |right>>``.

    With ``log=True`` returns ``log Z_n`` accumulated with per-step
    rescaling, which stays finite for chains of hundreds of sites.
    """
    if not log:
        v = tl.right.astype(complex)
        for _ in range(n):
            v = tl.transfer @ v
        return float(np.real(tl.left @ v))
    vecs, logs = _propagate_right(tl, n, log=True, total=n)
    return logs[-1] + np.log(np.real(tl.left @ vecs[-1]))


def partition_sequence(tl, nmax):
    """``log Z_n`` for ``n = 0..nmax`` from a single sweep."""
    v = tl.right.astype(complex)
    acc = 0.0
    out = [np.log(np.real(tl.left @ v))]
    for _ in range(nmax):
        v = tl.transfer @ v
        s = np.max(np.abs(v))
        v = v / s
        acc += np.log(s)
        out.append(acc + np.log(np.real(tl.left @ v)))
    return np.array(out)


def expect_local(tl, op, x, n):
    """``<O>`` for an operator supported on sites ``x..x+k-1`` (one-based)."""
    op = np.asarray(op)
    k = int(round(np.log(op.shape[0]) / np.log(tl.d)))
    if not 1 <= x <= n - k + 1:
        raise ValueError(f"support starting at {x} exceeds n={n}")
    V = tl.vertex(op)
    right, logs = _propagate_right(tl, n - x - k + 1, log=True, total=n - x - k + 1 + (x - 1))
    w, acc = _propagate_left(tl, x - 1, total=x - 1 + (n - x - k + 1))
    logz = partition_function(tl, n, log=True)
    return complex(w @ (V @ right[-1])) * np.exp(acc + logs[-1] - logz)


def expect_product(tl, ops, sites, n):
    """``<O_1(x_1) O_2(x_2) ...>`` for on-site operators at increasing sites."""
    order = np.argsort(sites)
    sites = [sites[i] for i in order]
    ops = [ops[i] for i in order]
    w = tl.left.astype(complex)
    pos = 1
    for O, x in zip(ops, sites):
        for _ in range(x - pos):
            w = tl.transfer.T @ w
        w = tl.vertex(O).T @ w
        pos = x + 1
    for _ in range(n - pos + 1):
        w = tl.transfer.T @ w
    return complex(w @ tl.right) / partition_function(tl, n)


def magnetization_profile(tl, n):
    """``<sigma^z_x>`` for ``x = 1..n``."""
    Sv = tl.vertex(sigma_z)
    right, logs = _propagate_right(tl, n, log=True, total=n - 1)
    logz = partition_function(tl, n, log=True)
    dist = tl.distances()[1]
    w = tl.left.astype(complex)
    acc = 0.0
    out = []
    for x in range(1, n + 1):
        out.append(np.real(w @ (Sv @ right[n - x])) * np.exp(acc + logs[n - x] - logz))
        w = tl.transfer.T @ w
        w = np.where(dist <= n - 1 - x + VERTEX_REACH, w, 0)
        s = np.max(np.abs(w))
        w = w / s
        acc += np.log(s)
    return np.array(out)


def rescaled_coordinate(n):
    """Profile coordinate ``(x - 1)/(n - 1)``."""
    return np.arange(n) / max(n - 1, 1)


def current_vertex(tl):
    """``i(LL[1,0] LL[0,1] - LL[0,1] LL[1,0])``, the lift of ``j/4``."""
    g = tl.grid
    return 1j * (g[(1, 0)] @ g[(0, 1)] - g[(0, 1)] @ g[(1, 0)])


def current_factor(p, gamma):
    """Constant ``c`` with ``<j> = c Z_{n-1} / Z_n`` for the lowest-weight Lax.

    On the diagonal sublattice the current vertex is proportional to the
    transfer operator, ``i(LL^{21}LL^{12} - LL^{12}LL^{21}) = -i[p - conj(p)]_q T``,
    and the density ``j = 4i(s+ s- - s- s+)`` carries a factor 4.
    """
    return np.real(4 * (-1j) * q_number(p - np.conj(p), gamma))


def varrho(gamma, s):
    """Proportionality ``-2i[s]_q`` between current vertex and transfer operator."""
    return -2j * q_number(s, gamma)


def spin_current(tl, n, x=None):
    """Spin current of a spin-1/2 NESS.

    Returns
    -------
    direct : ndarray
        ``<j_{x,x+1}>`` for all bonds (or the single bond ``x``).
    ratio : float
        ``current_factor(p, gamma) * Z_{n-1} / Z_n``.
    """
    j = 4j * (np.kron(sigma_plus, sigma_minus) - np.kron(sigma_minus, sigma_plus))
    bonds = range(1, n) if x is None else [x]
    direct = np.array([np.real(expect_local(tl, j, b, n)) for b in bonds])
    p, gamma = tl.params["p"], tl.params["gamma"]
    ratio = current_factor(p, gamma) * np.exp(partition_function(tl, n - 1, log=True)
                                              - partition_function(tl, n, log=True))
    return direct, ratio


def ls_currents(tl, n, x=1):
    """Particle currents ``<J^i_{x,x+1}>`` for ``i = 0, 1, 2`` of the three-level NESS.

    Also returns the closed form ``2 eps Z_{n-1} / Z_n``.
    """
    out = []
    for i in range(3):
        J = sum(1j * (np.kron(weyl(i, j, 3), weyl(j, i, 3)) - np.kron(weyl(j, i, 3), weyl(i, j, 3)))
                for j in range(3))
        out.append(expect_local(tl, J, x, n))
    eps = tl.params["eps"]
    ratio = 2 * eps * np.exp(partition_function(tl, n - 1, log=True) - partition_function(tl, n, log=True))
    return np.array(out), ratio


def ls_partition(eps, n, mu=0.0, reduced=True):
    lax = lai_sutherland_lax(eps, n // 2 + 2, mu)
    tl = two_leg(lax)
    if reduced:
        tl = reduce_two_leg(tl)
    return partition_function(tl, n, log=True)


def filling_ratio(eps, n, mu, h=1e-4):
    """Average hole filling ``r = n^{-1} d log Z_n / d mu``.

    Central differences at steps ``h`` and ``h/2`` combined by one
    Richardson level.
    """
    def deriv(step):
        return (ls_partition(eps, n, mu + step) - ls_partition(eps, n, mu - step)) / (2 * step)

    d1, d2 = deriv(h), deriv(h / 2)
    return float((4 * d2 - d1) / 3 / n)


def schmidt_rank(rho, cut, d=2, tol=1e-10):
    """Operator-space Schmidt rank of ``rho`` across the bond after site ``cut``."""
    dim = rho.shape[0]
    n = int(round(np.log(dim) / np.log(d)))
    a, b = d ** cut, d ** (n - cut)
    R = rho.reshape(a, b, a, b).transpose(0, 2, 1, 3).reshape(a * a, b * b)
    s = la.svd(R, compute_uv=False)
    return int(np.sum(s > tol * s[0]))


def transfer_and_magnetization(tl):
    """``(T, S)`` with ``S = LL[0,0] - LL[1,1]``."""
    return tl.transfer, tl.grid[(0, 0)] - tl.grid[(1, 1)]


def cubic_coefficients(gamma, s):
    """Coefficients ``(k0, k1, k2)`` of the inhomogeneous cubic relation."""
    c2 = np.cos(2 * gamma)
    k0 = 0.5 - c2
    k1 = 1 + c2 + np.cos(4 * gamma) - 4 * np.cos(2 * gamma * s)
    k2 = (12 * np.cos(2 * gamma * s) - 2 * np.cos(4 * gamma) - 10 - 16 * c2 * np.sin(gamma * s) ** 2
          + (8 - 4 * np.cos(2 * gamma * s)) * q_number(s, gamma) ** 2)
    return k0, k1, k2


def cubic_profile_residual(tl, gamma, s):
    """Relative residual of ``k0(TTS + STT) + TST + k1{T,S} + k2 S`` on the given space."""
    T, S = transfer_and_magnetization(tl)
    T, S = T.toarray(), S.toarray()
    k0, k1, k2 = cubic_coefficients(gamma, s)
    lhs = k0 * (T @ T @ S + S @ T @ T) + T @ S @ T + k1 * (T @ S + S @ T) + k2 * S
    return la.norm(lhs) / max(1.0, la.norm(T @ S @ T))


def isotropic_profile_residual(tl, s, rows=None):
    """Residual of ``[T,[T,S]] + 2{T,S} - 8 s^2 S`` (optionally on leading rows/cols)."""
    T, S = transfer_and_magnetization(tl)
    T, S = T.toarray(), S.toarray()
    TS = T @ S - S @ T
    R = T @ TS - TS @ T + 2 * (T @ S + S @ T) - 8 * s ** 2 * S
    scale = la.norm(T @ TS)
    if rows is not None:
        R = R[:rows, :rows]
        scale = la.norm((T @ TS)[:rows, :rows])
    return la.norm(R) / max(1.0, scale)


def fit_cubic_relation(tl, rows=None):
    """Least-squares coefficients ``(a, b, c)`` of ``a(TTS+STT) + TST + b{T,S} + c S = 0``.

    Returns the coefficients and the relative residual of the best fit.
    """
    T, S = transfer_and_magnetization(tl)
    T, S = T.toarray(), S.toarray()
    sl = slice(None) if rows is None else slice(0, rows)
    cut = lambda X: X[sl, sl].ravel()
    A = np.array([cut(T @ T @ S + S @ T @ T), cut(T @ S + S @ T), cut(S)]).T
    b = -cut(T @ S @ T)
    x, *_ = la.lstsq(A, b)
    return x, la.norm(A @ x - b) / la.norm(b)


def xxz_two_leg(model, reduced=True, D=None):
    """Two-leg operators of the lowest-weight XXZ Lax for ``model``."""
    lax = build_lax(model, D=D)
    tl = two_leg(lax)
    return reduce_two_leg(tl) if reduced else tl


def log_partition_ratios(tl, nmax):
    """``log(Z_n / Z_{n-1})`` for ``n = 1..nmax``."""
    return np.diff(partition_sequence(tl, nmax))


def subdiffusive_slope(eps=2.0, nmin=8, nmax=64):
    """Slope of ``log(Z_n/Z_{n-1})`` against ``log n`` for the isotropic chain.

    ``Z_n / Z_{n-1}`` grows like ``n^2`` for large ``n`` at fixed coupling,
    so the fitted slope is close to 2.
    """
    D = nmax // 2 + 2
    lax = xxz_lax(4j / eps, 0.0, D)
    tl = two_leg(lax).restrict(kappa_indices(D))
    r = log_partition_ratios(tl, nmax)
    ns = np.arange(1, nmax + 1)
    sel = (ns >= nmin) & (ns <= nmax)
    slope, _ = np.polyfit(np.log(ns[sel]), r[sel], 1)
    return slope
