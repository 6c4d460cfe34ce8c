"""Named algebraic-identity checks with reproducible reports.

Every check returns a :class:`CheckReport` whose verdict is ``pass`` iff all
residuals are at or below the tolerance.  Residuals are relative Frobenius
norms ``||lhs - rhs|| / max(1, ||lhs||, ||rhs||)`` unless stated otherwise.
"""

from dataclasses import dataclass, asdict
import itertools
import time

import numpy as np
import scipy.linalg as la

from . import exterior
from .auxiliary import q_number
from .basis import sigma_plus, sigma_minus, sigma_z
from .lax import (xxz_lax, xxz_boundary_operator, chebyshev_lax, lai_sutherland_lax, solve_p,
                  chebyshev_amplitudes, build_lax)
from .ness import contract_s, commutator_norm, defining_relation_residual, relative_norm, two_leg
from .operators import ChainModel, build_hamiltonian
from .universal import universal_sl2_R, rll_ybe_residual

DEFAULT_TOL = 1e-9
DEFAULT_SEED = 20240


@dataclass
class CheckReport:
    check_id: str
    params: dict
    residuals: dict
    tolerance: float
    verdict: str
    wall_time: float
    seed: int

    @property
    def passed(self):
        return self.verdict == "pass"

    def to_dict(self):
        return asdict(self)


def _report(check_id, params, residuals, tol, t0, seed):
    residuals = {k: float(v) for k, v in residuals.items()}
    verdict = "pass" if all(v <= tol for v in residuals.values()) else "fail"
    return CheckReport(check_id, params, residuals, tol, verdict, time.perf_counter() - t0, seed)


def _rng(seed):
    return np.random.default_rng(seed)


def _random_p(rng):
    return complex(rng.uniform(0.1, 0.6), rng.uniform(0.3, 1.0))


def _E(i, j, d=2):
    M = np.zeros((d, d))
    M[i, j] = 1.0
    return M


def physical_product(A, B):
    """``sum E_ij (x) E_kl (x) A[i,j] B[k,l]`` for two Lax grids sharing the auxiliary space."""
    d = A.shape[0]
    return sum(np.kron(np.kron(_E(i, j, d), _E(k, l, d)), A[i, j] @ B[k, l])
               for i, j, k, l in itertools.product(range(d), repeat=4))


def _interior(X, d, D, cut):
    """Restrict a ``(d^2 D) x (d^2 D)`` operator to auxiliary rows/cols ``< D - cut``."""
    return X.reshape(d * d, D, d * d, D)[:, : D - cut, :, : D - cut]


def sutherland_residual(p, gamma, D=8):
    """``[h, L (x) L] - (B (x) L - L (x) B)`` on auxiliary rows/cols ``0..D-3``."""
    lax = xxz_lax(p, gamma, D)
    L = lax.grid
    B = xxz_boundary_operator(lax)
    h = 2 * (np.kron(sigma_plus, sigma_minus) + np.kron(sigma_minus, sigma_plus)) + np.cos(gamma) * np.kron(sigma_z, sigma_z)
    H = np.kron(h, np.eye(D))
    LL = physical_product(L, L)
    lhs = H @ LL - LL @ H
    rhs = physical_product(B, L) - physical_product(L, B)
    cut = lambda X: _interior(X, 2, D, 2)
    return relative_norm(cut(lhs - rhs), cut(lhs), cut(rhs))


def trig_r(u, gamma):
    """Six-vertex ``R(u)`` with entries ``[u+1]_q``, ``[u]_q`` and ``1``."""
    a, b = q_number(u + 1, gamma), q_number(u, gamma)
    return np.array([[a, 0, 0, 0], [0, b, 1, 0], [0, 1, b, 0], [0, 0, 0, a]], dtype=complex)


PERM4 = np.eye(4)[[0, 2, 1, 3]]


def trig_rll_residual(p, gamma, u, v, D=8):
    """``P R(u-v) (L(u) (x) L(v)) = (L(v) (x) L(u)) P R(u-v)`` on auxiliary rows/cols ``0..D-3``."""
    Lu, Lv = xxz_lax(p, gamma, D, u).grid, xxz_lax(p, gamma, D, v).grid
    R = np.kron(PERM4 @ trig_r(u - v, gamma), np.eye(D))
    A, B = physical_product(Lu, Lv), physical_product(Lv, Lu)
    lhs, rhs = R @ A, B @ R
    cut = lambda X: _interior(X, 2, D, 2)
    return relative_norm(cut(lhs - rhs), cut(lhs), cut(rhs))


def _embed_r(R, pair):
    R4 = R.reshape(2, 2, 2, 2)
    T = np.zeros((2,) * 6, dtype=complex)
    rest = [k for k in range(3) if k not in pair][0]
    for idx in itertools.product(range(2), repeat=6):
        o, i = idx[:3], idx[3:]
        if o[rest] == i[rest]:
            T[idx] = R4[o[pair[0]], o[pair[1]], i[pair[0]], i[pair[1]]]
    return T.reshape(8, 8)


def trig_ybe_residual(u, v, gamma):
    """``R12(u-v) R13(u) R23(v) = R23(v) R13(u) R12(u-v)``."""
    R12 = _embed_r(trig_r(u - v, gamma), (0, 1))
    R13 = _embed_r(trig_r(u, gamma), (0, 2))
    R23 = _embed_r(trig_r(v, gamma), (1, 2))
    lhs, rhs = R12 @ R13 @ R23, R23 @ R13 @ R12
    return relative_norm(lhs - rhs, lhs, rhs)


def chebyshev_matrices(coupling, gamma, D):
    a, b = chebyshev_amplitudes(coupling, gamma, D)
    A0 = np.diag(a)
    Ap = np.diag(np.ones(D - 1), 1).astype(complex)
    Am = np.diag(b[:-1], -1)
    return A0, Ap, Am


def cubic_bulk_residuals(coupling, gamma, D=12):
    """The homogeneous cubic relations of the Chebyshev matrices, on rows/cols ``0..D-5``."""
    A0, Ap, Am = chebyshev_matrices(coupling, gamma, D)
    dl = np.cos(gamma)
    c = lambda X, Y: X @ Y - Y @ X
    ac = lambda X, Y: X @ Y + Y @ X
    k = D - 4
    out = {}
    for name, (P, M) in {"+": (Ap, Am), "-": (Am, Ap)}.items():
        rels = {
            "comm": c(P @ M, A0),
            "anti": ac(A0, P @ P) - 2 * dl * P @ A0 @ P,
            "square": c(P, M @ M) - 2 * dl * c(A0 @ A0, M),
            "mixed": 2 * dl * ac(P, A0 @ A0) + 2 * P @ M @ P - ac(M, P @ P) - 4 * A0 @ P @ A0,
        }
        for key, R in rels.items():
            out[f"{key}{name}"] = la.norm(R[:k, :k]) / max(1.0, la.norm((P @ M @ P)[:k, :k]))
    return out


def cubic_boundary_residuals(coupling, gamma, D=12):
    """Vacuum conditions of the Chebyshev matrices."""
    A0, Ap, Am = chebyshev_matrices(coupling, gamma, D)
    e0 = np.zeros(D, dtype=complex)
    e0[0] = 1.0
    ie = 1j * coupling
    I = np.eye(D)
    return {
        "<0|A-": la.norm(e0 @ Am),
        "<0|A+(A-A+ - ie)": la.norm(e0 @ Ap @ (Am @ Ap - ie * I)),
        "<0|A+A-^2": la.norm(e0 @ Ap @ Am @ Am),
        "A+^2A-|0>": la.norm(Ap @ Ap @ Am @ e0),
        "(A-A+ - ie)A-|0>": la.norm((Am @ Ap - ie * I) @ Am @ e0),
        "A+|0>": la.norm(Ap @ e0),
        "A0|0>-|0>": la.norm(A0 @ e0 - e0),
        "<0|A+A-|0>-ie": abs(e0 @ Ap @ Am @ e0 - ie),
    }


def _dissipator(jump, rate, X):
    Ld = jump.conj().T
    return rate * (jump @ X @ Ld - 0.5 * (Ld @ jump @ X + X @ Ld @ jump))


def local_boundary_residuals(lax, B, left_jumps, right_jumps):
    """Partially contracted boundary equations of the two-leg Lax operator.

    With ``B1[i,k] = B[i,i] (x) conj(L[k,i])`` and ``B2[i,k] = L[i,k] (x) conj(B[k,k])``:
    ``<<0|(B1 - B2 + i D_left LL) = 0`` and ``(B1 - B2 - i D_right LL)|0>> = 0``.
    Jumps are ``(operator, rate)`` pairs.
    """
    L, d, D = lax.grid, lax.d, lax.D
    kr = np.kron
    keys = [(i, k) for i in range(d) for k in range(d)]
    LL = {(i, k): sum(kr(L[i, j], L[k, j].conj()) for j in range(d)) for i, k in keys}
    B1 = {(i, k): kr(B[i, i], L[k, i].conj()) for i, k in keys}
    B2 = {(i, k): kr(L[i, k], B[k, k].conj()) for i, k in keys}

    def dhat(jumps):
        out = {key: np.zeros((D * D, D * D), dtype=complex) for key in keys}
        for i, k in keys:
            M = sum(_dissipator(J, r, _E(i, k, d)) for J, r in jumps)
            for a, b in keys:
                if M[a, b] != 0:
                    out[(a, b)] = out[(a, b)] + M[a, b] * LL[(i, k)]
        return out

    DL, DR = dhat(left_jumps), dhat(right_jumps)
    vac = np.kron(lax.left, lax.left.conj())
    left = max(la.norm(vac @ (B1[k] - B2[k] + 1j * DL[k])) for k in keys)
    right = max(la.norm((B1[k] - B2[k] - 1j * DR[k]) @ vac) for k in keys)
    return {"left": left, "right": right}


def check_local(suite, params=None, tol=DEFAULT_TOL, seed=DEFAULT_SEED):
    params = dict(params or {})
    rng = _rng(seed)
    t0 = time.perf_counter()
    gamma = params.get("gamma", np.pi / 3)
    if suite == "sutherland":
        D = params.get("D", 8)
        res = {f"draw{i}": sutherland_residual(_random_p(rng), gamma, D) for i in range(params.get("draws", 3))}
    elif suite == "rll":
        D = params.get("D", 8)
        res = {}
        for i in range(params.get("draws", 3)):
            p = _random_p(rng)
            u, v = rng.normal(size=2) * 0.3 + 1j * rng.normal(size=2) * 0.2
            res[f"trig{i}"] = trig_rll_residual(p, gamma, u, v, D)
            res[f"exterior{i}"] = exterior.rll_residual(_random_p(rng), _random_p(rng) - 0.5, params.get("alpha_max", 6))
    elif suite == "ybe":
        res = {}
        for i in range(params.get("draws", 3)):
            u, v = rng.normal(size=2) * 0.5 + 1j * rng.normal(size=2) * 0.3
            res[f"trig{i}"] = trig_ybe_residual(u, v, gamma)
            ps = [_random_p(rng) - 0.3 * j for j in range(3)]
            res[f"braided{i}"] = exterior.braided_ybe_residual(*ps, alpha_max=params.get("alpha_max", 4))
        res["trig-free-fermion"] = trig_ybe_residual(0.37 + 0.1j, -0.21 + 0.05j, np.pi / 2)
    elif suite == "cubic-bulk":
        res = {}
        for g in params.get("gammas", [gamma, 0.0, 1j * np.arccosh(1.4)]):
            c = rng.uniform(0.2, 2.0)
            res.update({f"{k}@{np.round(g, 3)}": v for k, v in cubic_bulk_residuals(c, g, params.get("D", 12)).items()})
    elif suite == "cubic-boundary":
        res = {}
        for g in params.get("gammas", [gamma, 0.0]):
            c = rng.uniform(0.2, 2.0)
            res.update({f"{k}@{np.round(g, 3)}": v for k, v in cubic_boundary_residuals(c, g, params.get("D", 12)).items()})
    elif suite == "boundary-system":
        model = params.get("model", "xxz")
        eps = params.get("eps", float(rng.uniform(0.3, 2.0)))
        if model == "suN":
            from .lindblad import build_liouvillian, relative_residual
            m = ChainModel("suN", n=params.get("n", 3), eps=eps, N=params.get("N", 3))
            rho = contract_s(build_lax(m), m.n)
            rho = rho @ rho.conj().T
            res = {"global": relative_residual(build_liouvillian(m), rho)}
        else:
            lax = xxz_lax(solve_p(eps, gamma), gamma, params.get("D", 6))
            B = xxz_boundary_operator(lax)
            res = local_boundary_residuals(lax, B, [(sigma_plus, eps)], [(sigma_minus, eps)])
        params["eps"] = eps
    else:
        raise ValueError(f"unknown local suite {suite!r}")
    return _report(f"local/{suite}", _jsonable(params), res, tol, t0, seed)


def chebyshev_relation_residual(n, gamma, rate):
    """Defining relation in the Chebyshev gauge, whose coupling is ``rate / 2``."""
    c = rate / 2
    model = ChainModel("xxz", n=n, eps=rate, delta=float(np.real(np.cos(gamma))))
    return defining_relation_residual(chebyshev_lax(c, gamma, n + 2), n, c, build_hamiltonian(model))


def two_leg_ice_residual(p, gamma, D=6):
    """``[T, s^z (x) 1 - 1 (x) conj(s^z)]`` for the two-leg lift of the lowest-weight Lax."""
    tl = two_leg(xxz_lax(p, gamma, D))
    z = np.arange(D) - p
    N = np.kron(np.diag(z), np.eye(D)) - np.kron(np.eye(D), np.diag(np.conj(z)))
    T = tl.transfer.toarray()
    return la.norm(T @ N - N @ T) / la.norm(T)


def check_global(suite, params=None, tol=DEFAULT_TOL, seed=DEFAULT_SEED):
    from .pseudolocal import almost_commutation_residual
    params = dict(params or {})
    rng = _rng(seed)
    t0 = time.perf_counter()
    gamma = params.get("gamma", np.pi / 3)
    if suite == "commute-S":
        res = {}
        n = params.get("n", 6)
        for i in range(params.get("pairs", 5)):
            e1, e2 = rng.uniform(0.3, 3.0, size=2)
            D = n // 2 + 2
            S1 = contract_s(xxz_lax(solve_p(e1, gamma), gamma, D), n)
            S2 = contract_s(xxz_lax(solve_p(e2, gamma), gamma, D), n)
            res[f"xxz{i}"] = commutator_norm(S1, S2)
        nls = params.get("n_ls", 4)
        for i in range(params.get("pairs", 5)):
            (e1, e2), (m1, m2) = rng.uniform(0.3, 3.0, size=2), rng.uniform(-1.0, 1.0, size=2)
            D = nls // 2 + 2
            S1 = contract_s(lai_sutherland_lax(e1, D, m1), nls)
            S2 = contract_s(lai_sutherland_lax(e2, D, m2), nls)
            res[f"ls{i}"] = commutator_norm(S1, S2)
    elif suite == "defining-relation":
        res = {f"n{n}": chebyshev_relation_residual(n, gamma, float(rng.uniform(0.3, 2.0)))
               for n in range(2, params.get("nmax", 7) + 1)}
    elif suite == "almost-commute-Z":
        l, m = params.get("lm", (1, 3))
        hw = np.pi / (2 * m)
        res = {}
        for n in range(3, params.get("nmax", 6) + 1):
            phi = np.pi / 2 + rng.uniform(-0.8, 0.8) * hw + 1j * rng.normal() * 0.3
            res[f"n{n}"] = almost_commutation_residual(l, m, phi, n)
            res[f"n{n}-center"] = almost_commutation_residual(l, m, np.pi / 2, n)
    elif suite == "ice-rule":
        am = params.get("alpha_max", 6)
        res = {"exterior": exterior.ice_rule_residual(_random_p(rng), _random_p(rng) - 0.5, am),
               "two-leg": two_leg_ice_residual(_random_p(rng), gamma)}
    else:
        raise ValueError(f"unknown global suite {suite!r}")
    return _report(f"global/{suite}", _jsonable(params), res, tol, t0, seed)


def check_exterior(suite, params=None, tol=DEFAULT_TOL, seed=DEFAULT_SEED):
    params = dict(params or {})
    rng = _rng(seed)
    t0 = time.perf_counter()
    x = params.get("x", complex(rng.uniform(0.1, 0.9), rng.uniform(0.2, 0.8)))
    amax = params.get("alpha_max", 6)
    if suite == "kernel":
        res = {}
        for a in range(1, amax + 1):
            hv, hu, hhu = exterior.kernel_residuals(a, x)
            res.update({f"Hv{a}": hv, f"Hu{a}": hu, f"HHu{a}": hhu})
    elif suite == "jordan":
        res = {f"alpha{a}": exterior.jordan_residual(a, x) for a in range(1, amax + 1)}
        res["eigenvalues"] = exterior.eigenvalue_spread(x + 0.2, x - 0.3j, amax)
        res["unitarity"] = exterior.unitarity_residual(x + 0.2, x - 0.3j, amax)
    elif suite == "transposition":
        p, pp = _random_p(rng), _random_p(rng) - 0.5
        res = {"R": exterior.transposition_residual(p, pp, min(amax, 5)),
               "lax": exterior.lax_transposition_residual(p)}
    elif suite == "master-symmetry":
        r1, r2 = exterior.master_symmetry_residuals(x, min(amax, 5))
        res = {"lambda1": r1, "lambda2": r2, "hll": exterior.hll_residual(x, min(amax, 5))}
    else:
        raise ValueError(f"unknown exterior suite {suite!r}")
    params["x"] = x
    return _report(f"exterior/{suite}", _jsonable(params), res, tol, t0, seed)


def check_universal(params=None, tol=DEFAULT_TOL, seed=DEFAULT_SEED):
    params = dict(params or {})
    rng = _rng(seed)
    t0 = time.perf_counter()
    l1, l2 = complex(*rng.uniform(-0.8, 0.8, 2)), complex(*rng.uniform(-0.8, 0.8, 2))
    u = complex(*rng.uniform(-0.6, 0.6, 2))
    spec = universal_sl2_R(l1, l2, u, params.get("zmax", 10))
    a, b = complex(*rng.uniform(-0.6, 0.6, 2)), complex(*rng.uniform(-0.6, 0.6, 2))
    res = {"gamma-form": spec.extra["gamma_residual"], "ybe": rll_ybe_residual(l1, l2, a, b, params.get("cap", 7))}
    return _report("universal", _jsonable({"l1": l1, "l2": l2, "u": u}), res, tol, t0, seed)


LOCAL_SUITES = ("sutherland", "rll", "ybe", "cubic-bulk", "cubic-boundary", "boundary-system")
GLOBAL_SUITES = ("commute-S", "defining-relation", "almost-commute-Z", "ice-rule")
EXTERIOR_SUITES = ("kernel", "jordan", "transposition", "master-symmetry")


def run_default_suite(tol=DEFAULT_TOL, seed=DEFAULT_SEED):
    """All local, global and exterior checks with default parameters."""
    reports = [check_local(s, tol=tol, seed=seed) for s in LOCAL_SUITES]
    reports += [check_global(s, tol=tol, seed=seed) for s in GLOBAL_SUITES]
    reports += [check_exterior(s, tol=tol, seed=seed) for s in EXTERIOR_SUITES]
    reports.append(check_universal(tol=tol, seed=seed))
    return reports


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (complex, np.complexfloating)):
        return f"{obj.real!r}{obj.imag:+}j"
    if isinstance(obj, np.generic):
        return obj.item()
    return obj
