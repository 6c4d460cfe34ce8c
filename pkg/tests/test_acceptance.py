"""The twelve acceptance criteria, each at its stated tolerance.

Every test records one ``criterion k: PASS|FAIL`` line, printed in the
terminal summary of the pytest run.
"""

import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from drivenchain import pseudolocal as pl
from drivenchain import verify as vf
from drivenchain.basis import weyl
from drivenchain.lax import build_lax
from drivenchain.lindblad import build_liouvillian, solve_ness, fidelity, relative_residual
from drivenchain.ness import assemble_ness, project_sector, two_leg, reduce_two_leg
from drivenchain.observables import (xxz_two_leg, spin_current, ls_currents, subdiffusive_slope,
                                     magnetization_profile, schmidt_rank)
from drivenchain.operators import ChainModel, embed, build_current
from drivenchain.universal import universal_sl2_R, rll_ybe_residual


def record(k, ok, detail):
    line = f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def test_criterion_1_oracle_equivalence():
    worst_res, worst_inf, worst_t = 0.0, 0.0, 0.0
    for eps in (0.5, 1.0, 2.0):
        for n in range(2, 7):
            t0 = time.perf_counter()
            m = ChainModel("xxz", n=n, eps=eps, gamma_frac=(1, 3))
            L = build_liouvillian(m)
            rho = assemble_ness(build_lax(m), n).rho
            ss = solve_ness(L)
            worst_res = max(worst_res, relative_residual(L, rho))
            worst_inf = max(worst_inf, 1 - fidelity(rho, ss.states[0]))
            worst_t = max(worst_t, time.perf_counter() - t0)
    ok = worst_res <= 1e-9 and worst_inf <= 1e-9 and worst_t <= 60
    assert record(1, ok, f"max residual {worst_res:.1e}, max infidelity {worst_inf:.1e}, "
                         f"slowest case {worst_t:.2f}s")


def test_criterion_2_lai_sutherland_degeneracy():
    dims, worst, exact_top = [], 0.0, True
    for n in (2, 3, 4):
        m = ChainModel("lai-sutherland", n=n, eps=1.0)
        L = build_liouvillian(m)
        holes = sum(embed(weyl(1, 1, 3), x, n, 3) for x in range(1, n + 1)).toarray()
        ss = solve_ness(L, symmetry=holes)
        dims.append(ss.null_dimension == n + 1)
        res = assemble_ness(build_lax(m), n)
        for nu in range(n + 1):
            sec = project_sector(res, nu).rho
            worst = max(worst, 1 - max(fidelity(sec, s) for s in ss.states))
        top = project_sector(res, n).rho
        hole = weyl(1, 1, 3)
        expect = hole
        for _ in range(n - 1):
            expect = np.kron(expect, hole)
        exact_top &= bool(np.array_equal(top / top[np.nonzero(top)][0], expect))
    ok = all(dims) and worst <= 1e-8 and exact_top
    assert record(2, ok, f"null dimensions n+1: {all(dims)}, max sector infidelity {worst:.1e}, "
                         f"top sector exact: {exact_top}")


def test_criterion_3_commuting_amplitudes():
    r = vf.check_global("commute-S", {"n": 8, "n_ls": 4, "pairs": 5}, tol=1e-10)
    worst = max(r.residuals.values())
    assert record(3, r.passed, f"max relative commutator {worst:.1e}")


def test_criterion_4_current_identities():
    worst_xxz = 0.0
    for eps in (0.5, 1.0, 2.0):
        for n in range(2, 7):
            m = ChainModel("xxz", n=n, eps=eps, gamma_frac=(1, 3))
            rho = solve_ness(build_liouvillian(m)).states[0]
            bonds, _ = build_current(m)
            j = np.real(np.trace(bonds[0] @ rho))
            _, ratio = spin_current(xxz_two_leg(m), n)
            worst_xxz = max(worst_xxz, abs(j - ratio) / abs(j))
    worst_j2, worst_j1 = 0.0, 0.0
    for eps, mu in ((0.5, 0.0), (1.0, 0.4), (2.0, -0.7)):
        for n in (2, 3, 4, 6):
            m = ChainModel("lai-sutherland", n=n, eps=eps, mu=mu)
            tl = reduce_two_leg(two_leg(build_lax(m)))
            cur, ratio = ls_currents(tl, n)
            # species 1 (up) and 2 (hole) in one-based labels are indices 0 and 1 here
            worst_j2 = max(worst_j2, abs(cur[1]))
            worst_j1 = max(worst_j1, abs(cur[0] - ratio) / abs(ratio))
    ok = worst_xxz <= 1e-9 and worst_j2 <= 1e-12 and worst_j1 <= 1e-9
    assert record(4, ok, f"XXZ {worst_xxz:.1e}, |<J2>| {worst_j2:.1e}, J1 ratio {worst_j1:.1e}")


def test_criterion_5_subdiffusive_scaling():
    t0 = time.perf_counter()
    slope = subdiffusive_slope(2.0, 8, 64)
    dt = time.perf_counter() - t0
    ok = abs(slope - 2) <= 0.2 and dt <= 10
    assert record(5, ok, f"slope {slope:.4f} in {dt:.2f}s")


def test_criterion_6_dz_closed_form():
    errs = {lm: abs(pl.dz_numeric(*lm) - pl.dz_closed(*lm)) for lm in [(1, 2), (1, 3), (1, 5), (2, 5)]}
    ok = max(errs.values()) <= 1e-6 and abs(pl.dz_closed(1, 2) - 1) < 1e-15 and abs(pl.dz_closed(1, 3) - 9 / 16) < 1e-15
    assert record(6, ok, f"max error {max(errs.values()):.1e}")


PHIS = [(0.0, 0.0), (0.3, -0.2), (-0.5, 0.4)]


def k_rate_errors(n=200):
    errs = []
    for m in (3, 5):
        hw = pl.strip_halfwidth(m)
        for a, b in PHIS:
            phi, phip = np.pi / 2 + a * hw + 0.1j, np.pi / 2 + b * hw - 0.05j
            K = pl.k_closed(1, m, phi, phip)
            errs.append(abs(pl.k_transfer(1, m, phi, phip, n) / n - K) / abs(K))
    return errs


@pytest.mark.xfail(strict=True, reason="K_n = K n + b + O(tau^n) with b of order K, so K_n/n - K ~ b/n "
                                       "exceeds 1e-3 at n = 200")
def test_criterion_7_k_rate():
    errs = k_rate_errors()
    center = abs(pl.k_closed(1, 3, np.pi / 2, np.pi / 2 + 1e-9) - pl.k_center(1, 3)) / pl.k_center(1, 3)
    exact_center = abs(pl.k_center(1, 3) - 4 / 9)
    ok = max(errs) <= 1e-3 and exact_center <= 1e-10
    assert record(7, ok, f"max |K_200/200 - K|/|K| = {max(errs):.2e} (limit 1e-3); center limit {exact_center:.1e},"
                         f" near-center closed form {center:.1e}")


def test_criterion_7_supplement_rate_is_exact():
    # the growth rate itself: K_{n+1} - K_n converges to K exponentially
    for m in (3, 5):
        hw = pl.strip_halfwidth(m)
        for a, b in PHIS:
            phi, phip = np.pi / 2 + a * hw + 0.1j, np.pi / 2 + b * hw - 0.05j
            Ks = pl.k_sequence(1, m, phi, phip, 200)
            K = pl.k_closed(1, m, phi, phip)
            assert abs((Ks[200] - Ks[199]) - K) / abs(K) < 1e-10
    assert abs(pl.k_center(1, 3) - 4 / 9) < 1e-15


def test_criterion_8_dk_closed_form():
    errs, order = [], True
    for m in (3, 5, 7):
        dk, _, _ = pl.dk_quadrature(1, m)
        errs.append(abs(dk - pl.dk_closed(1, m)))
        order &= pl.dk_closed(1, m) >= pl.dz_closed(1, m)
    fred = abs(pl.dk_fredholm(1, 3) - pl.dk_closed(1, 3))
    ok = max(errs) <= 1e-6 and order
    assert record(8, ok, f"max quadrature error {max(errs):.1e}, D_K >= D_Z: {order}, "
                         f"Fredholm diagnostic error {fred:.1e}, D_K(1,3) = {pl.dk_closed(1, 3):.5f}")


def test_criterion_9_mazur_dual():
    dual = max(abs(pl.mazur_summand_brute(1, 3, n) - pl.mazur_summand_transfer(1, 3, n))
               / pl.mazur_summand_transfer(1, 3, n) for n in range(2, 11))
    overl = max(abs(pl.current_overlaps(1, 3, np.pi / 2 + 0.1 + 0.2j, n)[0] - 1j * (n - 1)) for n in range(2, 9))
    ok = dual <= 1e-10 and overl <= 1e-12
    assert record(9, ok, f"brute vs transfer {dual:.1e}, overlap i(n-1) error {overl:.1e}")


def test_criterion_10_algebraic_suites():
    t0 = time.perf_counter()
    reports = vf.run_default_suite(tol=1e-9)
    dt = time.perf_counter() - t0
    worst = max(max(r.residuals.values()) for r in reports)
    ok = all(r.passed for r in reports) and dt < 300
    assert record(10, ok, f"{len(reports)} suites, max residual {worst:.1e}, {dt:.2f}s")


def test_criterion_11_universal_r():
    rng = np.random.default_rng(11)
    gam, ybe = 0.0, 0.0
    for _ in range(5):
        l1, l2, u = (complex(*rng.uniform(-0.7, 0.7, 2)) for _ in range(3))
        gam = max(gam, universal_sl2_R(l1, l2, u, 10).extra["gamma_residual"])
        a, b = complex(*rng.uniform(-0.6, 0.6, 2)), complex(*rng.uniform(-0.6, 0.6, 2))
        ybe = max(ybe, rll_ybe_residual(l1, l2, a, b, cap=7))
    ok = gam <= 1e-12 and ybe <= 1e-8
    assert record(11, ok, f"gamma form {gam:.1e}, YBE {ybe:.1e}")


def test_criterion_12_qualitative_trends():
    def span(delta, n):
        prof = magnetization_profile(xxz_two_leg(ChainModel("xxz", n=n, eps=1.0, delta=delta)), n)
        q = n // 4
        return prof[q] - prof[n - 1 - q]

    flat = [span(0.5, n) for n in (10, 20, 40, 80)]
    kink = [span(1.5, n) for n in (10, 20, 40, 80)]
    ranks = [schmidt_rank(assemble_ness(build_lax(ChainModel("xxz", n=n, eps=1.0, delta=0.7)), n).rho, n // 2)
             for n in range(4, 9)]
    flat_ok = all(np.diff(flat) < 0) and flat[-1] < 1e-3
    kink_ok = all(np.diff(kink) >= -1e-9) and kink[-1] > 1.99
    rank_ok = ranks == sorted(ranks) and ranks[-1] / ranks[0] > 2 and np.all(np.diff(np.diff(ranks[::2])) > 0)
    ok = flat_ok and kink_ok and rank_ok
    assert record(12, ok, f"flat Delta<1: {flat_ok}, kink Delta>1: {kink_ok}, Schmidt ranks {ranks}")
