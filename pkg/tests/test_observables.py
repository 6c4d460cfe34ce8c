import numpy as np
import pytest

from drivenchain.basis import sigma_z, sigma_plus, sigma_minus
from drivenchain.lax import build_lax, xxz_lax, lai_sutherland_lax
from drivenchain.lindblad import build_liouvillian, solve_ness
from drivenchain.ness import assemble_ness, contract_s, two_leg, kappa_indices, reduce_two_leg
from drivenchain.observables import (partition_function, partition_sequence, expect_local, expect_product,
                                     magnetization_profile, spin_current, ls_currents, filling_ratio,
                                     schmidt_rank, xxz_two_leg, subdiffusive_slope, isotropic_profile_residual,
                                     fit_cubic_relation, current_factor, varrho, rescaled_coordinate,
                                     log_partition_ratios)
from drivenchain.operators import ChainModel, embed, build_current

# Frozen from the dense oracle null vector and, independently, from the
# partition-function ratio (XXZ, gamma = pi/3, eps = 1, n = 5).
CURRENT_XXZ_5 = 0.91082481546553
Z_XXZ_5 = 285.44259892828984


def oracle_state(m):
    return solve_ness(build_liouvillian(m)).states[0]


def test_frozen_current_and_partition():
    m = ChainModel("xxz", n=5, eps=1.0, gamma_frac=(1, 3))
    tl = xxz_two_leg(m)
    assert partition_function(tl, 5) == pytest.approx(Z_XXZ_5, rel=1e-12)
    direct, ratio = spin_current(tl, 5)
    assert np.allclose(direct, CURRENT_XXZ_5, rtol=1e-11)
    assert ratio == pytest.approx(CURRENT_XXZ_5, rel=1e-11)
    rho = oracle_state(m)
    _, J = build_current(m)
    assert np.real(np.trace(J @ rho)) / 4 == pytest.approx(CURRENT_XXZ_5, rel=1e-9)


@pytest.mark.parametrize("kw", [{"delta": 0.3}, {"delta": 1.8}, {"gamma_frac": (2, 5)}])
def test_local_expectations_against_oracle(kw):
    n = 5
    m = ChainModel("xxz", n=n, eps=0.7, **kw)
    rho = oracle_state(m)
    tl = xxz_two_leg(m, reduced=False)
    prof = magnetization_profile(tl, n)
    for x in range(1, n + 1):
        assert prof[x - 1] == pytest.approx(np.real(np.trace(embed(sigma_z, x, n).toarray() @ rho)), abs=1e-11)
    zz = np.kron(sigma_z, sigma_z)
    assert expect_local(tl, zz, 2, n).real == pytest.approx(np.real(np.trace(embed(zz, 2, n).toarray() @ rho)),
                                                            abs=1e-11)
    pm = expect_product(tl, [sigma_plus, sigma_minus], [1, 3], n)
    op = (embed(sigma_plus, 1, n) @ embed(sigma_minus, 3, n)).toarray()
    assert pm == pytest.approx(np.trace(op @ rho), abs=1e-11)
    with pytest.raises(ValueError):
        expect_local(tl, zz, 5, n)


@pytest.mark.parametrize("n", [2, 3, 4, 6])
def test_current_ratio_identity(n):
    m = ChainModel("xxz", n=n, eps=1.4, delta=0.6)
    direct, ratio = spin_current(xxz_two_leg(m), n)
    assert np.allclose(direct, ratio, rtol=1e-10)


def test_current_constants():
    p, g = 0.4 + 0.8j, 0.9
    s = p - np.conj(p)
    assert current_factor(p, g) == pytest.approx(2 * np.real(varrho(g, s)))


def test_lai_sutherland_currents_and_oracle():
    n, eps, mu = 3, 1.0, 0.0
    tl = reduce_two_leg(two_leg(lai_sutherland_lax(eps, n // 2 + 2, mu)))
    cur, ratio = ls_currents(tl, n)
    # frozen: the partition-function ratio at n = 3, eps = 1 equals 6/19
    assert ratio == pytest.approx(6 / 19, rel=1e-12)
    assert cur[0].real == pytest.approx(ratio, rel=1e-10)
    assert abs(cur[1]) < 1e-12
    assert cur[2].real == pytest.approx(-ratio, rel=1e-10)
    m = ChainModel("lai-sutherland", n=n, eps=eps)
    S = contract_s(build_lax(m), n)
    rho = S @ S.conj().T
    rho /= np.trace(rho)
    bonds, _ = build_current(m, species=0)
    assert np.real(np.trace(bonds[0] @ rho)) == pytest.approx(ratio, rel=1e-10)


@pytest.mark.parametrize("eps,n,mu", [(1.0, 3, 0.3), (0.7, 4, -0.5), (2.0, 3, 1.2)])
def test_filling_ratio_matches_hole_count(eps, n, mu):
    S = contract_s(lai_sutherland_lax(eps, n // 2 + 2, mu), n)
    rho = S @ S.conj().T
    digits = np.array([[(k // 3 ** (n - 1 - i)) % 3 for i in range(n)] for k in range(3 ** n)])
    holes = (digits == 1).sum(axis=1)
    direct = np.real(np.sum(holes * np.diag(rho)) / np.trace(rho)) / n
    assert filling_ratio(eps, n, mu) == pytest.approx(direct, abs=1e-9)


def test_filling_ratio_limits():
    assert filling_ratio(1.0, 3, 20.0) > 0.999
    assert filling_ratio(1.0, 3, -20.0) < 1e-6


def test_partition_sequence_consistency():
    m = ChainModel("xxz", n=12, eps=0.8, delta=1.3)
    tl = xxz_two_leg(m)
    seq = partition_sequence(tl, 12)
    for n in (3, 7, 12):
        assert seq[n] == pytest.approx(partition_function(tl, n, log=True), rel=1e-12)
    assert np.allclose(log_partition_ratios(tl, 12), np.diff(seq))


def test_large_chain_profiles_are_finite():
    for delta in (0.5, 1.5):
        m = ChainModel("xxz", n=160, eps=1.0, delta=delta)
        prof = magnetization_profile(xxz_two_leg(m), 160)
        assert np.all(np.isfinite(prof)) and np.all(np.abs(prof) <= 1 + 1e-9)
        assert prof[0] == pytest.approx(-prof[-1], abs=1e-9)


def test_profile_trends():
    # easy-plane regime: the bulk flattens as n grows
    spans = []
    for n in (10, 20, 40):
        prof = magnetization_profile(xxz_two_leg(ChainModel("xxz", n=n, eps=1.0, delta=0.5)), n)
        q = n // 4
        spans.append(prof[q] - prof[n - 1 - q])
    assert spans[0] > spans[1] > spans[2] and spans[2] < 1e-2
    # easy-axis regime: a kink between saturated domains sharpens
    spans = []
    for n in (10, 20, 40):
        prof = magnetization_profile(xxz_two_leg(ChainModel("xxz", n=n, eps=1.0, delta=1.5)), n)
        q = n // 4
        spans.append(prof[q] - prof[n - 1 - q])
    assert spans[0] < spans[1] <= spans[2] + 1e-9 and spans[2] > 1.99
    assert np.allclose(rescaled_coordinate(5), [0, 0.25, 0.5, 0.75, 1])


def test_schmidt_rank_grows_superlinearly():
    ranks = []
    for n in range(4, 9):
        m = ChainModel("xxz", n=n, eps=1.0, delta=0.7)
        ranks.append(schmidt_rank(assemble_ness(build_lax(m), n).rho, n // 2))
    assert ranks == sorted(ranks)
    assert ranks[-1] / ranks[0] > 8 / 4
    even = ranks[::2]
    assert np.all(np.diff(np.diff(even)) > 0)
    # at a root of unity the truncated ladder bounds the rank
    m = ChainModel("xxz", n=8, eps=1.0, gamma_frac=(1, 3))
    assert schmidt_rank(assemble_ness(build_lax(m), 8).rho, 4) <= 9


def test_subdiffusive_slope():
    assert subdiffusive_slope(2.0) == pytest.approx(2.0, abs=0.2)


@pytest.mark.parametrize("eps", [0.5, 1.0, 2.0])
def test_isotropic_profile_relation(eps):
    p, D = 4j / eps, 14
    tl = two_leg(xxz_lax(p, 0.0, D)).restrict(kappa_indices(D))
    assert isotropic_profile_residual(tl, p, rows=D - 4) < 1e-12


def test_anisotropic_cubic_relation_not_closed():
    # no relation of the cubic form holds on the diagonal sublattice at
    # generic anisotropy, whatever the coefficients
    m = ChainModel("xxz", n=6, eps=1.0, delta=0.5)
    _, resid = fit_cubic_relation(xxz_two_leg(m, D=14), rows=10)
    assert resid > 1e-3
