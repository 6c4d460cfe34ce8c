import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from drivenchain import pseudolocal as pl

# Quadrature values of the measure constant c in f = c/|sin phi|^4 on the strip
# (tensor Gauss-Legendre, 32 x 128 nodes).
MEASURE_CONSTANTS = {(1, 2): 1.273239544735156, (1, 3): 1.4323944878270503, (1, 5): 1.0997336093772616,
                     (2, 5): 2.879139967920271, (1, 7): 0.8389284282920291, (3, 7): 4.235680288221821}
# Hilbert-Schmidt norms of the r-point densities, r = 2..6, at (1, 3) and phi = pi/2 + 0.1,
# from the bulk transfer block; cross-checked against dense densities below.
DENSITY_HS = [0.25, 0.06438757120421781, 0.05245068942894554, 0.03198413804311957, 0.020521013096884092]


def test_strip():
    assert pl.strip_halfwidth(3) == pytest.approx(np.pi / 6)
    assert pl.in_strip(np.pi / 2 + 0.1 + 3j, 3)
    assert not pl.in_strip(np.pi / 2 + 0.6, 3)
    with pytest.raises(ValueError):
        pl.build_z(1, 3, 0.2, 3)


@pytest.mark.parametrize("l,m", [(1, 2), (1, 3), (2, 5)])
def test_almost_conservation(l, m):
    phi = np.pi / 2 + 0.3 * pl.strip_halfwidth(m) + 0.2j
    for n in (3, 5):
        assert pl.almost_commutation_residual(l, m, phi, n) < 1e-12


@settings(max_examples=10, deadline=None)
@given(a=st.floats(-0.8, 0.8), b=st.floats(-0.8, 0.8), ya=st.floats(-0.5, 0.5), yb=st.floats(-0.5, 0.5),
       n=st.integers(2, 6))
def test_transfer_overlap_matches_brute(a, b, ya, yb, n):
    l, m = 1, 3
    hw = pl.strip_halfwidth(m)
    phi, phip = np.pi / 2 + a * hw + 1j * ya, np.pi / 2 + b * hw + 1j * yb
    kb = pl.k_brute(l, m, phi, phip, n)
    kt = pl.k_transfer(l, m, phi, phip, n)
    assert abs(kb - kt) <= 1e-11 * max(1, abs(kb))


def test_overlap_rate_and_center():
    l, m = 1, 3
    phi = phip = np.pi / 2 + 0.1 + 0.05j
    r = pl.overlap_transfer(l, m, phi, phip, 8)
    assert r.tau1 < 1
    assert abs(r.k_brute - r.k_transfer) < 1e-10 * abs(r.k_transfer)
    K = pl.k_sequence(l, m, phi, phip, 300)
    slope = K[300] - K[299]
    assert abs(slope - r.k_closed) < 1e-12 * abs(r.k_closed)
    assert pl.k_closed(l, m, np.pi / 2, np.pi / 2 + 1e-7) == pytest.approx(pl.k_center(l, m), rel=1e-6)
    assert pl.k_center(1, 3) == pytest.approx(4 / 9)


@pytest.mark.parametrize("lm", list(MEASURE_CONSTANTS))
def test_drude_weights(lm):
    l, m = lm
    assert pl.dz_numeric(l, m) == pytest.approx(pl.dz_closed(l, m), abs=1e-10)
    dk, c, spread = pl.dk_quadrature(l, m)
    assert dk == pytest.approx(pl.dk_closed(l, m), abs=1e-10)
    assert c.real == pytest.approx(MEASURE_CONSTANTS[lm], rel=1e-9)
    # constancy of c across off-centre probes, limited by the quadrature
    assert spread < 1e-5
    assert pl.dk_closed(l, m) >= pl.dz_closed(l, m)


def test_drude_closed_forms():
    assert pl.dz_closed(1, 2) == pytest.approx(1.0)
    assert pl.dz_closed(1, 3) == pytest.approx(9 / 16)
    assert pl.dk_closed(1, 3) == pytest.approx(0.5865033284336559)
    with pytest.raises(ValueError):
        pl.drude_bounds(2, 4)


def test_fredholm_diagnostic():
    assert pl.dk_fredholm(1, 3) == pytest.approx(pl.dk_closed(1, 3), abs=1e-5)
    # restricting the measure to the real segment does not reproduce the bound
    assert abs(pl.dk_real_interval(1, 3) - pl.dk_closed(1, 3)) > 0.01


@pytest.mark.parametrize("n", range(2, 9))
def test_current_overlap(n):
    phi = np.pi / 2 + 0.05 + 0.1j
    jz, jzd = pl.current_overlaps(1, 3, phi, n)
    assert jz == pytest.approx(1j * (n - 1), abs=1e-12)
    assert jzd == pytest.approx(-1j * (n - 1), abs=1e-12)


@pytest.mark.parametrize("n", [3, 5, 8])
def test_mazur_summand_dual(n):
    b = pl.mazur_summand_brute(1, 3, n)
    t = pl.mazur_summand_transfer(1, 3, n)
    assert b == pytest.approx(t, rel=1e-10)


def test_mazur_limit():
    n = 4000
    assert pl.mazur_summand_transfer(1, 3, n) == pytest.approx(4 * pl.dz_closed(1, 3), rel=2e-3)


def test_density_norms():
    phi = np.pi / 2 + 0.1
    rows = pl.density_norms(1, 3, phi, dmax=6, opnorm_max=6)
    assert np.allclose([r[1] for r in rows], DENSITY_HS, rtol=1e-12)
    for r, hs, _ in rows:
        q = pl.density(1, 3, phi, r)
        assert pl.hs_inner(q, q).real == pytest.approx(hs, rel=1e-10)
    long = pl.density_norms(1, 3, phi, dmax=30, opnorm_max=2)
    hs = np.array([r[1] for r in long])
    assert np.all(np.diff(hs[4:]) < 0) and hs[-1] < 1e-4
    with pytest.raises(ValueError):
        pl.density(1, 3, phi, 1)


def test_charge_from_coupling_derivative():
    for n in (3, 5, 6):
        c, res = pl.qz_normalization(1, 3, n)
        assert c == pytest.approx(1j, abs=1e-8)
        assert res < 1e-8


def test_spin_flip_maps_charge_to_adjoint():
    n = 4
    Z = pl.build_z(1, 3, np.pi / 2, n).matrix
    F = pl.spin_flip(n)
    assert np.allclose(F @ F, np.eye(2 ** n))
    assert np.allclose(F @ Z @ F, Z.T) or np.allclose(F @ Z @ F, Z.conj().T)
