import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from drivenchain import exterior as ex

xs = st.builds(complex, st.floats(0.05, 2.0), st.floats(0.1, 1.5))


def test_generator_small_blocks():
    x = 0.7 + 0.3j
    assert np.allclose(ex.generator_block(0, x), 0)
    H1 = ex.generator_block(1, x)
    # the alpha = 1 block has a simple pole at x = 0 only
    assert np.allclose(H1 * x, ex.generator_block(1, 2 * x) * 2 * x)


def test_pole_guard():
    with pytest.raises(ex.PoleError) as err:
        ex.generator_block(4, 1.5 + 1e-10)
    assert err.value.m == 3
    ex.generator_block(2, 1.5)  # m = 3 is beyond the alpha = 2 block


@settings(max_examples=20, deadline=None)
@given(x=xs, alpha=st.integers(1, 8))
def test_kernel_and_jordan(x, alpha):
    hv, hu, hhu = ex.kernel_residuals(alpha, x)
    scale = max(1.0, np.linalg.norm(ex.generator_block(alpha, x)))
    assert hv < 1e-10 * scale and hu < 1e-10 * scale and hhu < 1e-10 * scale ** 2
    assert ex.jordan_residual(alpha, x) < 1e-10


def test_jordan_scale_is_one_half():
    x = 0.4 + 0.6j
    assert ex.jordan_residual(4, x, scale=0.5) < 1e-12
    assert ex.jordan_residual(4, x, scale=1.0) > 0.1


def test_nilpotent_series_matches_expm():
    import scipy.linalg as la
    H = ex.generator_block(5, 0.3 + 0.8j)
    assert np.allclose(ex.nilpotent_expm(0.7 * H), la.expm(0.7 * H))


moderate = st.builds(complex, st.floats(-0.6, 0.6), st.floats(0.4, 1.2))


@settings(max_examples=10, deadline=None)
@given(p=moderate, pp=moderate)
def test_rll_unitarity_ice(p, pp):
    assert ex.rll_residual(p, pp, 6) < 1e-9
    assert ex.unitarity_residual(p, pp, 6) < 1e-9
    assert ex.ice_rule_residual(p, pp, 6) < 1e-12
    assert ex.eigenvalue_spread(p, pp, 6) < 1e-9


def test_braided_ybe():
    assert ex.braided_ybe_residual(0.3 + 0.9j, -0.2 + 0.4j, 0.5 + 0.2j, alpha_max=4) < 1e-10


def test_transposition_symmetry():
    p, pp = 0.35 + 0.8j, -0.2 + 0.45j
    assert ex.transposition_residual(p, pp, 5) < 1e-10
    assert ex.lax_transposition_residual(p) < 1e-10
    # the unprimed/primed assignment matters
    D = 6
    R = ex.exterior_R(p, pp, 5).dense(D)
    Up, Upp = ex.transposition_matrix(p, D), ex.transposition_matrix(pp, D)
    other = np.kron(Up, Upp) @ R @ np.kron(np.linalg.inv(Up), np.linalg.inv(Upp))
    P = ex.swap_matrix(D)
    mask = ex._mask(D, 5)
    assert np.linalg.norm((other - P @ R.T @ P)[np.ix_(mask, mask)]) > 1e-3


def test_master_symmetries_and_hll():
    r1, r2 = ex.master_symmetry_residuals(0.45 + 0.7j, 5)
    assert r1 < 1e-10 and r2 < 1e-10
    assert ex.hll_residual(0.45 + 0.7j, 5) < 1e-10


def test_block_layout():
    assert list(ex.block_indices(2, 4)) == [2, 5, 8]
    blocks = ex.exterior_R(0.2 + 1j, 0.1 + 0.3j, 3)
    assert len(blocks.R) == 4 and blocks.x == pytest.approx(0.15 + 0.65j)
    with pytest.raises(ValueError):
        ex.exterior_R(0.2, 0.1, 0)
