import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from drivenchain.auxiliary import (q_number, verma_q, verma_classical, casimir_q, gl_n, tilde_spin, build_rep,
                                   EXACT, CAPPED)

complexes = st.builds(complex, st.floats(-1, 1), st.floats(-1, 1))


def comm(a, b):
    return a @ b - b @ a


def test_q_number_limits():
    assert q_number(3.0, 0) == 3.0
    assert abs(q_number(2.5, 1e-7) - 2.5) < 1e-10
    eta = 0.7
    assert np.isclose(q_number(2.0, 1j * eta), np.sinh(2 * eta) / np.sinh(eta))
    assert np.isclose(q_number(3, np.pi / 3), 0)


@settings(max_examples=25, deadline=None)
@given(p=complexes, gamma=st.floats(0.2, 2.9))
def test_verma_q_relations(p, gamma):
    D = 8
    rep = verma_q(p, gamma, D)
    z = np.diag(rep["z"])
    lhs = comm(rep["+"], rep["-"])
    rhs = np.diag(q_number(2 * z, gamma))
    # the top state of the truncation is excluded
    assert np.allclose(lhs[:-1, :-1], rhs[:-1, :-1], atol=1e-9 * max(1, np.abs(rhs).max()))
    C = casimir_q(rep)
    diag = np.diag(C)
    assert np.allclose(C, np.diag(diag), atol=1e-9 * max(1, np.abs(C).max()))
    assert np.allclose(diag, diag[0], rtol=1e-8, atol=1e-8)


def test_exact_truncation_flag():
    assert verma_q(0.3 + 0.2j, np.pi / 3, 3).exactness == EXACT
    assert verma_q(0.3 + 0.2j, np.pi / 3, 4).exactness == CAPPED
    assert verma_q(0.3, 0.9, 3).exactness == CAPPED
    assert np.isclose(verma_q(0.3, np.pi / 3, 4)["-"][2, 3], 0)
    with pytest.raises(ValueError):
        build_rep("verma-q", 4, p=0.3, gamma=np.pi / 3, exact=True)


def test_classical_verma_sl2():
    rep = verma_classical(0.4 + 1.1j, 8)
    A0, Ap, Am = rep["0"], rep["+"], rep["-"]
    k = slice(0, 7)
    assert np.allclose(comm(A0, Ap), Ap)
    assert np.allclose(comm(A0, Am), -Am)
    assert np.allclose(comm(Ap, Am)[k, k], (-2 * A0)[k, k])


@pytest.mark.parametrize("N", [2, 3, 4])
def test_gl_n_relations(N):
    rep = gl_n(N, 0.3 + 0.4j, -0.7j, 4)
    deg = rep.extra["degree"]
    low = deg <= 2
    G = rep.generators
    for a in range(N):
        for b in range(N):
            for c in range(N):
                for d in range(N):
                    lhs = comm(G[(a, b)], G[(c, d)])
                    rhs = (b == c) * G[(a, d)] - (a == d) * G[(c, b)]
                    assert np.allclose((lhs - rhs)[np.ix_(low, low)], 0)


def test_tilde_spin_layout():
    rep = tilde_spin(1, 3, np.pi / 2)
    assert rep.D == 4 and rep.exactness == EXACT
    assert tilde_spin(1, 3, np.pi / 2, cap=1).exactness == CAPPED
    assert rep["0"][0, 0] == rep["0"][1, 1] == 1


def test_build_rep_dispatch():
    assert build_rep("verma-classical", 5, p=1j).kind == "verma-classical"
    assert build_rep("gl-n", 2, N=3, r0=1j, r1=-3j).kind == "gl-n"
    assert build_rep("tilde-spin", 4, l=1, m=3, phi=1.4).D == 4
    with pytest.raises(ValueError):
        build_rep("unknown", 4)
    with pytest.raises(ValueError):
        build_rep("verma-q", 1, p=1.0)
