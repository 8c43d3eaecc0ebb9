import math

import numpy as np
import pytest

from qspectra.errors import BadParameter, OutOfAnnulus
from qspectra.model import (ModelParams, ReferenceSpectra, TailFunctionalInput, epsilon_lambda,
                            geometric_epsilon_closed_form, geometric_eta, h1_reconstruction_check,
                            m_lambda_membership, reference_membership, right_kernel_element,
                            right_spectrum_solver, spike_eta, verify_model, witness_h1_annulus)

from conftest import X, Y

P = ModelParams(0.5)


def test_params_validation():
    with pytest.raises(BadParameter):
        ModelParams(1.0)
    with pytest.raises(BadParameter):
        ModelParams(0.5, p=0.5)


@pytest.mark.parametrize("gamma,want", [
    (X(1.5), "spectral"), (Y(1.0), "spectral"), (Y(0.5), "resolvent"), (X(0.0), "resolvent"),
    (X(2.5), "resolvent"), (X(1.0), "essential"), (X(-2.0), "essential"), (X(0.5j), "unknown-band"),
    (Y(0.0), "resolvent"),
])
def test_reference_membership(gamma, want):
    assert reference_membership(P, gamma) == want


def test_reference_sets():
    ref = ReferenceSpectra(P)
    assert ref.sigma_T.contains(0.9j) and not ref.sigma_T.contains(1.1)
    assert ref.sigma_S.contains(0.125) and not ref.sigma_S.contains(0.3)
    assert ref.in_sigma_l_inner(1.5) and not ref.in_sigma_l_inner(0.5)
    assert ref.sigma_e_x.contains(2j) and ref.sigma_e_y.points() == []


def test_witness_norm_closed_form():
    w = witness_h1_annulus(ModelParams(0.5, N=400), 2.0)
    assert w.zeta_norm_closed == pytest.approx(3 ** -0.5, abs=1e-15)
    assert abs(w.zeta_norm - w.zeta_norm_closed) <= 1e-10


def test_witness_telescoping_and_corner():
    w = witness_h1_annulus(P, 1.5)
    assert w.residual <= 1e-10
    assert w.corner == pytest.approx(1.5 ** -(P.N + 1), rel=1e-12)


def test_witness_divergence_certificate():
    w = witness_h1_annulus(P, 2.0)
    assert np.allclose(w.alpha_abs, 0.5, rtol=1e-12)
    assert w.diverges and w.liminf_lower == 0.5


def test_witness_out_of_annulus():
    for lam in (0.9, 1.0, 2.1):
        with pytest.raises(OutOfAnnulus):
            witness_h1_annulus(P, lam)


def test_epsilon_zero_vector():
    e = epsilon_lambda(TailFunctionalInput(np.zeros(5), 0.4, 0.5), 10)
    assert e.value == 0 and e.tail_bound == 0


def test_epsilon_geometric_closed_form():
    got = epsilon_lambda(geometric_eta(0.3, 0.4, 0.5), 300)
    assert abs(got.value - geometric_epsilon_closed_form(0.3, 0.4, 0.5)) <= 1e-10


def test_epsilon_single_spike():
    lam, q = 0.4, 0.5
    e = epsilon_lambda(spike_eta(5, lam, q, orthogonal=False), 50)
    want = sum(abs(q * lam) ** (2 * j) for j in range(5))
    assert e.value == pytest.approx(want, rel=1e-14)


def test_epsilon_tail_bound_dominates_remainder():
    inp = TailFunctionalInput(1 / (np.arange(400) + 1.0), 0.6, 0.5)
    full = epsilon_lambda(inp, 400).value
    part = epsilon_lambda(inp, 50)
    assert 0 <= full - part.value <= part.tail_bound


def test_membership_geometric_member():
    v = m_lambda_membership(geometric_eta(0.3, 0.4, 0.5), 200)
    assert v.verdict == "member" and v.orthogonality_residual <= 1e-12


def test_membership_zeta_itself_not_orthogonal():
    lam, q = 0.4, 0.5
    zeta = np.conj(q * lam) ** np.arange(60)
    v = m_lambda_membership(TailFunctionalInput(zeta, lam, q), 30)
    assert v.verdict == "non-member" and v.orthogonality_residual > 0.5


def test_membership_harmonic_tail():
    lam, q, m = 0.4, 0.5, 5000
    beta = 1 / (np.arange(m) + 1.0)
    beta[0] = 0
    beta[0] = -np.sum(beta * (q * lam) ** np.arange(m))
    v = m_lambda_membership(TailFunctionalInput(beta, lam, q), m)
    assert v.verdict == "member"


def test_membership_rejects_outside_disk():
    with pytest.raises(BadParameter):
        m_lambda_membership(geometric_eta(0.3, 1.2, 0.5), 10)


def test_reconstruction_zero_and_geometric():
    assert h1_reconstruction_check(0.4, 0.5, np.zeros(10), 10) == 0
    assert h1_reconstruction_check(0.4, 0.5, geometric_eta(0.3, 0.4, 0.5), 200) <= 1e-10


def test_reconstruction_spike():
    assert h1_reconstruction_check(0.4, 0.5, spike_eta(3, 0.4, 0.5), 20) <= 1e-12


def test_reconstruction_matches_direct_formula_for_small_n():
    lam, q = 0.7, 0.5
    inp = spike_eta(4, lam, q)
    c = inp.tail_coefficients()
    for n in range(4):
        direct = lam ** -(n + 1) * sum(inp.beta[k] * (q * lam) ** k for k in range(n + 1))
        assert -(q ** (n + 1)) * c[n] == pytest.approx(direct, abs=1e-12)


def test_right_solver_homogeneous_k1():
    zeta, eta = right_kernel_element(P, 1, np.zeros(5), alpha_k=1.0)
    sol = right_spectrum_solver(P, 0.5, zeta, eta)
    want = np.zeros(5)
    want[0] = 1
    assert np.array_equal(sol.theta, want) and sol.residual == 0 and sol.kernel_residual == 0


def test_right_solver_k2_random():
    rng = np.random.default_rng(7)
    beta = rng.normal(size=12) + 1j * rng.normal(size=12)
    zeta, eta = right_kernel_element(P, 2, beta, alpha_k=0.3 - 0.1j)
    sol = right_spectrum_solver(P, 0.25, zeta, eta)
    assert sol.residual <= 1e-12 and sol.kernel_residual <= 1e-12 and sol.bound_holds


def test_right_solver_rejects_non_power():
    with pytest.raises(BadParameter):
        right_spectrum_solver(P, 0.3, np.zeros(3), np.zeros(2))
    with pytest.raises(BadParameter):
        right_spectrum_solver(P, 1.0, np.zeros(3), np.zeros(2))


def test_verify_model_report_closed_form_part():
    rep = verify_model(0.5, 100, numerics=False)
    assert rep["pass"] and rep["schema"] == 1
    assert all(c["pass"] for c in rep["claims"])
