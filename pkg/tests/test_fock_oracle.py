import math

import numpy as np
import pytest
import sympy as sp

from conftest import random_density
from lossent.fock_oracle import (
    BipartiteDensity,
    LossChannel,
    annihilation,
    apply_kraus_sum,
    apply_loss,
    check_density,
    check_dual_normal_order,
    check_twinbeam_decomposition,
    ebit_mixture_residual,
    kraus_completeness_residual,
    kraus_operator,
    number_operator,
    oracle_suite,
)
from lossent.states import TruncationError, TwinBeam, ebit_vector, twin_beam_vector

ETAS = [0.1, 0.25, 0.5, 0.75, 0.9]


def test_loss_channel_range():
    LossChannel(0.0), LossChannel(1.0)
    for bad in (-0.01, 1.01):
        with pytest.raises(ValueError):
            LossChannel(bad)


def test_kraus_binomial_form_matches_operator_product():
    # V_n = (1/eta - 1)^(n/2) / sqrt(n!) a^n eta^(a^dag a / 2), expanded symbolically
    eta = sp.symbols("eta", positive=True)
    dim = 5
    a = sp.zeros(dim, dim)
    for k in range(1, dim):
        a[k - 1, k] = sp.sqrt(k)
    damp = sp.diag(*[eta ** sp.Rational(k, 2) for k in range(dim)])
    for n in range(5):
        literal = (1 / eta - 1) ** sp.Rational(n, 2) / sp.sqrt(sp.factorial(n)) * a ** n * damp
        for k in range(dim):
            for m in range(dim):
                if m == k - n and k >= n:
                    binom = sp.sqrt(sp.binomial(k, n)) * (1 - eta) ** sp.Rational(n, 2) \
                        * eta ** sp.Rational(k - n, 2)
                    # compare on (0, 1), where both branches of the roots are real
                    for val in (sp.Rational(1, 7), sp.Rational(1, 2), sp.Rational(9, 10)):
                        diff = (literal[m, k] - binom).subs(eta, val)
                        assert abs(float(sp.N(diff, 30))) < 1e-25
                else:
                    assert sp.simplify(literal[m, k]) == 0
        for val in (0.13, 0.5, 0.9):
            num = np.array(literal.subs(eta, val).evalf(), dtype=float)
            np.testing.assert_allclose(kraus_operator(n, val, dim), num, atol=1e-14)


def test_kraus_examples():
    np.testing.assert_allclose(kraus_operator(0, 0.5, 3), np.diag([1, math.sqrt(0.5), 0.5]),
                               atol=1e-15)
    V1 = kraus_operator(1, 0.5, 2)
    np.testing.assert_allclose(V1 @ np.array([0.0, 1.0]), [math.sqrt(0.5), 0.0], atol=1e-15)
    np.testing.assert_array_equal(kraus_operator(0, 1.0, 4), np.eye(4))


def test_kraus_rejects_singular_total_loss():
    with pytest.raises(ValueError):
        kraus_operator(1, 0.0, 3)
    np.testing.assert_array_equal(kraus_operator(0, 0.0, 3), np.diag([1.0, 0.0, 0.0]))


@pytest.mark.parametrize("eta", ETAS + [0.0, 1.0])
@pytest.mark.parametrize("k", [0, 1, 4, 10])
def test_kraus_completeness(eta, k):
    assert kraus_completeness_residual(eta, k) <= 1e-12


def test_apply_loss_matches_literal_kraus_sum(rng):
    rho = random_density(rng, 16)
    bi = BipartiteDensity(rho, 4, 4)
    out = apply_loss(bi, 0.3, 0.8)
    np.testing.assert_allclose(out.matrix, apply_kraus_sum(bi, 0.3, 0.8), atol=1e-14)
    single = random_density(rng, 7)
    np.testing.assert_allclose(apply_loss(single, 0.6), apply_kraus_sum(single, 0.6), atol=1e-14)


@pytest.mark.parametrize("eta", [0.0, 0.2, 0.5, 1.0])
def test_apply_loss_trace_psd_energy(rng, eta):
    for _ in range(5):
        bi = BipartiteDensity(random_density(rng, 25), 5)
        out = apply_loss(bi, eta, eta)
        assert abs(out.trace() - bi.trace()) <= 1e-12
        assert out.min_eigenvalue() >= -1e-10
        assert np.max(np.abs(out.matrix - out.matrix.conj().T)) <= 1e-12
        for m in "ab":
            assert abs(out.mean_photons(m) - eta * bi.mean_photons(m)) <= 1e-10


def test_identity_channel_leaves_state(rng):
    bi = BipartiteDensity(random_density(rng, 9), 3)
    np.testing.assert_array_equal(apply_loss(bi, 1.0, 1.0).matrix, bi.matrix)


def test_total_loss_gives_vacuum(rng):
    single = random_density(rng, 6)
    vac = np.zeros((6, 6))
    vac[0, 0] = 1.0
    np.testing.assert_allclose(apply_loss(single, 0.0), vac, atol=1e-15)


def test_ebit_mixture_example_half():
    dim = 4
    psi = ebit_vector(dim)
    out = apply_loss(BipartiteDensity.from_vector(psi, dim), 0.5, 0.5)
    vac = np.eye(1, dim * dim, 0).ravel()
    expected = 0.5 * np.outer(psi, psi) + 0.5 * np.outer(vac, vac)
    np.testing.assert_allclose(out.matrix, expected, atol=1e-15)


@pytest.mark.parametrize("eta", np.linspace(0.1, 0.9, 9))
def test_ebit_mixture_exact_on_grid(eta):
    assert ebit_mixture_residual(eta, 4) <= 1e-12


def test_twin_beam_mean_photons_halve():
    dim = 20
    tb = BipartiteDensity.from_vector(twin_beam_vector(TwinBeam(0.5), dim), dim)
    out = apply_loss(tb, 0.5, 0.5)
    before = tb.mean_photons("a")
    # lam^2 / (1 - lam^2) = 1/3, less the ~dim * lam^(2 dim) cut off by truncation
    assert before == pytest.approx(1 / 3, abs=1e-10)
    for m in "ab":
        assert out.mean_photons(m) == pytest.approx(before / 2, abs=1e-12)


@pytest.mark.parametrize("eta1,eta2", [(0.3, 0.7), (0.5, 0.5), (0.9, 0.1)])
def test_channel_composition(rng, eta1, eta2):
    bi = BipartiteDensity(random_density(rng, 16), 4)
    twice = apply_loss(apply_loss(bi, eta1, eta1), eta2, eta2)
    once = apply_loss(bi, eta1 * eta2, eta1 * eta2)
    np.testing.assert_allclose(twice.matrix, once.matrix, atol=1e-10)


def test_apply_loss_rejects_invalid_input():
    with pytest.raises(ValueError, match="Hermitian"):
        BipartiteDensity(np.array([[0.5, 0.1], [0.0, 0.5]]), 2, 1)
    with pytest.raises(ValueError, match="positive"):
        apply_loss(np.array([[1.2, 0.0], [0.0, -0.2]]), 0.5)
    with pytest.raises(ValueError, match="trace"):
        check_density(np.eye(2))


def test_dual_normal_order_examples(rng):
    rho = random_density(rng, 10)
    assert check_dual_normal_order(1, 1, rho, 0.5) <= 1e-10
    assert check_dual_normal_order(0, 0, rho, 0.5) <= 1e-15
    thermal = np.diag(0.4 ** np.arange(10))
    thermal /= thermal.sum()
    assert check_dual_normal_order(2, 2, thermal, 0.3) <= 1e-10
    for p in range(4):
        for q in range(4):
            assert check_dual_normal_order(p, q, rho, 0.7) <= 1e-10
    with pytest.raises(ValueError):
        check_dual_normal_order(5, 5, rho, 0.5)


def test_dual_map_identity_directly(rng):
    # Tr[L*(O) rho] = Tr[O L(rho)] with L*(O) = sum V_n^dag O V_n
    dim, eta = 8, 0.45
    rho = random_density(rng, dim)
    a = annihilation(dim)
    O = a.T @ a.T @ a + number_operator(dim)
    ops = [kraus_operator(n, eta, dim) for n in range(dim)]
    dual = sum(V.T @ O @ V for V in ops)
    assert abs(np.trace(dual @ rho) - np.trace(O @ apply_loss(rho, eta))) <= 1e-12


@pytest.mark.parametrize("lam,eta,dim", [(0.5, 0.5, 30), (0.75, 0.25, 49), (0.2, 0.9, 30)])
def test_twinbeam_decomposition(lam, eta, dim):
    d = check_twinbeam_decomposition(lam, eta, dim)
    q = (1 - lam ** 2) / (1 - eta * lam ** 2)
    assert d.q_measured == pytest.approx(q, abs=1e-10)
    assert d.overlap >= 1 - 1e-10
    assert d.sigma_min_eig >= -1e-10
    assert d.sigma_trace == pytest.approx(1 - q, abs=1e-8)


def test_twinbeam_decomposition_example_value():
    d = check_twinbeam_decomposition(0.5, 0.5, 30)
    assert d.q_measured == pytest.approx(6 / 7, abs=1e-12)


def test_twinbeam_vacuum_passes_untouched():
    d = check_twinbeam_decomposition(0.0, 0.3, 4)
    assert d.q_measured == 1.0
    assert abs(d.sigma_trace) <= 1e-15


def test_twinbeam_decomposition_rejects_short_cutoff():
    with pytest.raises(TruncationError) as info:
        check_twinbeam_decomposition(0.75, 0.25, 40)
    assert info.value.required_dim == 49


def test_per_arm_loss_convention():
    # with transmissivity t on each arm the surviving beam is chi(t lam),
    # so the end-to-end eta of the decomposition is t^2
    lam, t, dim = 0.5, 0.8, 30
    chi = twin_beam_vector(TwinBeam(lam), dim)
    v0 = np.diag(t ** (np.arange(dim) / 2))
    kept = np.kron(v0, v0) @ chi
    q = (1 - lam ** 2) / (1 - t ** 2 * lam ** 2)
    np.testing.assert_allclose(kept, math.sqrt(q) * twin_beam_vector(TwinBeam(t * lam), dim),
                               atol=1e-15)


def test_oracle_suite_all_pass():
    rows = oracle_suite(12, eta=0.5, lambda_mag=0.2)
    assert rows and all(ok for _, _, ok in rows)
    rows = oracle_suite(12, eta=1.0, lambda_mag=0.2)
    assert all(res == 0.0 or res < 1e-15 for name, res, _ in rows if name != "kraus_completeness")


def test_oracle_suite_budget():
    with pytest.raises(TruncationError):
        oracle_suite(1)
    with pytest.raises(ValueError):
        oracle_suite(51)
