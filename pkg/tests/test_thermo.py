import math

import numpy as np
import pytest

from qscramble.linalg import kron, partial_trace
from qscramble.models import IsingParams, build_dicke, build_ising
from qscramble.thermo import (default_initial_states, entropy_production_gksl,
                              entropy_production_unitary, gibbs_state,
                              ground_state_density, rel_entropy,
                              validate_density_matrix, vn_entropy)


class TestVnEntropy:
    def test_pure_state(self):
        rho = np.diag([1.0, 0.0, 0.0]).astype(complex)
        assert abs(vn_entropy(rho)) < 1e-12

    def test_maximally_mixed(self):
        for d in (2, 5):
            assert abs(vn_entropy(np.eye(d) / d) - math.log(d)) < 1e-12

    def test_two_level_example(self):
        rho = np.diag([0.75, 0.25])
        expected = 0.75 * math.log(4 / 3) + 0.25 * math.log(4)
        assert abs(vn_entropy(rho) - expected) < 1e-12

    def test_rejects_invalid_states(self):
        with pytest.raises(ValueError):
            vn_entropy(np.diag([0.9, 0.3]))  # trace != 1
        with pytest.raises(ValueError):
            vn_entropy(np.diag([1.5, -0.5]))  # negative eigenvalue


class TestRelEntropy:
    def test_identical_states(self):
        rng = np.random.default_rng(0)
        m = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        rho = m @ m.conj().T
        rho /= np.trace(rho).real
        assert abs(rel_entropy(rho, rho)) < 1e-10

    def test_pure_vs_maximally_mixed(self):
        assert abs(rel_entropy(np.diag([1.0, 0.0]), np.eye(2) / 2)
                   - math.log(2)) < 1e-12

    def test_support_violation_is_infinite(self):
        assert rel_entropy(np.eye(2) / 2, np.diag([1.0, 0.0])) == math.inf

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            rel_entropy(np.eye(2) / 2, np.eye(3) / 3)

    def test_nonnegativity(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
            b = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
            rho = a @ a.conj().T
            rho /= np.trace(rho).real
            sig = b @ b.conj().T
            sig /= np.trace(sig).real
            assert rel_entropy(rho, sig) > -1e-10


class TestGibbsState:
    def test_infinite_temperature_limit(self):
        model = build_dicke(2.0, 2.0, 1.0)
        rho = gibbs_state(model.hamiltonian, 1e6)
        assert np.max(np.abs(rho - np.eye(9) / 9)) < 1e-5

    def test_qubit_closed_form(self):
        sz = np.diag([1.0, -1.0]).astype(complex)
        rho = gibbs_state(sz, 1.0)
        z = math.exp(-1.0) + math.exp(1.0)
        assert np.allclose(rho, np.diag([math.exp(-1.0), math.exp(1.0)]) / z,
                           atol=1e-12)

    def test_commutes_with_hamiltonian(self):
        model = build_dicke(2.0, 2.0, 1.5)
        rho = gibbs_state(model.hamiltonian, 2.0)
        h = model.hamiltonian
        assert np.max(np.abs(rho @ h - h @ rho)) < 1e-12

    def test_rejects_nonpositive_temperature(self):
        with pytest.raises(ValueError):
            gibbs_state(np.eye(2), 0.0)


class TestDefaultInitialStates:
    def test_dicke_ground_is_lowest_jz(self):
        model = build_dicke(2.0, 2.0, 1.5)
        rho_s, rho_e = default_initial_states(model)
        # lowest Jz eigenstate is the last basis vector of the m-ordered basis
        expected = np.zeros((3, 3))
        expected[2, 2] = 1.0
        assert np.allclose(rho_s, expected, atol=1e-12)
        assert np.allclose(rho_e, np.eye(3) / 3)

    def test_ising_ground_is_spin_down(self):
        model = build_ising(IsingParams(n_sites=4, field=0.5, theta=math.pi / 2,
                                        coupling=0.5, split=1), gamma=0.0)
        rho_s, _ = default_initial_states(model)
        assert np.allclose(rho_s, np.diag([0.0, 1.0]), atol=1e-12)


def ising_thermo(theta, times, n_sites=4, split=1, field=0.5, coupling=0.5,
                 bond_scale=1.0):
    model = build_ising(IsingParams(n_sites=n_sites, field=field, theta=theta,
                                    coupling=coupling, split=split,
                                    boundary_bond_scale=bond_scale), gamma=0.0)
    rho_s0, rho_e0 = default_initial_states(model)
    series = entropy_production_unitary(model.hamiltonian, model.space.dims,
                                        rho_s0, rho_e0, times)
    return model, rho_s0, rho_e0, series


class TestEntropyProductionUnitary:
    def test_time_zero_vanishes(self):
        times = np.array([0.0, 1.0])
        _, _, _, series = ising_thermo(7 * math.pi / 16, times)
        assert abs(series.sigma[0]) < 1e-10
        assert abs(series.s_corr[0]) < 1e-10

    def test_longitudinal_field_is_stationary(self):
        times = np.linspace(0.0, 20.0, 21)
        _, _, _, series = ising_thermo(0.0, times)
        assert np.max(np.abs(series.sigma)) < 1e-10
        assert np.max(np.abs(series.s_corr)) < 1e-10

    def test_transverse_field_sum_vanishes(self):
        times = np.linspace(0.0, 20.0, 21)
        _, _, _, series = ising_thermo(math.pi / 2, times)
        assert np.max(np.abs(series.total)) < 1e-8
        assert series.sigma.max() > 0.1  # individually nonzero

    def test_tilted_field_sum_positive(self):
        times = np.linspace(0.5, 20.0, 20)
        _, _, _, series = ising_thermo(7 * math.pi / 16, times)
        assert series.total.max() > 0.05
        assert np.all(series.total > -1e-9)

    @pytest.mark.parametrize("theta", [0.0, 7 * math.pi / 16, math.pi / 2])
    def test_sum_equals_environment_relative_entropy(self, theta):
        times = np.linspace(0.0, 12.0, 13)
        model, rho_s0, rho_e0, series = ising_thermo(theta, times)
        w, v = np.linalg.eigh(model.hamiltonian)
        rho0 = kron(rho_s0, rho_e0)
        for i, t in enumerate(times):
            u = (v * np.exp(-1j * w * t)) @ v.conj().T
            rho_se = u @ rho0 @ u.conj().T
            rho_e = partial_trace(rho_se, model.space.dims, keep=(1,))
            rho_e = (rho_e + rho_e.conj().T) / 2
            oracle = rel_entropy(rho_e, rho_e0)
            assert abs(series.total[i] - oracle) < 1e-9

    def test_nonnegativity_invariants(self):
        times = np.linspace(0.0, 15.0, 16)
        for theta in (0.3, 1.0, 7 * math.pi / 16):
            _, _, _, series = ising_thermo(theta, times)
            assert np.all(series.sigma > -1e-9)
            assert np.all(series.total > -1e-9)

    def test_weak_coupling_keeps_sum_zero_and_small_sigma(self):
        times = np.linspace(0.0, 20.0, 11)
        _, _, _, series = ising_thermo(math.pi / 2, times, n_sites=7, split=1,
                                       bond_scale=1e-3)
        assert np.max(np.abs(series.total)) < 1e-8
        assert series.sigma.max() < 1e-3  # weak coupling keeps production tiny
        assert series.sigma.max() > 0.0

    def test_dimension_validation(self):
        with pytest.raises(ValueError):
            entropy_production_unitary(np.eye(4, dtype=complex), (2, 3),
                                       np.eye(2) / 2, np.eye(3) / 3,
                                       np.array([0.0]))


class TestEntropyProductionGksl:
    def test_time_zero_vanishes(self):
        model = build_dicke(2.0, 2.0, 1.5, gamma=0.05, kappa=0.05,
                            temp_a=2.0, temp_b=2.0)
        rho_s, rho_e = default_initial_states(model)
        sigma = entropy_production_gksl(model, kron(rho_s, rho_e),
                                        np.array([0.0, 1.0]), temperature=2.0)
        assert abs(sigma[0]) < 1e-12

    def test_gibbs_initial_state_is_stationary(self):
        # exact at zero coupling, where the thermal dissipators satisfy
        # detailed balance with respect to the full Hamiltonian
        model = build_dicke(2.0, 2.0, 0.0, gamma=0.05, kappa=0.05,
                            temp_a=2.0, temp_b=2.0)
        rho_eq = gibbs_state(model.hamiltonian, 2.0)
        sigma = entropy_production_gksl(model, rho_eq,
                                        np.linspace(0.0, 5.0, 6), temperature=2.0)
        assert np.max(np.abs(sigma)) < 1e-8

    def test_gibbs_initial_state_near_stationary_at_strong_coupling(self):
        # with the interaction on, the collective dissipators are no longer an
        # exact detailed-balance generator for the coupled Hamiltonian; the
        # Gibbs state drifts only weakly compared to the ground-state signal
        model = build_dicke(2.0, 2.0, 1.5, gamma=0.05, kappa=0.05,
                            temp_a=2.0, temp_b=2.0)
        rho_eq = gibbs_state(model.hamiltonian, 2.0)
        times = np.linspace(0.0, 5.0, 6)
        drift = entropy_production_gksl(model, rho_eq, times, temperature=2.0)
        rho_s, rho_e = default_initial_states(model)
        signal = entropy_production_gksl(model, kron(rho_s, rho_e), times,
                                         temperature=2.0)
        assert np.max(np.abs(drift)) < 0.05 * signal.max()

    def test_monotone_growth_for_dicke(self):
        model = build_dicke(2.0, 2.0, 1.5, gamma=0.05, kappa=0.05,
                            temp_a=2.0, temp_b=2.0)
        rho_s, rho_e = default_initial_states(model)
        sigma = entropy_production_gksl(model, kron(rho_s, rho_e),
                                        np.linspace(0.0, 10.0, 30),
                                        temperature=2.0)
        assert np.all(sigma > -1e-9)
        assert np.all(np.diff(sigma) > -1e-9)

    def test_requires_dissipation(self):
        model = build_dicke(2.0, 2.0, 1.5)
        with pytest.raises(ValueError):
            entropy_production_gksl(model, np.eye(9) / 9, np.array([0.0]),
                                    temperature=2.0)


class TestValidateDensityMatrix:
    def test_accepts_valid(self):
        w = validate_density_matrix(np.eye(4) / 4)
        assert np.allclose(w, 0.25)

    def test_rejects_non_hermitian(self):
        bad = np.array([[0.5, 0.5], [0.0, 0.5]])
        with pytest.raises(ValueError):
            validate_density_matrix(bad)
