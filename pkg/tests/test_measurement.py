import numpy as np
import pandas as pd
import pytest

from conftest import assert_matches_fixture
from feyncursor.core.cursor_kernel import amplitude, amplitudes, build_spectrum, group_velocity
from feyncursor.core.machine import hamiltonian_matvec
from feyncursor.core.models import UnitaryProgram
from feyncursor.qubit.grover import (
    PAULI,
    bloch_trajectory,
    program,
    reduced_eigensystem,
    rotation_model,
    spectrum,
    success_probability,
)
from feyncursor.qubit.measurement import (
    collapse,
    cursor_position_distributions,
    energy_distribution,
    machine_energy_basis,
    mean_energy,
    mean_speed,
    pre_measurement_state,
)


@pytest.fixture(scope="module")
def basis7(grover7):
    return machine_energy_basis(grover7)


@pytest.fixture(scope="module")
def outcomes7(grover7, tau7):
    return collapse(grover7, tau7.tau_aligned)


class TestCollapse:
    def test_identity_program_always_reads_one(self):
        model = rotation_model(9, 0.0, 0.0)
        first, second = collapse(model, 3.0)
        assert first.probability == pytest.approx(1.0, abs=1e-12)
        np.testing.assert_allclose(first.cursor_vector, amplitude(build_spectrum(9), 3.0).values, atol=1e-12)
        assert not second.present
        assert second.probability < 1e-12
        np.testing.assert_allclose(second.machine_vector, 0.0)

    def test_probabilities_and_norms(self, grover7, tau7, outcomes7):
        first, second = outcomes7
        assert first.outcome_bit == 1 and second.outcome_bit == 0
        assert abs(first.probability + second.probability - 1) < 1e-12
        assert first.probability == pytest.approx(success_probability(grover7, tau7.tau_aligned)[0], abs=1e-12)
        for outcome in outcomes7:
            assert outcome.present
            assert abs(np.linalg.norm(outcome.machine_vector) - 1) < 1e-10
            assert np.linalg.matrix_rank(outcome.machine_vector.reshape(2, grover7.s), tol=1e-10) == 1

    def test_probabilities_equal_register_spectrum(self, grover7, tau7, outcomes7):
        eig = reduced_eigensystem(bloch_trajectory(grover7, [tau7.tau_aligned])[0])
        first, second = outcomes7
        assert abs(first.probability - eig.lambda1) < 1e-10
        assert abs(second.probability - eig.lambda2) < 1e-10

    def test_peak_readout_falls_short_of_largest_eigenvalue(self, grover7, tau7):
        eig = reduced_eigensystem(bloch_trajectory(grover7, [tau7.tau])[0])
        first, second = collapse(grover7, tau7.tau)
        assert first.probability < eig.lambda1 - 1e-3
        assert second.probability > eig.lambda2 + 1e-3

    def test_cursor_profiles(self, grover7, tau7, outcomes7):
        c = amplitude(spectrum(grover7), tau7.tau_aligned).values
        half = grover7.site_phases() / 2
        first, second = outcomes7
        expected1 = c * np.cos(half)
        expected0 = c * np.sin(half)
        np.testing.assert_allclose(first.cursor_vector, expected1 / np.linalg.norm(expected1), atol=1e-12)
        np.testing.assert_allclose(second.cursor_vector, expected0 / np.linalg.norm(expected0), atol=1e-12)

    def test_mixture_identity_on_position(self, grover7, tau7, outcomes7):
        p1, p2 = cursor_position_distributions(outcomes7)
        weights = np.abs(amplitudes(spectrum(grover7), [tau7.tau_aligned])[0]) ** 2
        mixture = outcomes7[0].probability * p1 + outcomes7[1].probability * p2
        assert np.max(np.abs(mixture - weights)) < 1e-10
        assert abs(p1.sum() - 1) < 1e-10 and abs(p2.sum() - 1) < 1e-10

    def test_mixture_identity_with_register_eigenvalues(self, grover7, tau7, outcomes7):
        eig = reduced_eigensystem(bloch_trajectory(grover7, [tau7.tau_aligned])[0])
        p1, p2 = cursor_position_distributions(outcomes7)
        weights = np.abs(amplitudes(spectrum(grover7), [tau7.tau_aligned])[0]) ** 2
        assert np.max(np.abs(eig.lambda1 * p1 + eig.lambda2 * p2 - weights)) < 1e-10

    def test_collapse_away_from_tau(self, grover7):
        first, second = collapse(grover7, 17.0)
        assert abs(first.probability + second.probability - 1) < 1e-12


class TestEnergyBasis:
    def test_eigen_residual_and_completeness(self, grover7, basis7):
        prog = program(grover7)
        v = basis7.vectors
        assert v.shape == (2 * grover7.s, 2 * grover7.s)
        residual = max(np.linalg.norm(hamiltonian_matvec(prog, 1.0, vec) - e * vec)
                       for e, vec in zip(basis7.energies, v.T))
        assert residual < 1e-10
        assert np.max(np.abs(v @ v.conj().T - np.eye(v.shape[0]))) < 1e-10

    def test_register_part_is_sigma2_eigenstate(self, grover7, basis7):
        for label, vec in zip(basis7.labels[:4], basis7.vectors.T[:4]):
            register = vec.reshape(2, grover7.s)[:, 0]
            register = register / np.linalg.norm(register)
            np.testing.assert_allclose(PAULI[2] @ register, label * register, atol=1e-12)

    def test_from_program_matches_model(self, grover7, basis7):
        other = machine_energy_basis(program(grover7), lam=1.0)
        np.testing.assert_allclose(other.vectors, basis7.vectors, atol=1e-12)
        np.testing.assert_allclose(other.level_energies, basis7.level_energies)

    def test_from_program_requires_rotation(self):
        sigma1 = np.array([[0, 1], [1, 0]], dtype=complex)
        with pytest.raises(ValueError):
            machine_energy_basis(UnitaryProgram.constant(np.eye(2), 4))
        with pytest.raises(ValueError):
            machine_energy_basis(UnitaryProgram.identity(3, 4), lam=1.0)
        with pytest.raises(ValueError):
            machine_energy_basis(UnitaryProgram.constant(sigma1, 4), lam=1.0)
        with pytest.raises(ValueError):
            machine_energy_basis(UnitaryProgram.from_steps([np.eye(2), sigma1]), lam=1.0)


class TestEnergyDistribution:
    def test_eigenvector_is_point_mass(self, basis7):
        j = 2 * 10 + 1
        dist = energy_distribution(basis7.vectors[:, j], basis7)
        expected = np.zeros(basis7.level_energies.size)
        expected[10] = 1.0
        np.testing.assert_allclose(dist.probabilities, expected, atol=1e-12)

    def test_pre_measurement_is_edge_weight_and_conserved(self, grover7, tau7, basis7):
        pre_tau = energy_distribution(pre_measurement_state(grover7, tau7.tau_aligned), basis7)
        pre_zero = energy_distribution(pre_measurement_state(grover7, 0.0), basis7)
        expected = spectrum(grover7).initial_weights ** 2
        assert np.max(np.abs(pre_tau.probabilities - expected)) < 1e-10
        assert np.max(np.abs(pre_tau.probabilities - pre_zero.probabilities)) < 1e-9

    def test_outcome_distributions(self, grover7, tau7, basis7, outcomes7):
        pre = energy_distribution(pre_measurement_state(grover7, tau7.tau_aligned), basis7)
        p1, p2 = (energy_distribution(o.machine_vector, basis7) for o in outcomes7)
        for dist in (p1, p2):
            assert np.all(dist.probabilities >= 0)
            assert abs(dist.probabilities.sum() - 1) < 1e-10
        assert p2.total_variation(pre) > p1.total_variation(pre)

    def test_rejects_unnormalized_state(self, basis7):
        with pytest.raises(ValueError):
            energy_distribution(2 * basis7.vectors[:, 0], basis7)


class TestMeanEnergyAndSpeed:
    def test_energy_conserved_at_zero(self, grover7):
        prog = program(grover7)
        for t in (0.0, 10.0, 100.0, 250.0):
            assert abs(mean_energy(pre_measurement_state(grover7, t), prog, 1.0)) < 1e-8

    def test_pre_measurement_speed(self, grover7, tau7, basis7):
        spec = spectrum(grover7)
        pre = energy_distribution(pre_measurement_state(grover7, tau7.tau_aligned), basis7)
        expected = float(np.dot(spec.initial_weights ** 2, group_velocity(spec)))
        assert mean_speed(pre, spec) == pytest.approx(expected, abs=1e-10)

    def test_recoil_regression(self, grover7, tau7, basis7, outcomes7):
        spec = spectrum(grover7)
        prog = program(grover7)
        pre = energy_distribution(pre_measurement_state(grover7, tau7.tau_aligned), basis7)
        row = {"tau": tau7.tau_aligned}
        for outcome, tag in zip(outcomes7, ("1", "0")):
            dist = energy_distribution(outcome.machine_vector, basis7)
            row[f"mean_energy_{tag}"] = mean_energy(outcome.machine_vector, prog, 1.0)
            row[f"mean_speed_{tag}"] = mean_speed(dist, spec)
            row[f"tv_distance_{tag}"] = dist.total_variation(pre)
        assert_matches_fixture(pd.DataFrame([row]), "recoil_mu7", atol=1e-8)
