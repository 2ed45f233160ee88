import numpy as np
import pytest

from gpsync.evolver.service import evolve
from gpsync.evolver.views import LindbladModel
from gpsync.exceptions import IllConditionedPhase
from gpsync.mzi.service import (
	effective_hamiltonian,
	effective_propagator,
	visibility_and_phase,
	visibility_closed_form,
	visibility_series,
)
from gpsync.oracles.service import qubit_dephasing_initial_state, qubit_dephasing_model, vdp_populations
from gpsync.phase.service import geometric_phase
from gpsync.vdp.service import build_lab_frame_model
from gpsync.vdp.views import VdpParams

UNROTATED = VdpParams(omega0=10.0, gamma_g=0.1, gamma_d=1.0, omega=0.0, T=0.0, tau=1.0)


def _pancharatnam(theta0: float, eta: float, tau: float) -> complex:
	return np.cos(theta0 / 2) ** 2 * np.exp(-0.5j * eta * tau) + np.sin(theta0 / 2) ** 2 * np.exp(0.5j * eta * tau)


def test_unitary_interferometer():
	model = LindbladModel.constant(0.5 * np.diag([1.0, -1.0]), [])
	result = visibility_and_phase(qubit_dephasing_initial_state(np.pi / 3), model, 2.0)
	expected = _pancharatnam(np.pi / 3, 1.0, 2.0)
	assert result.visibility == pytest.approx(abs(expected))
	assert result.phase == pytest.approx(np.angle(expected))


def test_zero_duration_is_identity():
	model = build_lab_frame_model(VdpParams(omega=0.05, T=0.1))
	np.testing.assert_array_equal(effective_propagator(model, 0.0), np.eye(3))
	result = visibility_and_phase(np.eye(3) / 3, model, 0.0)
	assert result.visibility == pytest.approx(1.0)
	assert result.phase == pytest.approx(0.0)


def test_effective_hamiltonian_of_vdp_is_diagonal():
	hamiltonian = effective_hamiltonian(build_lab_frame_model(UNROTATED), 0.0)
	np.testing.assert_allclose(hamiltonian, np.diag([10.0 - 1.0j, -0.1j, -10.0 - 0.05j]), atol=1e-14)


@pytest.mark.parametrize('tau', [0.3, 2.0, 17.0])
def test_vdp_matches_diagonal_closed_form(tau):
	populations = vdp_populations(UNROTATED.gamma_g, UNROTATED.gamma_d)
	result = visibility_and_phase(np.diag(populations), build_lab_frame_model(UNROTATED), tau)
	expected = visibility_closed_form(10.0, 0.1, 1.0, populations, tau)
	assert result.visibility == pytest.approx(abs(expected), rel=1e-10)
	assert np.exp(1j * result.phase) == pytest.approx(np.exp(1j * np.angle(expected)), abs=1e-10)


def test_dephasing_qubit_without_jumps():
	"""H_eff = (η/2)σz - iΛ/4, so Tr(Ũρ0) = e^{-Λτ/4} <ψ0|e^{-iητσz/2}|ψ0>."""
	eta, rate, tau, theta0 = 1.0, 0.2, 3.0, np.pi / 4
	result = visibility_and_phase(qubit_dephasing_initial_state(theta0), qubit_dephasing_model(eta, rate), tau)
	expected = np.exp(-rate * tau / 4) * _pancharatnam(theta0, eta, tau)
	assert result.visibility == pytest.approx(abs(expected), rel=1e-12)
	assert result.phase == pytest.approx(np.angle(expected), abs=1e-12)


def test_reference_phase_shifts_the_output():
	rho0 = qubit_dephasing_initial_state(np.pi / 4)
	model = qubit_dephasing_model(1.0, 0.2)
	base = visibility_and_phase(rho0, model, 1.5)
	shifted = visibility_and_phase(rho0, model, 1.5, chi=0.4)
	assert shifted.visibility == pytest.approx(base.visibility)
	assert np.exp(1j * shifted.phase) == pytest.approx(np.exp(1j * (base.phase - 0.4)), abs=1e-12)


def test_time_ordered_product_of_constant_generator_matches_single_exponential():
	frozen = qubit_dephasing_model(1.0, 0.2)
	sliced = LindbladModel(
		dim=2,
		hamiltonian_at=frozen.hamiltonian_at,
		jump_operators_at=frozen.jump_operators_at,
		time_dependent=True,
	)
	np.testing.assert_allclose(effective_propagator(sliced, 2.0, n_sub=7), effective_propagator(frozen, 2.0), atol=1e-12)


def test_visibility_decays_at_the_gain_rate():
	populations = vdp_populations(UNROTATED.gamma_g, UNROTATED.gamma_d)
	model = build_lab_frame_model(UNROTATED)
	taus = np.linspace(200.0, 300.0, 11)
	results = visibility_series(np.diag(populations), model, taus)
	slope = np.polyfit(taus, np.log([result.visibility for result in results]), 1)[0]
	assert slope == pytest.approx(-UNROTATED.gamma_g / 2, abs=1e-4)


def test_vanishing_visibility_is_ill_conditioned():
	rho0 = np.diag(vdp_populations(UNROTATED.gamma_g, UNROTATED.gamma_d))
	model = build_lab_frame_model(UNROTATED)
	with pytest.raises(IllConditionedPhase):
		visibility_and_phase(rho0, model, 1000.0)
	results = visibility_series(rho0, model, [1.0, 1000.0])
	assert results[0] is not None and results[1] is None


def test_interferometric_phase_is_not_the_geometric_phase():
	"""A stationary state has no geometric phase but a finite interferometer phase."""
	rho0 = np.diag(vdp_populations(UNROTATED.gamma_g, UNROTATED.gamma_d))
	model = build_lab_frame_model(UNROTATED)
	interferometer = visibility_and_phase(rho0, model, 0.5)
	geometric = geometric_phase(evolve(model, rho0, 0.5, 200))
	assert interferometer.phase == pytest.approx(-0.8725, abs=1e-3)
	assert geometric.gamma == pytest.approx(0.0, abs=1e-10)
	assert abs(interferometer.phase - geometric.gamma) > 0.1


def test_n_sub_validation():
	with pytest.raises(ValueError):
		effective_propagator(qubit_dephasing_model(1.0, 0.2), 1.0, n_sub=0)
