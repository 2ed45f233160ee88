import numpy as np
import pytest
from scipy import integrate, linalg

from gpsync.exceptions import DensityMatrixError, DimensionMismatchError
from gpsync.oracles.service import steady_state_closed_form, sync_measure_closed_form, sync_phase_closed_form
from gpsync.spin.service import (
	coherent_spin_state,
	husimi_grid,
	husimi_q,
	magnetic_numbers,
	pauli_operators,
	phase_distribution,
	rotation_operator,
	spin1_operators,
	spin_operators,
	sync_measure_numeric,
)
from gpsync.spin.views import ConeAxis


def test_spin1_matrices_in_plus_zero_minus_basis():
	sx, sy, sz, splus, sminus = spin1_operators()
	root = np.sqrt(2)
	np.testing.assert_allclose(sz, np.diag([1, 0, -1]))
	np.testing.assert_allclose(splus, [[0, root, 0], [0, 0, root], [0, 0, 0]])
	np.testing.assert_allclose(sminus, splus.T)
	np.testing.assert_allclose(sx, np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]]) / root)
	np.testing.assert_allclose(sy, np.array([[0, -1j, 0], [1j, 0, -1j], [0, 1j, 0]]) / root)


def test_raising_operator_matrix_element():
	"""<1,0|S+|1,-1> = sqrt(2)."""
	_, _, _, splus, _ = spin1_operators()
	m = magnetic_numbers(1)
	assert m[1] == 0 and m[2] == -1
	assert splus[1, 2] == pytest.approx(np.sqrt(2))


@pytest.mark.parametrize('spin', [0.5, 1, 1.5, 2])
def test_angular_momentum_algebra(spin):
	ops = spin_operators(spin)
	np.testing.assert_allclose(ops.sx @ ops.sy - ops.sy @ ops.sx, 1j * ops.sz, atol=1e-12)
	np.testing.assert_allclose(ops.sy @ ops.sz - ops.sz @ ops.sy, 1j * ops.sx, atol=1e-12)
	casimir = ops.sx @ ops.sx + ops.sy @ ops.sy + ops.sz @ ops.sz
	np.testing.assert_allclose(casimir, spin * (spin + 1) * np.eye(ops.dim), atol=1e-12)


def test_pauli_operators():
	sigma_x, sigma_y, sigma_z = pauli_operators()
	np.testing.assert_allclose(sigma_x, [[0, 1], [1, 0]])
	np.testing.assert_allclose(sigma_y, [[0, -1j], [1j, 0]])
	np.testing.assert_allclose(sigma_z, [[1, 0], [0, -1]])


@pytest.mark.parametrize('spin', [0, -1, 0.3])
def test_invalid_spin_rejected(spin):
	with pytest.raises(ValueError):
		spin_operators(spin)


def test_rotation_is_identity_at_zero_time():
	np.testing.assert_allclose(rotation_operator(ConeAxis(alpha=0.7, omega=0.3), 0.0), np.eye(3), atol=1e-14)


def test_rotation_about_z_is_diagonal():
	omega, t = 0.4, 1.3
	expected = np.diag(np.exp(-1j * omega * t * np.array([1, 0, -1])))
	np.testing.assert_allclose(rotation_operator(ConeAxis(alpha=0.0, omega=omega), t), expected, atol=1e-14)


def test_full_turn_returns_to_identity_for_integer_spin():
	axis = ConeAxis(alpha=np.pi / 3, omega=0.05)
	np.testing.assert_allclose(rotation_operator(axis, axis.period), np.eye(3), atol=1e-12)
	np.testing.assert_allclose(rotation_operator(axis, axis.period, spin=0.5), -np.eye(2), atol=1e-12)


def test_rotation_matches_matrix_exponential():
	axis = ConeAxis(alpha=1.1, omega=-0.2)
	ops = spin_operators(1)
	generator = np.sin(axis.alpha) * ops.sx + np.cos(axis.alpha) * ops.sz
	np.testing.assert_allclose(rotation_operator(axis, 2.7), linalg.expm(-1j * axis.omega * 2.7 * generator), atol=1e-12)


@pytest.mark.parametrize('alpha', [0.0, np.pi / 5, np.pi / 2, 2.9])
@pytest.mark.parametrize('spin', [0.5, 1])
def test_rotation_group_property(alpha, spin):
	axis = ConeAxis(alpha=alpha, omega=0.37)
	for t1, t2 in [(0.4, 1.1), (-2.0, 7.5), (13.0, 30.0)]:
		product = rotation_operator(axis, t1, spin) @ rotation_operator(axis, t2, spin)
		np.testing.assert_allclose(product, rotation_operator(axis, t1 + t2, spin), atol=1e-10)


@pytest.mark.parametrize('spin', [0.5, 1, 1.5])
def test_coherent_state_matches_rotated_top_state(spin):
	ops = spin_operators(spin)
	theta, phi = 1.2, -0.8
	top = np.zeros(ops.dim, dtype=complex)
	top[0] = 1.0
	expected = linalg.expm(-1j * phi * ops.sz) @ linalg.expm(-1j * theta * ops.sy) @ top
	np.testing.assert_allclose(coherent_spin_state(theta, phi, spin), expected, atol=1e-12)


def test_coherent_states_broadcast():
	states = coherent_spin_state(np.linspace(0, np.pi, 5)[:, None], np.linspace(0, 1, 7)[None, :])
	assert states.shape == (5, 7, 3)
	np.testing.assert_allclose(np.linalg.norm(states, axis=-1), 1.0)


def test_husimi_values():
	top = np.diag([1.0, 0.0, 0.0])
	assert husimi_q(top, 0.0, 0.3) == pytest.approx(3 / (4 * np.pi))
	assert husimi_q(top, np.pi, 0.3) == pytest.approx(0.0, abs=1e-15)
	assert husimi_q(np.eye(3) / 3, 0.9, 2.0) == pytest.approx(1 / (4 * np.pi))


def test_husimi_is_normalised_and_non_negative(random_density_matrix):
	rho = random_density_matrix(3)
	thetas = np.linspace(0.0, np.pi, 401)
	phis = 2 * np.pi * np.arange(128) / 128
	q = husimi_grid(rho, thetas, phis)
	assert q.shape == (401, 128)
	assert q.min() >= -1e-12
	over_phi = q.mean(axis=1) * 2 * np.pi
	assert integrate.simpson(over_phi * np.sin(thetas), x=thetas) == pytest.approx(1.0, rel=1e-8)


def test_husimi_rejects_invalid_states():
	with pytest.raises(DensityMatrixError):
		husimi_q(np.diag([1.0, 1.0, 0.0]), 0.1, 0.1)
	with pytest.raises(DimensionMismatchError):
		husimi_q(np.ones((2, 3)), 0.1, 0.1)


@pytest.mark.parametrize('rho', [np.diag([0.2, 0.3, 0.5]), np.eye(3) / 3, np.diag([0.7, 0.3])])
def test_phase_distribution_vanishes_without_coherences(rho):
	distribution = phase_distribution(rho)
	assert np.max(np.abs(distribution.values)) <= 1e-15
	assert sync_measure_numeric(rho) == (0.0, 0.0)


def test_phase_distribution_has_zero_mean():
	rho = steady_state_closed_form(0.5, 1.0, 0.2, 0.4).density_matrix(0.2)
	assert phase_distribution(rho).mean == pytest.approx(0.0, abs=1e-14)


def test_phase_distribution_grid_validation():
	with pytest.raises(ValueError):
		phase_distribution(np.eye(3) / 3, n_theta=128)
	with pytest.raises(ValueError):
		phase_distribution(np.eye(3) / 3, n_phi=2)


@pytest.mark.parametrize('T', [0.01, 0.1])
def test_numeric_sync_measure_matches_closed_form(T):
	state = steady_state_closed_form(0.5, 1.0, 0.0, 0.0)
	coherences = (state.c_plus1_0, state.c_0_minus1)
	value, phi_max = sync_measure_numeric(state.density_matrix(T))
	assert value == pytest.approx(sync_measure_closed_form(T, coherences), rel=1e-6)
	assert np.angle(np.exp(1j * (phi_max - sync_phase_closed_form(coherences)))) == pytest.approx(0.0, abs=1e-3)


def test_sync_measure_reference_value():
	value, _ = sync_measure_numeric(steady_state_closed_form(0.5, 1.0, 0.0, 0.0).density_matrix(0.1))
	assert value == pytest.approx(0.00614785, abs=1e-7)
