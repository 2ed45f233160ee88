import logging

import numpy as np
from scipy.special import comb

from gpsync.quadrature import simpson_weights
from gpsync.spin.views import ConeAxis, PhaseDistribution, SpinOperators
from gpsync.utils import validate_density_matrix

logger = logging.getLogger(__name__)

DEFAULT_N_PHI = 256
DEFAULT_N_THETA = 129
FLAT_DISTRIBUTION_TOL = 1e-14


def spin_from_dim(dim: int) -> float:
	if dim < 2:
		raise ValueError(f'spin space needs dimension >= 2, got {dim}')
	return (dim - 1) / 2


def magnetic_numbers(spin: float) -> np.ndarray:
	"""m = +S, S-1, ..., -S, the basis order used throughout."""
	dim = int(round(2 * spin + 1))
	return spin - np.arange(dim)


def spin_operators(spin: float) -> SpinOperators:
	if spin <= 0 or abs(2 * spin - round(2 * spin)) > 1e-12:
		raise ValueError(f'spin must be a positive multiple of 1/2, got {spin}')
	m = magnetic_numbers(spin)
	dim = m.size
	splus = np.zeros((dim, dim), dtype=complex)
	for row in range(1, dim):
		# <m+1|S+|m>
		mm = m[row]
		splus[row - 1, row] = np.sqrt(spin * (spin + 1) - mm * (mm + 1))
	sminus = splus.conj().T
	sx = 0.5 * (splus + sminus)
	sy = -0.5j * (splus - sminus)
	sz = np.diag(m).astype(complex)
	return SpinOperators(spin=spin, sx=sx, sy=sy, sz=sz, splus=splus, sminus=sminus)


def spin1_operators() -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
	"""(Sx, Sy, Sz, S+, S-) for spin 1 in the basis (|+1>, |0>, |-1>)."""
	return spin_operators(1).as_tuple()


def pauli_operators() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
	ops = spin_operators(0.5)
	return 2 * ops.sx, 2 * ops.sy, 2 * ops.sz


class AxisRotation:
	"""R(t) = exp(-i ω t n·S), diagonalised once."""

	def __init__(self, axis: ConeAxis, ops: SpinOperators):
		self.axis = axis
		nx, _, nz = axis.direction
		generator = nx * ops.sx + nz * ops.sz
		self._eigenvalues, self._eigenvectors = np.linalg.eigh(generator)

	def __call__(self, t: float) -> np.ndarray:
		phases = np.exp(-1j * self.axis.omega * t * self._eigenvalues)
		return (self._eigenvectors * phases) @ self._eigenvectors.conj().T


def rotation_operator(axis: ConeAxis, t: float, spin: float = 1) -> np.ndarray:
	return AxisRotation(axis, spin_operators(spin))(t)


def coherent_spin_state(theta, phi, spin: float = 1) -> np.ndarray:
	"""|θ,φ> = e^{-iφSz} e^{-iθSy} |S,S>, broadcast over θ and φ.

	The last axis of the result indexes m = +S..-S.
	"""
	theta = np.asarray(theta, dtype=float)[..., None]
	phi = np.asarray(phi, dtype=float)[..., None]
	m = magnetic_numbers(spin)
	amplitudes = (
		np.sqrt(comb(2 * spin, spin - m)) * np.cos(theta / 2) ** (spin + m) * np.sin(theta / 2) ** (spin - m)
	)
	return amplitudes * np.exp(-1j * m * phi)


def husimi_q(rho, theta, phi) -> np.ndarray:
	"""Q(θ,φ) = (2S+1)/(4π) <θ,φ|ρ|θ,φ>."""
	rho = validate_density_matrix(rho)
	spin = spin_from_dim(rho.shape[0])
	return _husimi(rho, coherent_spin_state(theta, phi, spin), spin)


def husimi_grid(rho, thetas, phis) -> np.ndarray:
	"""Q on the outer product grid, indexed [theta, phi]."""
	thetas = np.asarray(thetas, dtype=float)
	phis = np.asarray(phis, dtype=float)
	return husimi_q(rho, thetas[:, None], phis[None, :])


def _husimi(rho: np.ndarray, states: np.ndarray, spin: float) -> np.ndarray:
	expectation = np.einsum('...a,ab,...b->...', states.conj(), rho, states).real
	return (2 * spin + 1) / (4 * np.pi) * expectation


def phase_distribution(rho, n_phi: int = DEFAULT_N_PHI, n_theta: int = DEFAULT_N_THETA) -> PhaseDistribution:
	"""S(φ) = ∫ sinθ Q dθ - 1/2π on a uniform φ grid.

	Populations integrate to Tr ρ / 2π in closed form, so only the coherences
	go through the θ quadrature.
	"""
	if n_theta < 3 or n_theta % 2 == 0:
		raise ValueError(f'n_theta must be odd and >= 3, got {n_theta}')
	if n_phi < 3:
		raise ValueError(f'n_phi must be >= 3, got {n_phi}')
	rho = validate_density_matrix(rho)
	spin = spin_from_dim(rho.shape[0])
	coherences = rho - np.diag(np.diag(rho))

	phis = 2 * np.pi * np.arange(n_phi) / n_phi
	thetas = np.linspace(0.0, np.pi, n_theta)
	states = coherent_spin_state(thetas[:, None], phis[None, :], spin)
	q_coherent = _husimi(coherences, states, spin)
	weights = simpson_weights(n_theta - 1) * (np.pi / (n_theta - 1))
	values = np.tensordot(weights * np.sin(thetas), q_coherent, axes=(0, 0))
	values = values + (np.trace(rho).real - 1.0) / (2 * np.pi)
	return PhaseDistribution(phis=phis, values=values)


def sync_measure_numeric(rho, n_phi: int = DEFAULT_N_PHI, n_theta: int = DEFAULT_N_THETA) -> tuple[float, float]:
	"""(max S, argmax φ) with a parabolic refinement around the grid maximum."""
	distribution = phase_distribution(rho, n_phi=n_phi, n_theta=n_theta)
	values = distribution.values
	if np.max(np.abs(values)) <= FLAT_DISTRIBUTION_TOL:
		return 0.0, 0.0

	step = 2 * np.pi / n_phi
	peak = int(np.argmax(values))
	left, centre, right = values[(peak - 1) % n_phi], values[peak], values[(peak + 1) % n_phi]
	curvature = left - 2 * centre + right
	offset = 0.0 if curvature >= 0 else 0.5 * (left - right) / curvature
	phi_max = float(np.mod(distribution.phis[peak] + offset * step, 2 * np.pi))

	refined = phase_distribution_at(validate_density_matrix(rho), phi_max, n_theta)
	if refined >= centre:
		return refined, phi_max
	return float(centre), float(distribution.phis[peak])


def phase_distribution_at(rho: np.ndarray, phi: float, n_theta: int = DEFAULT_N_THETA) -> float:
	spin = spin_from_dim(rho.shape[0])
	coherences = rho - np.diag(np.diag(rho))
	thetas = np.linspace(0.0, np.pi, n_theta)
	q_coherent = _husimi(coherences, coherent_spin_state(thetas, phi, spin), spin)
	weights = simpson_weights(n_theta - 1) * (np.pi / (n_theta - 1))
	return float(np.sum(weights * np.sin(thetas) * q_coherent) + (np.trace(rho).real - 1.0) / (2 * np.pi))
