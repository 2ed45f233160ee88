import logging
from typing import Iterator

import numpy as np
from scipy import linalg

from gpsync.evolver.views import LindbladModel, Trajectory
from gpsync.exceptions import DimensionMismatchError, NonUniqueSteadyState, ParameterError, TraceDriftError
from gpsync.quadrature import STENCIL_POINTS
from gpsync.utils import dagger, hermitize, time_execution_sync, validate_density_matrix

logger = logging.getLogger(__name__)

TRACE_DRIFT_LIMIT = 1e-6
NULL_EIGENVALUE_TOL = 1e-10
SPECTRAL_GAP_TOL = 1e-8
STEADY_STATE_RESIDUAL_TOL = 1e-10


Generator = tuple[np.ndarray, list[tuple[np.ndarray, np.ndarray]]]


def _generator(hamiltonian: np.ndarray, jumps: list[np.ndarray]) -> Generator:
	"""(G, [(L, L†)]) with G = -iH - ½ Σ L†L, so that dρ/dt = Gρ + ρG† + Σ LρL†."""
	pairs = [(jump, dagger(jump)) for jump in jumps]
	drift = -1j * hamiltonian
	for jump, jump_dag in pairs:
		drift = drift - 0.5 * (jump_dag @ jump)
	return drift, pairs


def _apply(rho: np.ndarray, generator: Generator) -> np.ndarray:
	drift, pairs = generator
	out = drift @ rho + rho @ dagger(drift)
	for jump, jump_dag in pairs:
		out += jump @ rho @ jump_dag
	return out


def liouvillian_apply(model: LindbladModel, rho: np.ndarray, t: float = 0.0) -> np.ndarray:
	"""-i[H(t), ρ] + Σ_k D[L_k(t)]ρ."""
	rho = np.asarray(rho, dtype=complex)
	if rho.shape != (model.dim, model.dim):
		raise DimensionMismatchError(f'ρ has shape {rho.shape}, model dimension is {model.dim}')
	hamiltonian, jumps = model.operators_at(t)
	return _apply(rho, _generator(hamiltonian, jumps))


def liouvillian_superoperator(model: LindbladModel, t: float = 0.0) -> np.ndarray:
	"""Matrix of the Liouvillian acting on column-stacked vec(ρ).

	Uses vec(AρB) = (Bᵀ ⊗ A) vec(ρ).
	"""
	hamiltonian, jumps = model.operators_at(t)
	identity = np.eye(model.dim)
	superop = -1j * (np.kron(identity, hamiltonian) - np.kron(hamiltonian.T, identity))
	for jump in jumps:
		decay = dagger(jump) @ jump
		superop += np.kron(jump.conj(), jump)
		superop -= 0.5 * (np.kron(identity, decay) + np.kron(decay.T, identity))
	return superop


def _rk4_states(model: LindbladModel, rho0: np.ndarray, t0: float, dt: float, n_step: int) -> Iterator[np.ndarray]:
	rho = rho0.copy()
	yield rho.copy()
	half = 0.5 * dt
	previous_end: Generator | None = None
	for step in range(1, n_step + 1):
		t = t0 + (step - 1) * dt
		start = previous_end if previous_end is not None else _generator(*model.operators_at(t))
		middle = _generator(*model.operators_at(t + half))
		end = _generator(*model.operators_at(t + dt))
		previous_end = end
		k1 = _apply(rho, start)
		k2 = _apply(rho + half * k1, middle)
		k3 = _apply(rho + half * k2, middle)
		k4 = _apply(rho + dt * k3, end)
		rho = hermitize(rho + (dt / 6) * (k1 + 2 * k2 + 2 * k3 + k4))
		trace = np.trace(rho)
		if abs(trace - 1.0) > TRACE_DRIFT_LIMIT:
			raise TraceDriftError(step, t + dt, complex(trace))
		yield rho.copy()


@time_execution_sync('--evolve')
def evolve(model: LindbladModel, rho0, tau: float, n_step: int, t0: float = 0.0, materialize: bool = True) -> Trajectory:
	"""Integrates the master equation with fixed-step RK4 over [t0, t0 + tau]."""
	if tau <= 0:
		raise ParameterError(f'tau must be positive, got {tau}')
	# the stencil and Simpson consumers need at least one full five-point window
	if n_step < STENCIL_POINTS - 1:
		raise ParameterError(f'n_step must be >= {STENCIL_POINTS - 1}, got {n_step}')
	rho0 = validate_density_matrix(rho0, dim=model.dim, name='rho0')
	dt = tau / n_step
	logger.debug(f'Evolving dim={model.dim} over tau={tau:.6g} with {n_step} steps (dt={dt:.3e})')

	if not materialize:
		return Trajectory(t0=t0, dt=dt, n_step=n_step, cursor=lambda: _rk4_states(model, rho0, t0, dt, n_step))

	states = np.empty((n_step + 1, model.dim, model.dim), dtype=complex)
	for index, rho in enumerate(_rk4_states(model, rho0, t0, dt, n_step)):
		states[index] = rho
	return Trajectory(t0=t0, dt=dt, n_step=n_step, states=states)


def steady_state(model: LindbladModel, t: float = 0.0) -> np.ndarray:
	"""Unique null vector of a time-independent Liouvillian, normalised to unit trace."""
	if model.time_dependent:
		raise ParameterError('steady_state needs a time-independent model')
	superop = liouvillian_superoperator(model, t)
	eigenvalues, eigenvectors = linalg.eig(superop)
	order = np.argsort(np.abs(eigenvalues))
	smallest, second = np.abs(eigenvalues[order[0]]), np.abs(eigenvalues[order[1]])
	if smallest > NULL_EIGENVALUE_TOL or second < SPECTRAL_GAP_TOL:
		raise NonUniqueSteadyState((float(smallest), float(second)))

	rho = eigenvectors[:, order[0]].reshape((model.dim, model.dim), order='F')
	rho = hermitize(rho / np.trace(rho))
	residual = np.linalg.norm(superop @ rho.flatten(order='F'))
	if residual > STEADY_STATE_RESIDUAL_TOL:
		logger.warning(f'Steady state residual {residual:.3e} above {STEADY_STATE_RESIDUAL_TOL:.0e}')
	return rho
