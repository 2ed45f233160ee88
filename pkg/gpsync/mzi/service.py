import logging
import math

import numpy as np
from scipy import linalg

from gpsync.evolver.views import LindbladModel
from gpsync.exceptions import IllConditionedPhase
from gpsync.mzi.views import MziResult
from gpsync.utils import dagger, validate_density_matrix, wrap_phase

logger = logging.getLogger(__name__)

MAX_GENERATOR_STEP = 0.1
NORMALITY_TOL = 1e-12
VISIBILITY_FLOOR = 1e-12


def effective_hamiltonian(model: LindbladModel, t: float) -> np.ndarray:
	"""H(t) - (i/2) Σ Γ†Γ."""
	hamiltonian, jumps = model.operators_at(t)
	decay = sum((dagger(jump) @ jump for jump in jumps), np.zeros_like(hamiltonian))
	return hamiltonian - 0.5j * decay


def _expm(generator: np.ndarray) -> np.ndarray:
	"""exp(generator), via eigendecomposition when the generator is normal."""
	commutator = generator @ dagger(generator) - dagger(generator) @ generator
	if np.max(np.abs(commutator)) <= NORMALITY_TOL * max(1.0, np.max(np.abs(generator)) ** 2):
		eigenvalues, vectors = linalg.eig(generator)
		return (vectors * np.exp(eigenvalues)) @ np.linalg.inv(vectors)
	return linalg.expm(generator)


def effective_propagator(model: LindbladModel, tau: float, n_sub: int = 1) -> np.ndarray:
	"""Time-ordered exponential of -i H_eff over [0, tau] (midpoint rule per sub-interval)."""
	if n_sub < 1:
		raise ValueError(f'n_sub must be >= 1, got {n_sub}')
	if tau == 0:
		return np.eye(model.dim, dtype=complex)
	if not model.time_dependent:
		return _expm(-1j * effective_hamiltonian(model, 0.0) * tau)

	scale = np.linalg.norm(effective_hamiltonian(model, 0.0), 2)
	n_sub = max(n_sub, math.ceil(scale * tau / MAX_GENERATOR_STEP))
	dt = tau / n_sub
	propagator = np.eye(model.dim, dtype=complex)
	for index in range(n_sub):
		midpoint = (index + 0.5) * dt
		propagator = linalg.expm(-1j * effective_hamiltonian(model, midpoint) * dt) @ propagator
	return propagator


def visibility_and_phase(rho0, model: LindbladModel, tau: float, n_sub: int = 1, chi: float = 0.0) -> MziResult:
	"""ν = |Tr(e^{-iχ} Ũ_eff(τ) ρ0)| and its argument.

	`chi` is the controllable reference phase; it shifts the phase by exactly -χ.
	"""
	rho0 = validate_density_matrix(rho0, dim=model.dim, name='rho0')
	overlap = np.exp(-1j * chi) * np.trace(effective_propagator(model, tau, n_sub) @ rho0)
	visibility = float(abs(overlap))
	if visibility < VISIBILITY_FLOOR:
		raise IllConditionedPhase(visibility)
	return MziResult(tau=tau, visibility=min(visibility, 1.0 + 1e-10), phase=wrap_phase(np.angle(overlap)))


def visibility_series(rho0, model: LindbladModel, taus, n_sub: int = 1) -> list[MziResult | None]:
	"""visibility_and_phase over several durations; None where the phase is undefined."""
	results = []
	for tau in taus:
		try:
			results.append(visibility_and_phase(rho0, model, float(tau), n_sub))
		except IllConditionedPhase as exc:
			logger.info(f'tau={tau:.6g}: {exc}')
			results.append(None)
	return results


def visibility_closed_form(omega0: float, gamma_g: float, gamma_d: float, populations, tau: float) -> complex:
	"""Tr(Ũ_eff ρ0) for the unrotated vdP oscillator and a diagonal ρ0."""
	p_plus1, p_0, p_minus1 = populations
	return complex(
		p_plus1 * np.exp(-1j * omega0 * tau - gamma_d * tau)
		+ p_0 * np.exp(-gamma_g * tau)
		+ p_minus1 * np.exp(1j * omega0 * tau - gamma_g * tau / 2)
	)
