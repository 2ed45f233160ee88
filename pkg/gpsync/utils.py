import logging
import time
from functools import wraps
from typing import Callable, ParamSpec, TypeVar

import numpy as np

from gpsync.exceptions import DensityMatrixError, DimensionMismatchError

logger = logging.getLogger(__name__)

R = TypeVar('R')
P = ParamSpec('P')

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
POSITIVITY_TOL = 1e-8


def time_execution_sync(additional_text: str = '') -> Callable[[Callable[P, R]], Callable[P, R]]:
	def decorator(func: Callable[P, R]) -> Callable[P, R]:
		@wraps(func)
		def wrapper(*args: P.args, **kwargs: P.kwargs) -> R:
			start_time = time.time()
			result = func(*args, **kwargs)
			execution_time = time.time() - start_time
			logger.debug(f'{additional_text} Execution time: {execution_time:.2f} seconds')
			return result

		return wrapper

	return decorator


def as_operator(matrix, name: str = 'operator') -> np.ndarray:
	"""Returns `matrix` as a square complex array."""
	array = np.asarray(matrix, dtype=complex)
	if array.ndim != 2 or array.shape[0] != array.shape[1]:
		raise DimensionMismatchError(f'{name} must be a square matrix, got shape {array.shape}')
	return array


def validate_density_matrix(rho, dim: int | None = None, name: str = 'rho') -> np.ndarray:
	"""Checks Hermiticity, unit trace and positivity within the module tolerances."""
	rho = as_operator(rho, name)
	if dim is not None and rho.shape[0] != dim:
		raise DimensionMismatchError(f'{name} has dimension {rho.shape[0]}, expected {dim}')
	if not np.all(np.isfinite(rho)):
		raise DensityMatrixError(f'{name} contains non-finite entries')
	asym = np.max(np.abs(rho - rho.conj().T))
	if asym > HERMITICITY_TOL:
		raise DensityMatrixError(f'{name} is not Hermitian (max |ρ - ρ†| = {asym:.3e})')
	trace = np.trace(rho)
	if abs(trace - 1.0) > TRACE_TOL:
		raise DensityMatrixError(f'{name} has trace {trace.real:.12g}, expected 1')
	smallest = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0]
	if smallest < -POSITIVITY_TOL:
		raise DensityMatrixError(f'{name} is not positive semidefinite (smallest eigenvalue {smallest:.3e})')
	return rho


def hermitize(rho: np.ndarray) -> np.ndarray:
	return 0.5 * (rho + rho.conj().T)


def dagger(operator: np.ndarray) -> np.ndarray:
	return operator.conj().T


def wrap_phase(angle: float) -> float:
	"""Maps an angle to (-π, π]."""
	wrapped = float(np.angle(np.exp(1j * angle)))
	if wrapped <= -np.pi:
		wrapped += 2 * np.pi
	return wrapped


def unwrap_finite(values: np.ndarray) -> np.ndarray:
	"""np.unwrap over the finite entries; NaN entries stay NaN."""
	values = np.asarray(values, dtype=float)
	out = np.full_like(values, np.nan)
	mask = np.isfinite(values)
	if mask.any():
		out[mask] = np.unwrap(values[mask])
	return out
