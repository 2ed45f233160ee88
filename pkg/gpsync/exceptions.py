class GpSyncError(Exception):
	"""Base class for gpsync errors."""

	pass


class NumericalError(GpSyncError):
	"""Base class for numerical failures of a single computation."""

	pass


class NonUniqueSteadyState(NumericalError):
	def __init__(self, eigenvalues, message: str | None = None):
		self.eigenvalues = eigenvalues
		super().__init__(message or f'Liouvillian null space is not one-dimensional (smallest |λ|: {eigenvalues})')


class DegeneratePopulations(NumericalError):
	def __init__(self, step: int, time: float, gap: float):
		self.step = step
		self.time = time
		self.gap = gap
		super().__init__(f'Eigenvalues of ρ(t) within {gap:.3e} of each other at step {step} (t={time:.6g})')


class IllConditionedPhase(NumericalError):
	def __init__(self, magnitude: float):
		self.magnitude = magnitude
		super().__init__(f'Phase undefined: |z| = {magnitude:.3e}')


class TraceDriftError(NumericalError):
	def __init__(self, step: int, time: float, trace: complex):
		self.step = step
		self.time = time
		self.trace = trace
		super().__init__(f'Trace drifted to {trace:.12g} at step {step} (t={time:.6g})')


class EigenvectorLabelingError(NumericalError):
	def __init__(self, step: int, overlap: float):
		self.step = step
		self.overlap = overlap
		super().__init__(f'No eigenvector continuation at step {step} (best overlap {overlap:.3f})')


class DensityMatrixError(GpSyncError, ValueError):
	"""Raised when an operator is not a valid density matrix."""

	pass


class DimensionMismatchError(GpSyncError, ValueError):
	"""Raised when operator shapes disagree."""

	pass


class ConfigError(GpSyncError, ValueError):
	def __init__(self, key: str, message: str):
		self.key = key
		self.message = message
		super().__init__(f'{key}: {message}')


class ParameterError(GpSyncError, ValueError):
	"""Raised when an argument is outside the range an operation accepts."""

	pass
