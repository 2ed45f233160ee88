"""Kinematic geometric phase of a density-matrix trajectory.

The pipeline decomposes every ρ(t_j), fixes a gauge per eigenvector,
differentiates the eigenvectors with five-point stencils inside each gauge
segment, integrates <φ_k|dφ_k/dt> with the extended Simpson rule and assembles

	z = Σ_k sqrt(p_k(0) p_k(τ)) <φ_k(0)|φ_k(τ)> exp(-∫ <φ_k|dφ_k/dt> dt),   γ = arg z.

`geometric_phase` streams the trajectory through a five-sample window;
the materialised functions expose each stage separately.
"""

import logging
from collections import deque
from typing import Iterable

import numpy as np
from scipy import integrate, linalg

from gpsync.evolver.views import Trajectory
from gpsync.exceptions import DegeneratePopulations, EigenvectorLabelingError, IllConditionedPhase
from gpsync.phase.views import EigenPath, GaugeSettings, GpResult
from gpsync.quadrature import STENCIL_POINTS, STENCIL_ROWS, SimpsonAccumulator, differentiate, simpson
from gpsync.utils import time_execution_sync, wrap_phase

logger = logging.getLogger(__name__)

ILL_CONDITIONED_TOL = 1e-12
LABELING_MIN_OVERLAP = 0.5


class GaugeTracker:
	"""Labels and gauge-fixes the eigenvectors of consecutive density matrices.

	A pivot change starts a new gauge segment for that eigenvector. The join
	sample is the same continuous vector in both segments, so stencils and
	Simpson sums never straddle the kink a re-pivot puts in the derivative.
	"""

	def __init__(self, dim: int, settings: GaugeSettings | None = None, n_intervals: int | None = None):
		self.dim = dim
		self.settings = settings or GaugeSettings()
		self.n_intervals = n_intervals
		self.pivots: np.ndarray | None = None
		self.phases = np.zeros(dim)
		self.segment_starts: list[list[int]] = [[0] for _ in range(dim)]
		self.joins: dict[int, int] = {}
		self._previous: np.ndarray | None = None
		self._previous_continuous: np.ndarray | None = None
		self._continuity_warned = False

	def decompose(self, rho: np.ndarray, step: int, time: float) -> tuple[np.ndarray, np.ndarray]:
		"""Returns (populations, pivot-gauge vectors as columns) for one step."""
		populations, vectors = linalg.eigh(0.5 * (rho + rho.conj().T))
		if self.dim > 1:
			gap = float(np.min(np.diff(populations)))
			if gap < self.settings.degeneracy_tol:
				raise DegeneratePopulations(step, time, gap)
		if self.settings.labeling == 'overlap' and self._previous is not None:
			order = self._match(vectors, step)
			populations, vectors = populations[order], vectors[:, order]
		vectors = self._fix_gauge(vectors, step)
		self._previous = vectors
		return populations, vectors

	def _match(self, vectors: np.ndarray, step: int) -> np.ndarray:
		overlaps = np.abs(self._previous.conj().T @ vectors)
		order = np.empty(self.dim, dtype=int)
		available = set(range(self.dim))
		for k in np.argsort(-overlaps.max(axis=1)):
			candidates = sorted(available, key=lambda col: -overlaps[k, col])
			best = candidates[0]
			if overlaps[k, best] < LABELING_MIN_OVERLAP:
				raise EigenvectorLabelingError(step, float(overlaps[k, best]))
			order[k] = best
			available.remove(best)
		return order

	def _may_split(self, k: int, step: int) -> bool:
		"""Both sides of a join at `step` keep room for a five-point stencil."""
		if step - self.segment_starts[k][-1] < STENCIL_POINTS - 1:
			return False
		return self.n_intervals is None or self.n_intervals - step >= STENCIL_POINTS - 1

	def _fix_gauge(self, vectors: np.ndarray, step: int) -> np.ndarray:
		magnitudes = np.abs(vectors)
		largest = magnitudes.max(axis=0)
		self.joins = {}
		if self.pivots is None:
			self.pivots = np.arange(self.dim)
			for k in range(self.dim):
				if magnitudes[k, k] < max(self.settings.pivot_tol, self.settings.repivot_ratio * largest[k]):
					self.pivots[k] = int(np.argmax(magnitudes[:, k]))
		else:
			for k in range(self.dim):
				old = self.pivots[k]
				if magnitudes[old, k] >= self.settings.repivot_ratio * largest[k]:
					continue
				forced = magnitudes[old, k] <= self.settings.pivot_tol
				if not forced and not self._may_split(k, step):
					continue
				new = int(np.argmax(magnitudes[:, k]))
				if forced:
					# the old gauge is undefined here; join one step back where it still holds
					previous = self._previous[:, k]
					regauged = previous * np.conj(previous[new]) / np.abs(previous[new])
					self.phases[k] = float(np.angle(np.vdot(regauged, self._previous_continuous[:, k])))
					join = step - 1
				else:
					new_gauge = vectors[:, k] * np.conj(vectors[new, k]) / magnitudes[new, k]
					old_gauge = vectors[:, k] * np.conj(vectors[old, k]) / magnitudes[old, k]
					self.phases[k] += float(np.angle(np.vdot(new_gauge, old_gauge)))
					join = step
				self.pivots[k] = new
				self.segment_starts[k].append(join)
				self.joins[k] = join
				logger.debug(f'Eigenvector {k} re-pivoted from entry {old} to {new}, segment joined at step {join}')

		entries = vectors[self.pivots, np.arange(self.dim)]
		fixed = vectors * (np.conj(entries) / np.abs(entries))[None, :]

		continuous = fixed * np.exp(1j * self.phases)[None, :]
		if self._previous_continuous is not None and not self._continuity_warned:
			continuity = np.abs(np.sum(self._previous_continuous.conj() * continuous, axis=0))
			if continuity.min() < self.settings.continuity_warn:
				logger.warning(
					f'Eigenvector continuity {continuity.min():.3f} at step {step} is below '
					f'{self.settings.continuity_warn}; consider more steps'
				)
				self._continuity_warned = True
		self._previous_continuous = continuous
		return fixed

	def continuous(self, vectors: np.ndarray) -> np.ndarray:
		return vectors * np.exp(1j * self.phases)[None, :]


def eigen_decompose_path(states: Iterable[np.ndarray], dt: float, settings: GaugeSettings | None = None) -> EigenPath:
	"""Step 1: sorted, gauge-fixed eigenpairs of every state."""
	states = list(states)
	dim = states[0].shape[0]
	tracker = GaugeTracker(dim, settings, n_intervals=len(states) - 1)
	populations, vectors, pivots, phases = [], [], [], []
	for step, rho in enumerate(states):
		p, v = tracker.decompose(rho, step, step * dt)
		populations.append(p)
		vectors.append(v)
		pivots.append(tracker.pivots.copy())
		phases.append(tracker.phases.copy())
	return EigenPath(
		dt=dt,
		populations=np.array(populations),
		vectors=np.array(vectors),
		pivots=np.array(pivots),
		gauge_phases=np.array(phases),
		segment_starts=tuple(tuple(starts) for starts in tracker.segment_starts),
	)


def _short_segment_connection(samples: np.ndarray, dt: float) -> complex:
	"""Second-order fallback for a gauge segment shorter than one stencil."""
	derivative = np.gradient(samples, dt, axis=0)
	return complex(integrate.trapezoid(np.sum(samples.conj() * derivative, axis=1), dx=dt))


def differentiate_eigenvectors(path: EigenPath) -> list[list[np.ndarray]]:
	"""Step 2: dφ_k/dt of the continuous-gauge eigenvectors, fourth order.

	Returned per eigenvector and per gauge segment, since a join sample has
	one derivative on each side.
	"""
	vectors = path.continuous_vectors()
	derivatives = []
	for k in range(vectors.shape[2]):
		per_segment = []
		for start, end in path.segments(k):
			samples = vectors[start : end + 1, :, k]
			if end - start >= STENCIL_POINTS - 1:
				per_segment.append(differentiate(samples, path.dt))
			else:
				per_segment.append(np.gradient(samples, path.dt, axis=0) if end > start else np.zeros_like(samples))
		derivatives.append(per_segment)
	return derivatives


def accumulate_connection(path: EigenPath, derivatives: list[list[np.ndarray]]) -> np.ndarray:
	"""Step 3: ∫ <φ_k|dφ_k/dt> dt for every k, extended Simpson rule per gauge segment."""
	vectors = path.continuous_vectors()
	connections = np.zeros(vectors.shape[2], dtype=complex)
	short = 0
	for k, per_segment in enumerate(derivatives):
		for (start, end), derivative in zip(path.segments(k), per_segment):
			if end == start:
				continue
			integrand = np.sum(vectors[start : end + 1, :, k].conj() * derivative, axis=1)
			if end - start >= STENCIL_POINTS - 1:
				connections[k] += simpson(integrand, path.dt)
			else:
				connections[k] += integrate.trapezoid(integrand, dx=path.dt)
				short += 1
	if short:
		logger.warning(f'{short} gauge segment(s) shorter than a five-point stencil were integrated at second order')
	return connections


def _assemble(
	populations_start: np.ndarray,
	populations_end: np.ndarray,
	vectors_start: np.ndarray,
	vectors_end: np.ndarray,
	connections: np.ndarray,
) -> GpResult:
	overlaps = np.sum(vectors_start.conj() * vectors_end, axis=0)
	weights = np.sqrt(np.clip(populations_start, 0.0, None) * np.clip(populations_end, 0.0, None))
	z = complex(np.sum(weights * overlaps * np.exp(-connections)))
	if abs(z) < ILL_CONDITIONED_TOL:
		raise IllConditionedPhase(abs(z))
	return GpResult(
		gamma=wrap_phase(np.angle(z)),
		z=z,
		overlaps=overlaps,
		connections=connections,
		populations_start=populations_start,
		populations_end=populations_end,
	)


def geometric_phase_from_path(path: EigenPath) -> GpResult:
	"""Step 4 on a materialised path."""
	connections = accumulate_connection(path, differentiate_eigenvectors(path))
	vectors = path.continuous_vectors()
	return _assemble(path.populations[0], path.populations[-1], vectors[0], vectors[-1], connections)


class _SegmentStream:
	"""Five-sample window of one eigenvector feeding stencil derivatives into a Simpson sum."""

	def __init__(self, dt: float):
		self.dt = dt
		self.total = 0j
		self.short = 0
		self._reset()

	def _reset(self) -> None:
		self.window: deque[np.ndarray] = deque(maxlen=STENCIL_POINTS)
		self.integral = SimpsonAccumulator(self.dt)
		self.count = 0

	def push(self, vector: np.ndarray) -> None:
		self.window.append(vector)
		index = self.count
		self.count += 1
		if index == STENCIL_POINTS - 1:
			for position in range(3):
				self._evaluate(position)
		elif index > STENCIL_POINTS - 1:
			self._evaluate(2)

	def restart(self) -> None:
		"""Closes the segment and opens the next one at the last pushed vector."""
		join = self.window[-1]
		self.close()
		self.push(join)

	def close(self) -> None:
		n_intervals = self.count - 1
		if n_intervals >= STENCIL_POINTS - 1:
			self._evaluate(3)
			self._evaluate(4)
			self.total += self.integral.result()
		elif n_intervals >= 1:
			self.total += _short_segment_connection(np.array(self.window), self.dt)
			self.short += 1
		self._reset()

	def _evaluate(self, position: int) -> None:
		window = np.array(self.window)
		derivative = np.tensordot(STENCIL_ROWS[position], window, axes=(0, 0)) / self.dt
		self.integral.add(np.vdot(window[position], derivative))


class _ConnectionStream:
	"""Per-eigenvector segment streams for a trajectory of known length."""

	def __init__(self, n_intervals: int, dt: float, dim: int):
		if n_intervals < STENCIL_POINTS - 1:
			raise ValueError(f'the geometric phase needs n_step >= 4, got {n_intervals}')
		self.n_intervals = n_intervals
		self.segments = [_SegmentStream(dt) for _ in range(dim)]
		self.count = 0

	def push(self, vectors: np.ndarray, joins: dict[int, int]) -> None:
		step = self.count
		self.count += 1
		for k, segment in enumerate(self.segments):
			join = joins.get(k)
			if join == step - 1:
				segment.restart()
			segment.push(vectors[:, k])
			if join == step:
				segment.restart()

	def finish(self) -> np.ndarray:
		if self.count != self.n_intervals + 1:
			raise ValueError(f'expected {self.n_intervals + 1} states, received {self.count}')
		for segment in self.segments:
			segment.close()
		short = sum(segment.short for segment in self.segments)
		if short:
			logger.warning(f'{short} gauge segment(s) shorter than a five-point stencil were integrated at second order')
		return np.array([segment.total for segment in self.segments])


@time_execution_sync('--geometric_phase')
def geometric_phase(trajectory: Trajectory, settings: GaugeSettings | None = None) -> GpResult:
	"""Geometric phase of a trajectory, consumed in a single streaming pass."""
	tracker: GaugeTracker | None = None
	stream: _ConnectionStream | None = None
	first: tuple[np.ndarray, np.ndarray] | None = None
	last: tuple[np.ndarray, np.ndarray] | None = None

	for step, rho in enumerate(trajectory.iter_states()):
		if tracker is None:
			stream = _ConnectionStream(trajectory.n_step, trajectory.dt, rho.shape[0])
			tracker = GaugeTracker(rho.shape[0], settings, n_intervals=trajectory.n_step)
		populations, vectors = tracker.decompose(rho, step, trajectory.t0 + step * trajectory.dt)
		continuous = tracker.continuous(vectors)
		stream.push(continuous, tracker.joins)
		if first is None:
			first = (populations, continuous)
		last = (populations, continuous)

	connections = stream.finish()
	result = _assemble(first[0], last[0], first[1], last[1], connections)
	logger.debug(f'Geometric phase {result.gamma:.10f} rad, |z| = {result.visibility:.3e}')
	return result
