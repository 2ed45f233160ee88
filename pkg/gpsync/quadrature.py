"""Extended Simpson weights and five-point derivative stencils.

Both operate on uniformly spaced samples and are shared by the geometric phase
pipeline and the Husimi θ-integral.
"""

from collections import deque

import numpy as np

# Rows give d/dt at position 0..4 of a window of five consecutive samples.
# Positions 0, 1 and 3, 4 are the one-sided boundary stencils; position 2 is the
# central stencil. All rows are fourth order.
STENCIL_ROWS = np.array(
	[
		[-25 / 12, 4.0, -3.0, 4 / 3, -1 / 4],
		[-1 / 4, -5 / 6, 3 / 2, -1 / 2, 1 / 12],
		[1 / 12, -2 / 3, 0.0, 2 / 3, -1 / 12],
		[-1 / 12, 1 / 2, -3 / 2, 5 / 6, 1 / 4],
		[1 / 4, -4 / 3, 3.0, -4.0, 25 / 12],
	]
)

STENCIL_POINTS = 5


def stencil_window(index: int, n_intervals: int) -> tuple[int, int]:
	"""Returns (window start, position inside window) for the sample `index`."""
	if n_intervals < STENCIL_POINTS - 1:
		raise ValueError(f'five-point stencils need at least 4 intervals, got {n_intervals}')
	start = min(max(index - 2, 0), n_intervals - 4)
	return start, index - start


def simpson_weight(index: int, n_intervals: int) -> float:
	"""Weight of sample `index` in the extended Simpson rule, in units of the step.

	An odd number of intervals is closed with the 3/8 rule on the last three.
	"""
	if n_intervals < 1 or not 0 <= index <= n_intervals:
		raise ValueError(f'index {index} outside 0..{n_intervals}')
	if n_intervals == 1:
		return 0.5
	simpson_end = n_intervals if n_intervals % 2 == 0 else n_intervals - 3
	weight = 0.0
	if simpson_end >= 2 and index <= simpson_end:
		if index in (0, simpson_end):
			weight += 1 / 3
		else:
			weight += 4 / 3 if index % 2 == 1 else 2 / 3
	if n_intervals % 2 == 1 and index >= simpson_end:
		weight += 3 / 8 if index in (simpson_end, n_intervals) else 9 / 8
	return weight


def simpson_weights(n_intervals: int) -> np.ndarray:
	return np.array([simpson_weight(j, n_intervals) for j in range(n_intervals + 1)])


def simpson(values: np.ndarray, step: float, axis: int = 0) -> np.ndarray:
	"""Integrates uniformly sampled `values` along `axis`."""
	values = np.asarray(values)
	weights = simpson_weights(values.shape[axis] - 1)
	return step * np.tensordot(weights, np.moveaxis(values, axis, 0), axes=(0, 0))


def differentiate(values: np.ndarray, step: float) -> np.ndarray:
	"""Fourth-order derivative of uniformly sampled `values` along axis 0."""
	values = np.asarray(values)
	n_intervals = values.shape[0] - 1
	out = np.empty_like(values, dtype=np.result_type(values, float))
	for index in range(n_intervals + 1):
		start, position = stencil_window(index, n_intervals)
		window = values[start : start + STENCIL_POINTS]
		out[index] = np.tensordot(STENCIL_ROWS[position], window, axes=(0, 0)) / step
	return out


class SimpsonAccumulator:
	"""Extended Simpson sum over samples that arrive one at a time.

	Only the last four samples depend on the final number of intervals, so
	they are held back until `result` and everything older is summed at once.
	"""

	def __init__(self, step: float):
		self.step = step
		self.count = 0
		self._total = 0.0
		self._pending: deque[tuple[int, object]] = deque()

	def add(self, value) -> None:
		self._pending.append((self.count, value))
		self.count += 1
		if len(self._pending) > STENCIL_POINTS - 1:
			index, oldest = self._pending.popleft()
			self._total = self._total + simpson_weight(index, index + STENCIL_POINTS - 1) * oldest

	def result(self):
		n_intervals = self.count - 1
		if n_intervals < 1:
			raise ValueError('a Simpson sum needs at least two samples')
		total = self._total
		for index, value in self._pending:
			total = total + simpson_weight(index, n_intervals) * value
		return self.step * total
