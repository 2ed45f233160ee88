from __future__ import annotations

from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

LabelingMode = Literal['sorted', 'overlap']


class GaugeSettings(BaseModel):
	model_config = ConfigDict(frozen=True, extra='forbid')

	pivot_tol: float = Field(default=1e-6, gt=0, description='Absolute floor for a usable pivot entry')
	repivot_ratio: float = Field(
		default=0.25, gt=0, lt=1, description='Re-pivot when |pivot| < ratio * max|entry| of the eigenvector'
	)
	degeneracy_tol: float = Field(default=1e-8, gt=0, description='Minimum gap between eigenvalues of ρ(t)')
	labeling: LabelingMode = 'sorted'
	continuity_warn: float = Field(default=0.9, description='Warn when |<φ_k(t_j)|φ_k(t_j+1)>| drops below this')


class EigenPath(BaseModel):
	"""Per-step spectral decomposition of a trajectory.

	`vectors[j][:, k]` has its pivot entry `pivots[j, k]` real and non-negative.
	`gauge_phases[j, k]` is the accumulated phase that makes
	`vectors[j][:, k] * exp(1j * gauge_phases[j, k])` continuous across re-pivots.
	`segment_starts[k]` lists the steps where eigenvector k enters a new pivot
	gauge; consecutive segments share their join sample.
	"""

	model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

	dt: float
	populations: np.ndarray
	vectors: np.ndarray
	pivots: np.ndarray
	gauge_phases: np.ndarray
	segment_starts: tuple[tuple[int, ...], ...] = ()

	@property
	def n_step(self) -> int:
		return self.populations.shape[0] - 1

	def continuous_vectors(self) -> np.ndarray:
		return self.vectors * np.exp(1j * self.gauge_phases)[:, None, :]

	def segments(self, k: int) -> list[tuple[int, int]]:
		"""Inclusive (start, end) steps of the gauge segments of eigenvector k."""
		starts = list(self.segment_starts[k]) if self.segment_starts else [0]
		return list(zip(starts, starts[1:] + [self.n_step]))


class GpResult(BaseModel):
	model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

	gamma: float = Field(description='Geometric phase in (-π, π]')
	z: complex = Field(description='Weighted sum whose argument is the phase')
	overlaps: np.ndarray = Field(description='<φ_k(0)|φ_k(τ)> per eigenvector')
	connections: np.ndarray = Field(description='∫ <φ_k|dφ_k/dt> dt per eigenvector')
	populations_start: np.ndarray
	populations_end: np.ndarray

	@property
	def visibility(self) -> float:
		return abs(self.z)
