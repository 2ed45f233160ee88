from __future__ import annotations

import numpy as np
from pydantic import BaseModel, ConfigDict, Field


class ConeAxis(BaseModel):
	"""Axis n = (sin α, 0, cos α) rotated about z at angular frequency ω."""

	model_config = ConfigDict(frozen=True, extra='forbid')

	alpha: float = Field(default=np.pi / 4, ge=0.0, le=np.pi, description='Cone opening angle')
	omega: float = Field(default=0.05, description='Rotation frequency; the sign selects the direction')

	@property
	def direction(self) -> np.ndarray:
		return np.array([np.sin(self.alpha), 0.0, np.cos(self.alpha)])

	@property
	def period(self) -> float:
		if self.omega == 0:
			return float('inf')
		return 2 * np.pi / abs(self.omega)


class SpinOperators(BaseModel):
	model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

	spin: float
	sx: np.ndarray
	sy: np.ndarray
	sz: np.ndarray
	splus: np.ndarray
	sminus: np.ndarray

	@property
	def dim(self) -> int:
		return self.sz.shape[0]

	def as_tuple(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
		return self.sx, self.sy, self.sz, self.splus, self.sminus


class PhaseDistribution(BaseModel):
	"""Samples of S(φ) on a uniform grid over [0, 2π)."""

	model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

	phis: np.ndarray
	values: np.ndarray

	@property
	def mean(self) -> float:
		return float(np.mean(self.values))
