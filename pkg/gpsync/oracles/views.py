from __future__ import annotations

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class RwaSteadyState(BaseModel):
	"""First-order (in T) steady state of the driven vdP oscillator in the rotating frame.

	Coherences are per unit signal strength: ρ_{+1,0} = T * c_plus1_0.
	"""

	model_config = ConfigDict(frozen=True)

	p_plus1: float
	p_0: float
	p_minus1: float
	c_plus1_0: complex
	c_0_minus1: complex

	@model_validator(mode='after')
	def _check_populations(self) -> 'RwaSteadyState':
		populations = self.populations
		if np.any(populations <= 0) or abs(populations.sum() - 1.0) > 1e-12:
			raise ValueError(f'populations must be positive and sum to 1, got {populations}')
		return self

	@property
	def populations(self) -> np.ndarray:
		return np.array([self.p_plus1, self.p_0, self.p_minus1])

	def density_matrix(self, T: float) -> np.ndarray:
		rho = np.diag(self.populations).astype(complex)
		rho[0, 1] = T * self.c_plus1_0
		rho[1, 2] = T * self.c_0_minus1
		rho[1, 0] = np.conj(rho[0, 1])
		rho[2, 1] = np.conj(rho[1, 2])
		return rho


class QubitDephasingParams(BaseModel):
	model_config = ConfigDict(frozen=True, extra='forbid')

	eta: float = Field(default=1.0, description='Level splitting')
	Lambda: float = Field(default=0.2, gt=0, description='Dephasing rate')
	theta0: float = Field(default=np.pi / 4, ge=0.0, le=np.pi, description='Initial Bloch polar angle')
	tau: float = Field(default=2 * np.pi, gt=0)
