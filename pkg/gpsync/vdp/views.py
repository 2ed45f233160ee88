from __future__ import annotations

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from gpsync.spin.views import ConeAxis


class VdpParams(BaseModel):
	"""Spin-1 quantum van der Pol oscillator on a rotating axis, with an optional drive.

	Rates are in units of gamma_d when read from a config file.
	"""

	model_config = ConfigDict(frozen=True, extra='forbid')

	omega0: float = Field(default=1.0, gt=0, description='Natural frequency')
	gamma_g: float = Field(default=0.5, gt=0, description='Gain rate')
	gamma_d: float = Field(default=1.0, gt=0, description='Damping rate')
	alpha: float = Field(default=np.pi / 4, ge=0.0, le=np.pi, description='Cone opening angle')
	omega: float = Field(default=0.05, description='Axis rotation frequency')
	T: float = Field(default=0.0, ge=0.0, description='Drive strength')
	omega_sig: float = Field(default=1.0, description='Drive frequency')
	phi_sig: float = Field(default=0.0, description='Drive phase')
	tau: float | None = Field(default=200.0, gt=0, description='Duration; None means one full axis rotation')
	n_step: int = Field(default=200_000, ge=4, description='RK4 steps over the duration')

	@model_validator(mode='after')
	def _check_duration(self) -> 'VdpParams':
		if self.tau is None and self.omega == 0:
			raise ValueError('tau must be given when omega is 0')
		return self

	@property
	def axis(self) -> ConeAxis:
		return ConeAxis(alpha=self.alpha, omega=self.omega)

	@property
	def detuning(self) -> float:
		"""Δ = ω̃ - ω₀."""
		return self.omega_sig - self.omega0

	@property
	def gamma_ratio(self) -> float:
		return self.gamma_g / self.gamma_d

	@property
	def rotation_period(self) -> float:
		return self.axis.period

	@property
	def duration(self) -> float:
		return self.tau if self.tau is not None else self.rotation_period

	@property
	def is_cyclic(self) -> bool:
		if self.omega == 0:
			return False
		turns = abs(self.omega) * self.duration / (2 * np.pi)
		return bool(np.isclose(turns, round(turns), rtol=0, atol=1e-9) and round(turns) >= 1)
