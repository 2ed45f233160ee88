from __future__ import annotations

from enum import Enum
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from gpsync.vdp.views import VdpParams


class SweepMode(str, Enum):
	SYNC_ANALYTIC = 'sync-analytic'
	SYNC_NUMERIC = 'sync-numeric'
	GP_NUMERIC = 'gp-numeric'
	GP_ANALYTIC = 'gp-analytic'

	@property
	def is_phase(self) -> bool:
		return self in (SweepMode.GP_NUMERIC, SweepMode.GP_ANALYTIC)


class PointFlag(str, Enum):
	DEGENERATE = 'degenerate'
	ILL_CONDITIONED = 'ill-conditioned'
	NON_UNIQUE = 'non-unique'
	TRACE_DRIFT = 'trace-drift'
	LABELING = 'labeling'


class SweepConfig(BaseModel):
	"""Arnold-tongue grid over detuning Δ and signal strength T, both in units of gamma_d."""

	model_config = ConfigDict(frozen=True, extra='forbid')

	delta_min: float = -0.5
	delta_max: float = 0.5
	t_min: float = Field(default=0.0, ge=0)
	t_max: float = Field(default=0.5, ge=0)
	n_delta: int = Field(default=11, ge=2)
	n_t: int = Field(default=11, ge=2)
	mode: SweepMode = SweepMode.SYNC_ANALYTIC
	base: VdpParams = Field(default_factory=VdpParams)
	threads: int | Literal['auto'] = 1

	@model_validator(mode='after')
	def _check_ranges(self) -> 'SweepConfig':
		if not self.delta_max > self.delta_min:
			raise ValueError('delta_max must exceed delta_min')
		if not self.t_max > self.t_min:
			raise ValueError('t_max must exceed t_min')
		if isinstance(self.threads, int) and self.threads < 1:
			raise ValueError('threads must be >= 1 or auto')
		return self

	def deltas(self) -> np.ndarray:
		return np.linspace(self.delta_min, self.delta_max, self.n_delta)

	def strengths(self) -> np.ndarray:
		return np.linspace(self.t_min, self.t_max, self.n_t)


class SweepRow(BaseModel):
	model_config = ConfigDict(frozen=True)

	delta: float
	T: float
	value: float | None = None
	value_unwrapped: float | None = None
	visibility: float | None = None
	flag: PointFlag | None = None


class SweepTable(BaseModel):
	"""Rows ordered row-major in Δ, then T."""

	model_config = ConfigDict(frozen=True)

	mode: SweepMode
	rows: list[SweepRow]

	def grid(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
		"""(deltas, strengths, values[T index, Δ index]); NaN marks flagged cells."""
		deltas = list(dict.fromkeys(row.delta for row in self.rows))
		strengths = list(dict.fromkeys(row.T for row in self.rows))
		if len(deltas) * len(strengths) != len(self.rows):
			raise ValueError(f'table with {len(self.rows)} rows is not a {len(deltas)}x{len(strengths)} grid')
		values = np.full((len(strengths), len(deltas)), np.nan)
		for index, row in enumerate(self.rows):
			i_delta, i_t = divmod(index, len(strengths))
			if row.delta != deltas[i_delta] or row.T != strengths[i_t]:
				raise ValueError(f'row {index} at (Δ={row.delta}, T={row.T}) breaks the row-major grid order')
			if row.value is not None:
				values[i_t, i_delta] = row.value_unwrapped if row.value_unwrapped is not None else row.value
		return np.array(deltas), np.array(strengths), values
