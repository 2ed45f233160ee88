from __future__ import annotations

from typing import Callable, Iterator

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

OperatorsAt = Callable[[float], tuple[np.ndarray, list[np.ndarray]]]


class LindbladModel(BaseModel):
	"""Hamiltonian and jump operators as functions of time."""

	model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

	dim: int = Field(ge=2)
	hamiltonian_at: Callable[[float], np.ndarray]
	jump_operators_at: Callable[[float], list[np.ndarray]]
	time_dependent: bool = True
	# Optional fused evaluation for models that share work between H and the jumps
	fused_operators_at: OperatorsAt | None = None

	def operators_at(self, t: float) -> tuple[np.ndarray, list[np.ndarray]]:
		if self.fused_operators_at is not None:
			return self.fused_operators_at(t)
		return self.hamiltonian_at(t), self.jump_operators_at(t)

	@classmethod
	def constant(cls, hamiltonian: np.ndarray, jump_operators: list[np.ndarray]) -> 'LindbladModel':
		hamiltonian = np.asarray(hamiltonian, dtype=complex)
		jumps = [np.asarray(op, dtype=complex) for op in jump_operators]
		return cls(
			dim=hamiltonian.shape[0],
			hamiltonian_at=lambda t: hamiltonian,
			jump_operators_at=lambda t: jumps,
			time_dependent=False,
		)


class Trajectory(BaseModel):
	"""States ρ(t0 + j dt) for j = 0..n_step, held in memory or produced by a cursor."""

	model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

	t0: float = 0.0
	dt: float = Field(gt=0)
	n_step: int = Field(ge=1)
	states: np.ndarray | None = None
	cursor: Callable[[], Iterator[np.ndarray]] | None = None

	@property
	def materialized(self) -> bool:
		return self.states is not None

	@property
	def duration(self) -> float:
		return self.n_step * self.dt

	def times(self) -> np.ndarray:
		return self.t0 + self.dt * np.arange(self.n_step + 1)

	def iter_states(self) -> Iterator[np.ndarray]:
		if self.states is not None:
			return iter(self.states)
		if self.cursor is None:
			raise ValueError('trajectory has neither states nor a cursor')
		return self.cursor()

	def final_state(self) -> np.ndarray:
		if self.states is not None:
			return self.states[-1]
		state = None
		for state in self.iter_states():
			pass
		return state
