from pydantic import BaseModel, ConfigDict, Field


class MziResult(BaseModel):
	"""Interferometric visibility and phase of one arm evolving under the no-jump propagator."""

	model_config = ConfigDict(frozen=True)

	tau: float = Field(ge=0)
	visibility: float = Field(ge=0, le=1 + 1e-10)
	phase: float
