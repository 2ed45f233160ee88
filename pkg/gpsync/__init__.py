from gpsync.logging_config import setup_logging

setup_logging()

from gpsync.evolver.service import evolve as evolve
from gpsync.evolver.service import liouvillian_apply as liouvillian_apply
from gpsync.evolver.service import steady_state as steady_state
from gpsync.evolver.views import LindbladModel as LindbladModel
from gpsync.evolver.views import Trajectory as Trajectory
from gpsync.phase.service import geometric_phase as geometric_phase
from gpsync.phase.views import GpResult as GpResult
from gpsync.sweep.service import run_sweep as run_sweep
from gpsync.sweep.views import SweepConfig as SweepConfig
from gpsync.vdp.views import VdpParams as VdpParams

__all__ = [
	'evolve',
	'liouvillian_apply',
	'steady_state',
	'LindbladModel',
	'Trajectory',
	'geometric_phase',
	'GpResult',
	'run_sweep',
	'SweepConfig',
	'VdpParams',
]
