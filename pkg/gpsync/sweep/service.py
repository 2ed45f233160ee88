import csv
import logging
import multiprocessing
from functools import partial
from pathlib import Path

import numpy as np
import psutil

from gpsync.evolver.service import evolve, steady_state
from gpsync.exceptions import (
	DegeneratePopulations,
	EigenvectorLabelingError,
	IllConditionedPhase,
	NonUniqueSteadyState,
	NumericalError,
	TraceDriftError,
)
from gpsync.oracles.service import (
	analytic_regime_warnings,
	gp_cyclic_with_signal,
	gp_noncyclic,
	sync_measure_closed_form,
	vdp_coherences,
)
from gpsync.phase.service import geometric_phase
from gpsync.spin.service import sync_measure_numeric
from gpsync.sweep.views import PointFlag, SweepConfig, SweepMode, SweepRow, SweepTable
from gpsync.utils import time_execution_sync, unwrap_finite
from gpsync.vdp.service import adiabatic_initial_state, build_lab_frame_model, build_rwa_model
from gpsync.vdp.views import VdpParams

logger = logging.getLogger(__name__)

CSV_HEADER = ['delta', 'T', 'value', 'value_unwrapped', 'flag']

FLAGS = {
	DegeneratePopulations: PointFlag.DEGENERATE,
	IllConditionedPhase: PointFlag.ILL_CONDITIONED,
	NonUniqueSteadyState: PointFlag.NON_UNIQUE,
	TraceDriftError: PointFlag.TRACE_DRIFT,
	EigenvectorLabelingError: PointFlag.LABELING,
}

PointResult = tuple[float | None, float | None, PointFlag | None]


def resolve_threads(threads: int | str) -> int:
	if threads == 'auto':
		return psutil.cpu_count(logical=False) or psutil.cpu_count() or 1
	return int(threads)


def point_params(base: VdpParams, delta: float, T: float) -> VdpParams:
	"""Parameters at one grid point; delta and T are in units of gamma_d."""
	return base.model_copy(update={'T': T * base.gamma_d, 'omega_sig': base.omega0 + delta * base.gamma_d})


def evaluate_point(base: VdpParams, mode: SweepMode, point: tuple[float, float]) -> PointResult:
	"""(value, visibility, flag) at one (Δ, T) point; numerical failures become flags."""
	delta, T = point
	p = point_params(base, delta, T)
	try:
		if mode is SweepMode.SYNC_ANALYTIC:
			coherences = vdp_coherences(p.gamma_g, p.gamma_d, p.detuning, p.phi_sig)
			return sync_measure_closed_form(p.T, coherences), None, None
		if mode is SweepMode.SYNC_NUMERIC:
			# synchronization of the driven oscillator on a fixed axis
			rho = steady_state(build_rwa_model(p.model_copy(update={'omega': 0.0})))
			return sync_measure_numeric(rho)[0], None, None
		if mode is SweepMode.GP_ANALYTIC:
			value = gp_cyclic_with_signal(p, warn=False) if p.is_cyclic else gp_noncyclic(p, warn=False)
			return value, None, None
		trajectory = evolve(build_lab_frame_model(p), adiabatic_initial_state(p), p.duration, p.n_step, materialize=False)
		result = geometric_phase(trajectory)
		return result.gamma, result.visibility, None
	except NumericalError as exc:
		flag = next((flag for kind, flag in FLAGS.items() if isinstance(exc, kind)), PointFlag.ILL_CONDITIONED)
		logger.info(f'Point (Δ={delta:.6g}, T={T:.6g}) flagged {flag.value}: {exc}')
		return None, None, flag


@time_execution_sync('--run_sweep')
def run_sweep(cfg: SweepConfig) -> SweepTable:
	points = [(float(delta), float(T)) for delta in cfg.deltas() for T in cfg.strengths()]
	worker = partial(evaluate_point, cfg.base, cfg.mode)
	threads = min(resolve_threads(cfg.threads), len(points))
	logger.info(f'Sweeping {cfg.mode.value} over {cfg.n_delta}x{cfg.n_t} points with {threads} worker(s)')
	if cfg.mode is SweepMode.GP_ANALYTIC:
		widest = max(cfg.delta_min, cfg.delta_max, key=abs)
		for notice in analytic_regime_warnings(point_params(cfg.base, widest, cfg.t_max)):
			logger.warning(f'Analytic phase outside its regime: {notice}')

	if threads == 1:
		results = [worker(point) for point in points]
	else:
		with multiprocessing.Pool(threads) as pool:
			results = pool.map(worker, points, chunksize=1)

	values = np.array([np.nan if value is None else value for value, _, _ in results])
	unwrapped = values.copy()
	if cfg.mode.is_phase:
		blocks = unwrapped.reshape(cfg.n_delta, cfg.n_t)
		for i_delta in range(cfg.n_delta):
			blocks[i_delta] = unwrap_finite(blocks[i_delta])

	rows = []
	for (delta, T), (value, visibility, flag), smooth in zip(points, results, unwrapped):
		rows.append(
			SweepRow(
				delta=delta,
				T=T,
				value=value,
				value_unwrapped=None if value is None else float(smooth),
				visibility=visibility,
				flag=flag,
			)
		)
	n_flagged = sum(row.flag is not None for row in rows)
	if n_flagged:
		logger.warning(f'{n_flagged} of {len(rows)} grid points flagged')
	return SweepTable(mode=cfg.mode, rows=rows)


def _format(value: float | None) -> str:
	return '' if value is None else format(value, '.17g')


def emit_csv(table: SweepTable, path: str | Path) -> Path:
	path = Path(path)
	try:
		with path.open('w', encoding='utf-8', newline='') as handle:
			writer = csv.writer(handle, lineterminator='\n')
			writer.writerow(CSV_HEADER)
			for row in table.rows:
				writer.writerow(
					[
						_format(row.delta),
						_format(row.T),
						_format(row.value),
						_format(row.value_unwrapped),
						row.flag.value if row.flag else '',
					]
				)
	except OSError as exc:
		raise OSError(f'Could not write CSV to {path}: {exc}') from exc
	logger.debug(f'Wrote {len(table.rows)} rows to {path}')
	return path


def read_csv(path: str | Path, mode: SweepMode = SweepMode.SYNC_ANALYTIC) -> SweepTable:
	def parse(field: str) -> float | None:
		return float(field) if field else None

	with Path(path).open(encoding='utf-8', newline='') as handle:
		reader = csv.DictReader(handle)
		rows = [
			SweepRow(
				delta=float(record['delta']),
				T=float(record['T']),
				value=parse(record['value']),
				value_unwrapped=parse(record['value_unwrapped']),
				flag=PointFlag(record['flag']) if record['flag'] else None,
			)
			for record in reader
		]
	return SweepTable(mode=mode, rows=rows)
