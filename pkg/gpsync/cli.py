"""Command-line entry point.

	gpsync gp --config slow.cfg --both-directions
	gpsync tongue --config tongue.cfg --mode gp-analytic --out tongue.csv --svg tongue.svg
	gpsync benchmark-qubit --n-steps 200,400,800,1600,3200
	gpsync mzi --taus 0.5,1,2,4
	gpsync oracle blockade-ratio
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Callable

import numpy as np

from gpsync.evolver.service import evolve
from gpsync.exceptions import ConfigError, GpSyncError, NumericalError
from gpsync.mzi.service import visibility_series
from gpsync.oracles.service import (
	blockade_ratio,
	gp_cyclic_with_signal,
	gp_no_signal,
	gp_noncyclic,
	gp_periodic_orbit,
	qubit_dephasing_gp,
	qubit_dephasing_initial_state,
	qubit_dephasing_model,
	sync_measure_closed_form,
	sync_phase_closed_form,
	vdp_coherences,
	vdp_populations,
)
from gpsync.phase.service import geometric_phase
from gpsync.sweep.config import (
	build_qubit_params,
	build_sweep_config,
	build_vdp_params,
	load_config_file,
	parse_overrides,
	parse_value,
)
from gpsync.sweep.heatmap import render_heatmap
from gpsync.sweep.service import emit_csv, run_sweep
from gpsync.vdp.service import adiabatic_initial_state, build_lab_frame_model
from gpsync.vdp.views import VdpParams

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2

ORACLES = [
	'blockade-ratio',
	'populations',
	'coherences',
	'sync-measure',
	'gp-no-signal',
	'gp-cyclic',
	'gp-noncyclic',
	'gp-periodic',
	'qubit-gp',
]


class UsageErrorParser(argparse.ArgumentParser):
	def __init__(self, *args, **kwargs):
		# unknown --key value pairs are config overrides, never abbreviations
		kwargs.setdefault('allow_abbrev', False)
		super().__init__(*args, **kwargs)

	def error(self, message):
		raise ConfigError('usage', message)


def _float_list(text: str) -> list[float]:
	try:
		return [float(item) for item in text.split(',') if item.strip()]
	except ValueError as exc:
		raise argparse.ArgumentTypeError(f'expected comma-separated numbers, got {text!r}') from exc


def _int_list(text: str) -> list[int]:
	return [int(value) for value in _float_list(text)]


def build_parser() -> argparse.ArgumentParser:
	common = UsageErrorParser(add_help=False)
	common.add_argument('--config', type=Path, help='Flat key = value config file')
	common.add_argument('--threads', default=None, help='Worker processes for sweeps (N or auto)')
	common.add_argument('--out', type=Path, default=None, help='Output path; stdout when omitted')
	common.add_argument('--seedless', action='store_true', help='Deterministic mode; always on, accepted for compatibility')

	parser = UsageErrorParser(prog='gpsync', description='Geometric phase and synchronization of open spin systems')
	commands = parser.add_subparsers(dest='command', required=True, parser_class=UsageErrorParser)

	gp = commands.add_parser('gp', parents=[common], help='Single geometric phase run of the rotating vdP oscillator')
	gp.add_argument('--both-directions', action='store_true', help='Also run with the rotation reversed')

	tongue = commands.add_parser('tongue', parents=[common], help='Arnold-tongue sweep to CSV')
	tongue.add_argument('--svg', type=Path, default=None, help='Also render an SVG heatmap')
	tongue.add_argument('--colormap', default='viridis', help='matplotlib colormap name')

	bench = commands.add_parser('benchmark-qubit', parents=[common], help='Convergence of the dephasing-qubit phase')
	bench.add_argument('--n-steps', type=_int_list, default=[200, 400, 800, 1600, 3200])

	mzi = commands.add_parser('mzi', parents=[common], help='Interferometric visibility and phase versus duration')
	mzi.add_argument('--taus', type=_float_list, default=[0.5, 1.0, 2.0, 5.0, 10.0, 20.0])
	mzi.add_argument('--n-sub', type=int, default=1)

	oracle = commands.add_parser('oracle', parents=[common], help='Print a closed-form value')
	oracle.add_argument('name', choices=ORACLES)
	return parser


def _settings(args: argparse.Namespace, extra: list[str]) -> dict[str, Any]:
	values: dict[str, Any] = load_config_file(args.config) if args.config else {}
	values.update(parse_overrides(extra))
	if args.threads is not None:
		values['threads'] = parse_value(args.threads)
	return values


def _write(lines: list[str], out: Path | None) -> None:
	text = '\n'.join(lines) + '\n'
	if out is None:
		sys.stdout.write(text)
	else:
		out.write_text(text, encoding='utf-8')
		logger.info(f'Wrote {out}')


def _fmt(value: float) -> str:
	return format(value, '.17g')


def run_gp(args: argparse.Namespace, values: dict[str, Any]) -> list[str]:
	p = build_vdp_params(values)
	runs = [p, p.model_copy(update={'omega': -p.omega})] if args.both_directions else [p]
	lines = ['omega,gamma,visibility,gamma_analytic']
	for params in runs:
		trajectory = evolve(
			build_lab_frame_model(params),
			adiabatic_initial_state(params),
			params.duration,
			params.n_step,
			materialize=False,
		)
		result = geometric_phase(trajectory)
		analytic = gp_cyclic_with_signal(params) if params.is_cyclic else gp_noncyclic(params)
		lines.append(f'{_fmt(params.omega)},{_fmt(result.gamma)},{_fmt(result.visibility)},{_fmt(analytic)}')
		logging.getLogger('gpsync').result(f'omega={params.omega:+.6g}: gamma={result.gamma:.6f} rad')
	return lines


def run_tongue(args: argparse.Namespace, values: dict[str, Any]) -> list[str]:
	cfg = build_sweep_config(values)
	table = run_sweep(cfg)
	out = args.out or Path('tongue.csv')
	emit_csv(table, out)
	if args.svg:
		render_heatmap(table, args.svg, args.colormap)
	logging.getLogger('gpsync').result(f'{cfg.mode.value} sweep written to {out}')
	return []


def run_benchmark(args: argparse.Namespace, values: dict[str, Any]) -> list[str]:
	q = build_qubit_params(values)
	reference = qubit_dephasing_gp(q)
	model = qubit_dephasing_model(q.eta, q.Lambda)
	rho0 = qubit_dephasing_initial_state(q.theta0)
	lines = ['n_step,gamma,reference,error']
	errors = []
	for n_step in args.n_steps:
		gamma = geometric_phase(evolve(model, rho0, q.tau, n_step, materialize=False)).gamma
		error = abs(np.angle(np.exp(1j * (gamma - reference))))
		errors.append(error)
		lines.append(f'{n_step},{_fmt(gamma)},{_fmt(reference)},{_fmt(error)}')
	if len(errors) > 1 and all(error > 0 for error in errors):
		slope = np.polyfit(np.log(args.n_steps), np.log(errors), 1)[0]
		logger.info(f'log-log error slope {slope:.2f}')
	return lines


def run_mzi(args: argparse.Namespace, values: dict[str, Any]) -> list[str]:
	p = build_vdp_params(values)
	results = visibility_series(adiabatic_initial_state(p), build_lab_frame_model(p), args.taus, args.n_sub)
	lines = ['tau,visibility,phase,flag']
	for tau, result in zip(args.taus, results):
		if result is None:
			lines.append(f'{_fmt(tau)},,,ill-conditioned')
		else:
			lines.append(f'{_fmt(tau)},{_fmt(result.visibility)},{_fmt(result.phase)},')
	return lines


def run_oracle(args: argparse.Namespace, values: dict[str, Any]) -> list[str]:
	if args.name == 'blockade-ratio':
		return [f'{blockade_ratio():.4f}']
	if args.name == 'qubit-gp':
		return [_fmt(qubit_dephasing_gp(build_qubit_params(values)))]

	p: VdpParams = build_vdp_params(values)
	populations = vdp_populations(p.gamma_g, p.gamma_d)
	coherences = vdp_coherences(p.gamma_g, p.gamma_d, p.detuning, p.phi_sig)
	if args.name == 'populations':
		return [','.join(_fmt(value) for value in populations)]
	if args.name == 'coherences':
		return [','.join(f'{_fmt(c.real)}{c.imag:+.17g}j' for c in coherences)]
	if args.name == 'sync-measure':
		return [f'{_fmt(sync_measure_closed_form(p.T, coherences))},{_fmt(sync_phase_closed_form(coherences))}']
	if args.name == 'gp-no-signal':
		return [_fmt(gp_no_signal(p.alpha, populations, p.omega))]
	if args.name == 'gp-cyclic':
		return [_fmt(gp_cyclic_with_signal(p))]
	if args.name == 'gp-periodic':
		return [_fmt(gp_periodic_orbit(p))]
	return [_fmt(gp_noncyclic(p))]


COMMANDS: dict[str, Callable[[argparse.Namespace, dict[str, Any]], list[str]]] = {
	'gp': run_gp,
	'tongue': run_tongue,
	'benchmark-qubit': run_benchmark,
	'mzi': run_mzi,
	'oracle': run_oracle,
}


def main(argv: list[str] | None = None) -> int:
	parser = build_parser()
	try:
		args, extra = parser.parse_known_args(argv)
		values = _settings(args, extra)
		if args.command != 'tongue':
			values.pop('threads', None)
		lines = COMMANDS[args.command](args, values)
		if lines:
			_write(lines, args.out)
	except ConfigError as exc:
		logger.error(f'Usage error: {exc}')
		return EXIT_USAGE
	except NumericalError as exc:
		logger.error(f'Numerical failure: {exc}')
		return EXIT_NUMERICAL
	except (GpSyncError, OSError) as exc:
		logger.error(str(exc))
		return EXIT_USAGE
	return EXIT_OK


if __name__ == '__main__':
	sys.exit(main())
