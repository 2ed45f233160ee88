import numpy as np
import pytest

from gpsync.evolver.service import evolve, steady_state
from gpsync.exceptions import IllConditionedPhase
from gpsync.mzi.service import visibility_and_phase, visibility_closed_form
from gpsync.oracles.service import (
	blockade_ratio,
	gp_cyclic_with_signal,
	gp_no_signal,
	gp_noncyclic,
	gp_periodic_orbit,
	qubit_dephasing_gp,
	qubit_dephasing_initial_state,
	qubit_dephasing_model,
	steady_state_closed_form,
	sync_measure_closed_form,
	vdp_populations,
)
from gpsync.phase.service import geometric_phase
from gpsync.spin.service import sync_measure_numeric
from gpsync.sweep.service import emit_csv, point_params, run_sweep
from gpsync.sweep.views import SweepConfig, SweepMode
from gpsync.vdp.service import adiabatic_initial_state, build_lab_frame_model, build_rwa_model

pytestmark = pytest.mark.integration


def _numeric_gp(p) -> float:
	trajectory = evolve(build_lab_frame_model(p), adiabatic_initial_state(p), p.duration, p.n_step, materialize=False)
	return geometric_phase(trajectory).gamma


def test_dephasing_qubit_converges_at_fourth_order(qubit_params):
	reference = qubit_dephasing_gp(qubit_params)
	model = qubit_dephasing_model(qubit_params.eta, qubit_params.Lambda)
	rho0 = qubit_dephasing_initial_state(qubit_params.theta0)
	n_steps = [200, 400, 800, 1600, 3200]
	errors = []
	for n_step in n_steps:
		gamma = geometric_phase(evolve(model, rho0, qubit_params.tau, n_step, materialize=False)).gamma
		errors.append(abs(np.angle(np.exp(1j * (gamma - reference)))))
	slope = np.polyfit(np.log(n_steps), np.log(errors), 1)[0]
	assert -4.5 <= slope <= -3.5


@pytest.mark.parametrize('T', [0.01, 0.05])
@pytest.mark.parametrize('delta', [0.0, 0.1])
@pytest.mark.parametrize('gamma_g', [0.5, 2.8439])
def test_sync_measure_of_exact_steady_state(tongue_params, T, delta, gamma_g):
	base = tongue_params.model_copy(update={'gamma_g': gamma_g, 'omega': 0.0})
	p = point_params(base, delta, T)
	value, _ = sync_measure_numeric(steady_state(build_rwa_model(p)))
	closed = steady_state_closed_form(gamma_g, 1.0, delta, 0.0)
	expected = sync_measure_closed_form(T, (closed.c_plus1_0, closed.c_0_minus1))
	assert abs(value - expected) <= max(1e-8, 10 * T**2)


def test_first_order_state_at_blockade_has_flat_phase_distribution():
	ratio = blockade_ratio()
	state = steady_state_closed_form(ratio, 1.0, 0.0, 0.0)
	assert abs(state.c_plus1_0 + state.c_0_minus1) <= 1e-12
	for T in (0.1, 0.5):
		value, _ = sync_measure_numeric(state.density_matrix(T))
		assert value <= 1e-12


def test_sweep_output_does_not_depend_on_thread_count(tmp_path, tongue_params):
	cfg = SweepConfig(n_delta=3, n_t=3, mode=SweepMode.GP_ANALYTIC, base=tongue_params)
	paths = [emit_csv(run_sweep(cfg.model_copy(update={'threads': n})), tmp_path / f'{n}.csv') for n in (1, 3)]
	assert paths[0].read_bytes() == paths[1].read_bytes()


def test_driven_lab_frame_trajectory_stays_physical(tongue_params):
	p = tongue_params.model_copy(update={'T': 0.3, 'tau': 40.0, 'n_step': 4000})
	trajectory = evolve(build_lab_frame_model(p), adiabatic_initial_state(p), p.duration, p.n_step)
	traces = np.trace(trajectory.states, axis1=1, axis2=2)
	np.testing.assert_allclose(traces, 1.0, atol=1e-10)
	assert np.linalg.eigvalsh(trajectory.states).min() >= -1e-10


def test_interferometer_visibility_matches_closed_form_and_decays(adiabatic_params):
	p = adiabatic_params.model_copy(update={'omega': 0.0, 'tau': 1.0})
	populations = vdp_populations(p.gamma_g, p.gamma_d)
	model = build_lab_frame_model(p)
	for tau in (0.5, 5.0, 50.0):
		result = visibility_and_phase(np.diag(populations), model, tau)
		expected = visibility_closed_form(p.omega0, p.gamma_g, p.gamma_d, populations, tau)
		assert result.visibility == pytest.approx(abs(expected), abs=1e-8)
	threshold = 20 / min(p.gamma_d, p.gamma_g / 2)
	for tau in (threshold, 1.2 * threshold):
		assert visibility_and_phase(np.diag(populations), model, tau).visibility < 1e-3


def test_interferometer_loses_the_full_cycle_phase(adiabatic_params):
	"""Over one slow rotation the visibility collapses while the geometric phase stays finite."""
	rho0 = adiabatic_initial_state(adiabatic_params)
	model = build_lab_frame_model(adiabatic_params)
	with pytest.raises(IllConditionedPhase):
		visibility_and_phase(rho0, model, adiabatic_params.duration)
	expected = gp_no_signal(adiabatic_params.alpha, vdp_populations(adiabatic_params.gamma_g, adiabatic_params.gamma_d))
	assert abs(expected) > 0.1


@pytest.mark.slow
@pytest.mark.parametrize('alpha', [np.pi / 8, np.pi / 4, 3 * np.pi / 8])
def test_geometric_phase_of_slow_rotation(adiabatic_params, alpha):
	p = adiabatic_params.model_copy(update={'alpha': alpha})
	forward = _numeric_gp(p)
	backward = _numeric_gp(p.model_copy(update={'omega': -p.omega}))
	assert abs(forward + backward) <= 2e-2
	assert abs(np.angle(np.exp(1j * (forward - gp_cyclic_with_signal(p))))) <= 2e-2


@pytest.mark.slow
def test_blockade_suppresses_the_phase_tongue(tongue_params):
	def spread(gamma_g: float) -> float:
		base = tongue_params.model_copy(update={'gamma_g': gamma_g, 'n_step': 20_000})
		table = run_sweep(SweepConfig(mode=SweepMode.GP_NUMERIC, base=base, threads='auto'))
		_, _, values = table.grid()
		return float(np.nanmax(np.abs(values - values[0][None, :])))

	assert spread(0.5) > 10 * spread(blockade_ratio())


@pytest.mark.slow
def test_undriven_linecut_point_matches_periodic_orbit(tongue_params):
	p = tongue_params.model_copy(update={'n_step': 20_000})
	assert abs(np.angle(np.exp(1j * (_numeric_gp(p) - gp_periodic_orbit(p))))) <= 1e-3


@pytest.mark.slow
@pytest.mark.parametrize(('T', 'bound'), [(0.1, 0.25), (0.2, 0.05)])
def test_drive_precession_moves_linecut_towards_numeric_phase(tongue_params, T, bound):
	"""The first-order formula misses the secular drive phase that grows with ω̃τ."""
	p = tongue_params.model_copy(update={'T': T, 'n_step': 20_000})
	numeric = _numeric_gp(p)

	def miss(value: float) -> float:
		return abs(np.angle(np.exp(1j * (numeric - value))))

	corrected = miss(gp_noncyclic(p, precession=True))
	assert corrected < miss(gp_noncyclic(p))
	assert corrected <= bound


@pytest.mark.slow
def test_resonant_drive_alone_leaves_the_precession_phase(tongue_params):
	p = tongue_params.model_copy(
		update={'omega0': 5.0, 'omega_sig': 5.0, 'omega': 0.0, 'T': 0.05, 'tau': 40.0, 'n_step': 20_000}
	)
	numeric = _numeric_gp(p)
	assert gp_noncyclic(p) == pytest.approx(0.0, abs=1e-12)
	assert abs(numeric) > 0.05
	assert abs(np.angle(np.exp(1j * (numeric - gp_noncyclic(p, precession=True))))) <= 1e-2
