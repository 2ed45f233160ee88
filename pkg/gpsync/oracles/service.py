import logging

import numpy as np

from gpsync.evolver.service import steady_state
from gpsync.evolver.views import LindbladModel
from gpsync.exceptions import ParameterError
from gpsync.oracles.views import QubitDephasingParams, RwaSteadyState
from gpsync.spin.service import pauli_operators, rotation_operator, spin_operators
from gpsync.utils import wrap_phase
from gpsync.vdp.service import build_corotating_model
from gpsync.vdp.views import VdpParams

logger = logging.getLogger(__name__)

SQRT2 = np.sqrt(2.0)
SYNC_PREFACTOR = 3 / (8 * SQRT2)
POLE_STATE_TOL = 1e-12


def vdp_populations(gamma_g: float, gamma_d: float) -> tuple[float, float, float]:
	"""(p_{+1}, p_0, p_{-1}) of the undriven oscillator."""
	norm = 3 * gamma_d + gamma_g
	return gamma_g / norm, gamma_d / norm, 2 * gamma_d / norm


def vdp_coherences(gamma_g: float, gamma_d: float, Delta: float, phi_sig: float) -> tuple[complex, complex]:
	"""(c_{+1,0}, c_{0,-1}) per unit signal strength."""
	prefactor = -1j * np.exp(-1j * phi_sig)
	a = prefactor * (
		(4 + 3 * SQRT2) * gamma_g * gamma_d - 2j * SQRT2 * gamma_d * Delta - SQRT2 * gamma_g * (3 * gamma_g - 2j * Delta)
	)
	b = 4 * (3 * gamma_d + gamma_g) * (gamma_d + gamma_g - 1j * Delta) * (3 * gamma_g - 2j * Delta)
	c_plus1_0 = a / b
	c_0_minus1 = prefactor * gamma_d / (SQRT2 * (3 * gamma_d + gamma_g) * (3 * gamma_g - 2j * Delta))
	return complex(c_plus1_0), complex(c_0_minus1)


def steady_state_closed_form(gamma_g: float, gamma_d: float, Delta: float, phi_sig: float) -> RwaSteadyState:
	p_plus1, p_0, p_minus1 = vdp_populations(gamma_g, gamma_d)
	c_plus1_0, c_0_minus1 = vdp_coherences(gamma_g, gamma_d, Delta, phi_sig)
	return RwaSteadyState(p_plus1=p_plus1, p_0=p_0, p_minus1=p_minus1, c_plus1_0=c_plus1_0, c_0_minus1=c_0_minus1)


def coherence_asymptotics(gamma: float, gamma_d: float = 1.0, phi_sig: float = 0.0) -> tuple[complex, complex]:
	"""Leading large-γ behaviour of the resonant coherences, γ = γg/γd.

	Without the common factor -i e^{-iφ̃} these are -1/(2√2 γd γ) and 1/(3√2 γd γ²).
	"""
	prefactor = -1j * np.exp(-1j * phi_sig)
	return (
		complex(prefactor * -1 / (2 * SQRT2 * gamma_d * gamma)),
		complex(prefactor / (3 * SQRT2 * gamma_d * gamma**2)),
	)


def sync_measure_closed_form(T: float, coherences: tuple[complex, complex]) -> float:
	if T < 0:
		raise ValueError(f'T must be non-negative, got {T}')
	return float(SYNC_PREFACTOR * T * abs(coherences[0] + coherences[1]))


def sync_phase_closed_form(coherences: tuple[complex, complex]) -> float:
	"""Phase φ at which S(φ) peaks."""
	return float(np.mod(-np.angle(coherences[0] + coherences[1]), 2 * np.pi))


def blockade_ratio() -> float:
	"""γg/γd at which the resonant coherences cancel: positive root of 3γ² - (5+2√2)γ - 2."""
	b = 5 + 2 * SQRT2
	return float((b + np.sqrt(b**2 + 24)) / 6)


def gp_no_signal(alpha: float, populations, omega_sign: float = 1.0) -> float:
	"""arg[p_{+1} e^{2πi cos α} + p_0 + p_{-1} e^{-2πi cos α}] for one full turn."""
	p_plus1, p_0, p_minus1 = populations
	turn = 2 * np.pi * np.sign(omega_sign) * np.cos(alpha)
	z = p_plus1 * np.exp(1j * turn) + p_0 + p_minus1 * np.exp(-1j * turn)
	return wrap_phase(np.angle(z))


def analytic_regime_warnings(p: VdpParams) -> list[str]:
	notices = []
	if abs(p.omega) / p.omega0 > 0.1:
		notices.append(f'omega/omega0 = {abs(p.omega) / p.omega0:.3g} exceeds 0.1')
	if p.T / p.gamma_d >= 1:
		notices.append(f'T/gamma_d = {p.T / p.gamma_d:.3g} is not small')
	if not p.is_cyclic and abs(p.detuning) > 1e-12:
		notices.append(f'noncyclic formula assumes resonance, detuning is {p.detuning:.3g}')
	return notices


def _shifted_state(p: VdpParams) -> RwaSteadyState:
	# the co-rotating axis shifts the detuning seen by the coherences
	shifted = p.detuning - p.omega * np.cos(p.alpha)
	return steady_state_closed_form(p.gamma_g, p.gamma_d, shifted, p.phi_sig)


def _signal_corrections(p: VdpParams, state: RwaSteadyState) -> tuple[float, float]:
	"""√2 T sin α (ω/ω₀) Im c / Δp for the two coherences."""
	scale = SQRT2 * p.T * np.sin(p.alpha) * p.omega / p.omega0
	upper = scale * state.c_plus1_0.imag / (state.p_plus1 - state.p_0)
	lower = scale * state.c_0_minus1.imag / (state.p_0 - state.p_minus1)
	return upper, lower


def _connection_phases(p: VdpParams, state: RwaSteadyState, rotation_angle: float) -> np.ndarray:
	"""-∫<φ_m|dφ_m/dt> dt for m = +1, 0, -1."""
	upper, lower = _signal_corrections(p, state)
	return 1j * np.array(
		[
			rotation_angle * np.cos(p.alpha) + upper,
			lower - upper,
			-rotation_angle * np.cos(p.alpha) - lower,
		]
	)


def _report_regime(p: VdpParams, formula: str) -> None:
	for notice in analytic_regime_warnings(p):
		logger.warning(f'{formula} GP formula outside its regime: {notice}')


def drive_precession_phases(p: VdpParams, tau: float | None = None) -> np.ndarray:
	"""Secular second-order drive phases for m = +1, 0, -1.

	The drive admixes ε₁ = T c₊₀*/(p₊ - p₀) and ε₂ = T c₀₋*/(p₀ - p₋) into the
	eigenvectors, and the signal frame turning them at ω̃ leaves the net phases
	-ω̃τ|ε₁|², ω̃τ(|ε₁|² - |ε₂|²) and ω̃τ|ε₂|². First-order formulas drop these.
	"""
	tau = p.duration if tau is None else tau
	state = _shifted_state(p)
	upper = abs(p.T * state.c_plus1_0 / (state.p_plus1 - state.p_0)) ** 2
	lower = abs(p.T * state.c_0_minus1 / (state.p_0 - state.p_minus1)) ** 2
	return p.omega_sig * tau * np.array([-upper, upper - lower, lower])


def gp_cyclic_with_signal(p: VdpParams, precession: bool = False, warn: bool = True) -> float:
	"""Geometric phase of one full axis rotation with a weak drive.

	`precession` adds the secular second-order drive phases.
	"""
	if warn:
		_report_regime(p, 'Cyclic')
	state = _shifted_state(p)
	rotation_angle = 2 * np.pi * np.sign(p.omega)
	phases = _connection_phases(p, state, rotation_angle)
	if precession:
		phases = phases + 1j * drive_precession_phases(p, p.rotation_period)
	z = np.sum(state.populations * np.exp(phases))
	return wrap_phase(np.angle(z))


def noncyclic_overlaps(p: VdpParams, state: RwaSteadyState, tau: float) -> np.ndarray:
	"""<φ_m(0)|φ_m(τ)> for m = +1, 0, -1 at resonance."""
	half = p.omega * tau / 2
	forward = np.cos(half) - 1j * np.cos(p.alpha) * np.sin(half)
	backward = np.cos(half) + 1j * np.cos(p.alpha) * np.sin(half)
	kick = SQRT2 * 1j * p.T * np.sin(p.alpha) * np.sin(half)
	upper_gap = state.p_plus1 - state.p_0
	lower_gap = state.p_0 - state.p_minus1
	c_upper, c_lower = state.c_plus1_0, state.c_0_minus1

	plus1 = forward * (forward - kick * c_upper / upper_gap)
	zero = (
		np.cos(p.alpha) ** 2
		+ np.sin(p.alpha) ** 2 * np.cos(p.omega * tau)
		- kick * (-forward * np.conj(c_upper) / upper_gap + backward * c_lower / lower_gap)
	)
	minus1 = backward * (backward + kick * np.conj(c_lower) / lower_gap)
	return np.array([plus1, zero, minus1])


def gp_noncyclic(p: VdpParams, tau: float | None = None, precession: bool = False, warn: bool = True) -> float:
	"""Geometric phase after a partial rotation ωτ, resonant drive."""
	tau = p.duration if tau is None else tau
	if warn:
		_report_regime(p, 'Noncyclic')
	if abs(p.omega * tau) < np.pi:
		logger.debug('Noncyclic GP formula is least reliable far from a full rotation')
	state = _shifted_state(p)
	overlaps = noncyclic_overlaps(p, state, tau)
	phases = _connection_phases(p, state, p.omega * tau)
	if precession:
		phases = phases + 1j * drive_precession_phases(p, tau)
	z = np.sum(state.populations * overlaps * np.exp(phases))
	return wrap_phase(np.angle(z))


def gp_periodic_orbit(p: VdpParams, tau: float | None = None) -> float:
	"""Exact geometric phase of the undriven lab-frame model started on its periodic orbit.

	With (p_k, v_k) the eigenpairs of the co-rotating steady state χ, the lab
	state is ρ(t) = R(t) χ R(t)† and

		z = Σ_k p_k <v_k|R(τ)|v_k> exp(iωτ <v_k|n·S|v_k>).

	No expansion in ω/ω₀ is involved.
	"""
	if p.T:
		raise ParameterError(f'the periodic orbit is only stationary without a drive, T = {p.T}')
	tau = p.duration if tau is None else tau
	populations, vectors = np.linalg.eigh(steady_state(build_corotating_model(p)))
	ops = spin_operators(1)
	nx, _, nz = p.axis.direction
	generator = nx * ops.sx + nz * ops.sz
	overlaps = np.einsum('ak,ab,bk->k', vectors.conj(), rotation_operator(p.axis, tau), vectors)
	axial = np.einsum('ak,ab,bk->k', vectors.conj(), generator, vectors).real
	z = np.sum(populations * overlaps * np.exp(1j * p.omega * tau * axial))
	return wrap_phase(np.angle(z))


def qubit_dephasing_model(eta: float, Lambda: float) -> LindbladModel:
	"""H = (η/2)σz with the single jump operator sqrt(Λ/2) σz."""
	_, _, sigma_z = pauli_operators()
	return LindbladModel.constant(0.5 * eta * sigma_z, [np.sqrt(Lambda / 2) * sigma_z])


def qubit_dephasing_initial_state(theta0: float) -> np.ndarray:
	"""Pure state with Bloch vector (sin θ₀, 0, cos θ₀)."""
	sigma_x, _, sigma_z = pauli_operators()
	return 0.5 * (np.eye(2) + np.sin(theta0) * sigma_x + np.cos(theta0) * sigma_z)


def qubit_dephasing_gp(q: QubitDephasingParams) -> float:
	eta, rate, theta0, tau = q.eta, q.Lambda, q.theta0, q.tau
	if min(theta0, np.pi - theta0) < POLE_STATE_TOL:
		# the stationary pole state picks up no geometric phase; the closed form tends to 0 mod 2π
		logger.warning(f'theta0 = {theta0} is a pole state; returning the continuous limit')
		return 0.0

	cos0 = np.cos(theta0)
	# arctan2 equals [arctan(e^{-Λτ} tan θ₀) + π] mod π on (0, π)
	theta_tau = np.arctan2(np.exp(-rate * tau) * np.sin(theta0), cos0)
	pancharatnam = np.exp(-0.5j * eta * tau) * np.cos(theta_tau / 2) * np.cos(theta0 / 2) + np.exp(
		0.5j * eta * tau
	) * np.sin(theta_tau / 2) * np.sin(theta0 / 2)

	root = np.sqrt(cos0**2 + np.sin(theta0) ** 2 * np.exp(-2 * rate * tau))
	ratio = ((1 - cos0) * (root + cos0)) / ((1 + cos0) * (root - cos0))
	connection = eta / (4 * rate) * np.log(ratio)
	return wrap_phase(np.angle(pancharatnam) + connection)
