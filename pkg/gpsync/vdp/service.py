import logging

import numpy as np
from scipy import linalg

from gpsync.evolver.service import steady_state
from gpsync.evolver.views import LindbladModel
from gpsync.spin.service import AxisRotation, spin_operators
from gpsync.vdp.views import VdpParams

logger = logging.getLogger(__name__)


def vdp_jump_operators(gamma_g: float, gamma_d: float) -> list[np.ndarray]:
	"""Gain Γ1 = sqrt(γg/2)(√2 Sz S+ - S+ Sz) and damping Γ2 = sqrt(γd/2) S-²."""
	ops = spin_operators(1)
	gain = np.sqrt(gamma_g / 2) * (np.sqrt(2) * ops.sz @ ops.splus - ops.splus @ ops.sz)
	damping = np.sqrt(gamma_d / 2) * ops.sminus @ ops.sminus
	return [gain, damping]


def build_lab_frame_model(p: VdpParams) -> LindbladModel:
	"""Lab-frame model: every operator conjugated by the axis rotation R(t)."""
	ops = spin_operators(1)
	rotate = AxisRotation(p.axis, ops)
	jumps = vdp_jump_operators(p.gamma_g, p.gamma_d)
	bare = p.omega0 * ops.sz

	def operators_at(t: float) -> tuple[np.ndarray, list[np.ndarray]]:
		r = rotate(t)
		r_dag = r.conj().T
		hamiltonian = bare + p.T * np.cos(p.omega_sig * t + p.phi_sig) * ops.sx if p.T else bare
		return r @ hamiltonian @ r_dag, [r @ jump @ r_dag for jump in jumps]

	return LindbladModel(
		dim=3,
		hamiltonian_at=lambda t: operators_at(t)[0],
		jump_operators_at=lambda t: operators_at(t)[1],
		fused_operators_at=operators_at,
		time_dependent=p.omega != 0 or p.T != 0,
	)


def rwa_hamiltonian(p: VdpParams) -> np.ndarray:
	ops = spin_operators(1)
	shift = p.omega0 - p.omega_sig + p.omega * np.cos(p.alpha)
	drive = np.exp(-1j * p.phi_sig) * ops.splus + np.exp(1j * p.phi_sig) * ops.sminus
	return shift * ops.sz + (p.T / 4) * drive


def build_rwa_model(p: VdpParams) -> LindbladModel:
	"""Time-independent model in the frame co-rotating with axis and drive."""
	return LindbladModel.constant(rwa_hamiltonian(p), vdp_jump_operators(p.gamma_g, p.gamma_d))


def build_corotating_model(p: VdpParams) -> LindbladModel:
	"""Model for χ = R(t)† ρ R(t): H' = ω₀Sz - ω n·S plus the drive, with unrotated jumps.

	Exact transformation of the lab-frame model; time-independent without a drive.
	"""
	ops = spin_operators(1)
	nx, _, nz = p.axis.direction
	static = p.omega0 * ops.sz - p.omega * (nx * ops.sx + nz * ops.sz)
	jumps = vdp_jump_operators(p.gamma_g, p.gamma_d)
	if not p.T:
		return LindbladModel.constant(static, jumps)
	return LindbladModel(
		dim=3,
		hamiltonian_at=lambda t: static + p.T * np.cos(p.omega_sig * t + p.phi_sig) * ops.sx,
		jump_operators_at=lambda t: jumps,
		time_dependent=True,
	)


def axis_tilt(p: VdpParams) -> float:
	"""β = ω sin α / (ω₀ - ω cos α), the tilt of the effective quantization axis."""
	return p.omega * np.sin(p.alpha) / (p.omega0 - p.omega * np.cos(p.alpha))


def adiabatic_initial_state(p: VdpParams) -> np.ndarray:
	"""ρ(0) for lab-frame runs that start on the periodic orbit.

	Without a drive this is the exact co-rotating steady state. The drive adds
	its RWA response, tilted onto the effective axis.
	"""
	if p.omega * np.cos(p.alpha) >= p.omega0:
		logger.warning('Axis rotation is not slow compared to omega0; adiabatic initial state is unreliable')
	undriven = p.model_copy(update={'T': 0.0})
	rho = steady_state(build_corotating_model(undriven))
	if p.T:
		tilt = linalg.expm(1j * axis_tilt(p) * spin_operators(1).sy)
		response = steady_state(build_rwa_model(p)) - steady_state(build_rwa_model(undriven))
		rho = rho + tilt @ response @ tilt.conj().T
	return 0.5 * (rho + rho.conj().T)
