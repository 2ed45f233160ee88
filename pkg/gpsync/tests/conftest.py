import logging

import numpy as np
import pytest

from gpsync.oracles.views import QubitDephasingParams
from gpsync.vdp.views import VdpParams


@pytest.fixture(autouse=True)
def propagate_gpsync_logs(monkeypatch):
	"""Let caplog see records from the package logger."""
	monkeypatch.setattr(logging.getLogger('gpsync'), 'propagate', True)


@pytest.fixture
def rng():
	return np.random.default_rng(20240611)


@pytest.fixture
def random_density_matrix(rng):
	def make(dim: int) -> np.ndarray:
		a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
		rho = a @ a.conj().T
		return rho / np.trace(rho)

	return make


@pytest.fixture
def tongue_params() -> VdpParams:
	"""Tongue parameters: omega0 = gamma_d, tau * omega0 = 200, alpha = π/4, omega = 0.05 gamma_d."""
	return VdpParams(omega0=1.0, gamma_g=0.5, gamma_d=1.0, alpha=np.pi / 4, omega=0.05, T=0.0, omega_sig=1.0, tau=200.0)


@pytest.fixture
def adiabatic_params() -> VdpParams:
	"""Slow full rotation: omega0 = 10 gamma_d, gamma_g = 0.1 gamma_d, omega = 1e-3 omega0."""
	return VdpParams(omega0=10.0, gamma_g=0.1, gamma_d=1.0, alpha=np.pi / 4, omega=0.01, T=0.0, omega_sig=10.0, tau=None)


@pytest.fixture
def qubit_params() -> QubitDephasingParams:
	return QubitDephasingParams(eta=1.0, Lambda=0.2, theta0=np.pi / 4, tau=2 * np.pi)
