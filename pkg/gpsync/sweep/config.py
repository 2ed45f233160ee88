"""Flat `key = value` configuration files and `--key value` overrides."""

import logging
import math
import re
from pathlib import Path
from typing import Any

from dotenv import dotenv_values
from pydantic import BaseModel, ValidationError

from gpsync.exceptions import ConfigError
from gpsync.oracles.views import QubitDephasingParams
from gpsync.sweep.views import SweepConfig
from gpsync.vdp.views import VdpParams

logger = logging.getLogger(__name__)

SWEEP_KEYS = set(SweepConfig.model_fields) - {'base'}
VDP_KEYS = set(VdpParams.model_fields)
QUBIT_KEYS = set(QubitDephasingParams.model_fields)
NONE_WORDS = {'none', 'null', 'cyclic'}
_PI_EXPRESSION = re.compile(r'^\s*([-+]?\d*\.?\d*)\s*\*?\s*pi\s*(?:/\s*(\d+(?:\.\d*)?))?\s*$')


def parse_value(raw: str | None) -> Any:
	"""Converts config text; understands 'none' and multiples of pi such as '3pi/8'."""
	if raw is None:
		return None
	text = raw.strip()
	if text.lower() in NONE_WORDS:
		return None
	match = _PI_EXPRESSION.match(text.lower())
	if match:
		factor = match.group(1)
		factor = 1.0 if factor in ('', '+') else -1.0 if factor == '-' else float(factor)
		divisor = float(match.group(2)) if match.group(2) else 1.0
		return factor * math.pi / divisor
	for number in (int, float):
		try:
			return number(text)
		except ValueError:
			continue
	return text


def load_config_file(path: str | Path) -> dict[str, Any]:
	path = Path(path)
	if not path.is_file():
		raise ConfigError('config', f'file not found: {path}')
	values = dotenv_values(path, interpolate=False)
	logger.debug(f'Loaded {len(values)} keys from {path}')
	return {key.strip(): parse_value(value) for key, value in values.items()}


def parse_overrides(tokens: list[str]) -> dict[str, Any]:
	"""['--gamma-g', '0.1', '--alpha=pi/4'] -> {'gamma_g': 0.1, 'alpha': π/4}."""
	overrides: dict[str, Any] = {}
	index = 0
	while index < len(tokens):
		token = tokens[index]
		if not token.startswith('--') or token == '--':
			raise ConfigError(token, 'expected --key value')
		key = token[2:]
		if '=' in key:
			key, value = key.split('=', 1)
			index += 1
		else:
			if index + 1 >= len(tokens):
				raise ConfigError(key.replace('-', '_'), 'missing value')
			value = tokens[index + 1]
			index += 2
		overrides[key.replace('-', '_')] = parse_value(value)
	return overrides


def _validated(model: type[BaseModel], values: dict[str, Any]) -> BaseModel:
	try:
		return model.model_validate(values)
	except ValidationError as exc:
		error = exc.errors()[0]
		key = '.'.join(str(part) for part in error['loc']) or model.__name__
		raise ConfigError(key, error['msg']) from exc


def check_keys(values: dict[str, Any], allowed: set[str]) -> None:
	for key in values:
		if key not in allowed:
			raise ConfigError(key, 'unknown key')


def build_vdp_params(values: dict[str, Any]) -> VdpParams:
	"""VdpParams from a mixed config; sweep keys are accepted and ignored."""
	check_keys(values, SWEEP_KEYS | VDP_KEYS)
	vdp_values = {key: value for key, value in values.items() if key in VDP_KEYS}
	return _validated(VdpParams, vdp_values)


def build_sweep_config(values: dict[str, Any]) -> SweepConfig:
	check_keys(values, SWEEP_KEYS | VDP_KEYS)
	sweep_values = {key: value for key, value in values.items() if key in SWEEP_KEYS}
	base = build_vdp_params(values)
	return _validated(SweepConfig, {**sweep_values, 'base': base})


def build_qubit_params(values: dict[str, Any]) -> QubitDephasingParams:
	check_keys(values, QUBIT_KEYS)
	return _validated(QubitDephasingParams, values)
