import logging
from pathlib import Path

import numpy as np
from matplotlib import colormaps
from matplotlib.colors import to_hex

from gpsync.sweep.views import SweepTable

logger = logging.getLogger(__name__)

CELL = 24
MARGIN_LEFT = 70
MARGIN_TOP = 40
MARGIN_BOTTOM = 50
LEGEND_WIDTH = 110
FLAGGED_FILL = '#bfbfbf'


def _number(value: float) -> str:
	return format(float(value), '.6g')


def render_heatmap(table: SweepTable, path: str | Path, colormap: str = 'viridis') -> Path:
	"""Writes a standalone SVG with one rect per grid cell, T increasing upwards."""
	deltas, strengths, values = table.grid()
	cmap = colormaps[colormap]
	finite = values[np.isfinite(values)]
	low, high = (float(finite.min()), float(finite.max())) if finite.size else (0.0, 0.0)
	constant = high == low

	n_t, n_delta = values.shape
	width = MARGIN_LEFT + n_delta * CELL + LEGEND_WIDTH
	height = MARGIN_TOP + n_t * CELL + MARGIN_BOTTOM
	lines = [
		'<?xml version="1.0" encoding="UTF-8"?>',
		f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
		f'<title>{table.mode.value}</title>',
		f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>',
	]
	for i_t in range(n_t):
		y = MARGIN_TOP + (n_t - 1 - i_t) * CELL
		for i_delta in range(n_delta):
			x = MARGIN_LEFT + i_delta * CELL
			value = values[i_t, i_delta]
			if not np.isfinite(value):
				fill = FLAGGED_FILL
			else:
				fraction = 0.5 if constant else (value - low) / (high - low)
				fill = to_hex(cmap(fraction))
			lines.append(f'<rect class="cell" x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="{fill}"/>')

	plot_right = MARGIN_LEFT + n_delta * CELL
	plot_bottom = MARGIN_TOP + n_t * CELL
	text = 'font-family="sans-serif" font-size="11"'
	lines += [
		f'<text x="{MARGIN_LEFT}" y="{plot_bottom + 14}" {text}>{_number(deltas[0])}</text>',
		f'<text x="{plot_right}" y="{plot_bottom + 14}" text-anchor="end" {text}>{_number(deltas[-1])}</text>',
		f'<text x="{(MARGIN_LEFT + plot_right) // 2}" y="{plot_bottom + 34}" text-anchor="middle" {text}>Δ/γd</text>',
		f'<text x="{MARGIN_LEFT - 4}" y="{plot_bottom}" text-anchor="end" {text}>{_number(strengths[0])}</text>',
		f'<text x="{MARGIN_LEFT - 4}" y="{MARGIN_TOP + 10}" text-anchor="end" {text}>{_number(strengths[-1])}</text>',
		f'<text x="16" y="{(MARGIN_TOP + plot_bottom) // 2}" text-anchor="middle" {text} '
		f'transform="rotate(-90 16 {(MARGIN_TOP + plot_bottom) // 2})">T/γd</text>',
	]

	legend_x = plot_right + 20
	if constant:
		lines.append(f'<text x="{legend_x}" y="{MARGIN_TOP + 10}" {text}>constant {_number(low)}</text>')
	else:
		lines += [
			f'<rect x="{legend_x}" y="{MARGIN_TOP}" width="{CELL}" height="{CELL}" fill="{to_hex(cmap(1.0))}"/>',
			f'<text x="{legend_x + CELL + 4}" y="{MARGIN_TOP + 16}" {text}>max {_number(high)}</text>',
			f'<rect x="{legend_x}" y="{MARGIN_TOP + 2 * CELL}" width="{CELL}" height="{CELL}" fill="{to_hex(cmap(0.0))}"/>',
			f'<text x="{legend_x + CELL + 4}" y="{MARGIN_TOP + 2 * CELL + 16}" {text}>min {_number(low)}</text>',
		]
	lines.append('</svg>')

	path = Path(path)
	path.write_text('\n'.join(lines) + '\n', encoding='utf-8')
	logger.debug(f'Wrote {n_delta}x{n_t} heatmap to {path}')
	return path
