"""Versioned series-style map and determinism settings.

Colors follow one fixed convention across every figure: red for the
conversion-module receiver, black for classical illumination, blue for
the Chernoff bound, green and purple for the lower bounds.
"""

from __future__ import annotations

STYLE_VERSION = "1"

#: Linear-log axes cannot represent the deepest log-domain values; series
#: are clipped here and the clipping is flagged in the legend.
PLOT_FLOOR = 1e-40

SERIES_STYLES: dict[str, dict] = {
    "conversion": {"color": "#c62828", "linestyle": "-", "linewidth": 1.8},
    "conversion_alt": {"color": "#c62828", "linestyle": "--", "linewidth": 1.4},
    "ci": {"color": "#000000", "linestyle": "-", "linewidth": 1.6},
    "ci_alt": {"color": "#000000", "linestyle": "--", "linewidth": 1.2},
    "ci_alt2": {"color": "#616161", "linestyle": ":", "linewidth": 1.4},
    "qcb": {"color": "#1565c0", "linestyle": "-", "linewidth": 1.6},
    "lower_bound": {"color": "#2e7d32", "linestyle": "-.", "linewidth": 1.4},
    "lower_bound_alt": {"color": "#6a1b9a", "linestyle": "--", "linewidth": 1.4},
    "reference": {"color": "#000000", "linestyle": ":", "linewidth": 1.0},
    # Dashed/dotted per-threshold overlays, dark to light.
    "threshold_0": {"color": "#4a148c", "linestyle": "--", "linewidth": 1.1},
    "threshold_1": {"color": "#7b1fa2", "linestyle": "--", "linewidth": 1.1},
    "threshold_2": {"color": "#ba68c8", "linestyle": "--", "linewidth": 1.1},
    "threshold_0_dot": {"color": "#4a148c", "linestyle": ":", "linewidth": 1.4},
    "threshold_1_dot": {"color": "#7b1fa2", "linestyle": ":", "linewidth": 1.4},
    "threshold_2_dot": {"color": "#ba68c8", "linestyle": ":", "linewidth": 1.4},
}

RC_PARAMS = {
    "figure.figsize": (6.0, 4.2),
    "figure.dpi": 120,
    "font.size": 10,
    "font.family": "DejaVu Sans",
    "axes.grid": True,
    "grid.alpha": 0.25,
    "legend.fontsize": 8,
    "legend.framealpha": 0.9,
    # Determinism: fixed hash salt for SVG ids.
    "svg.hashsalt": "plotkit",
    "path.simplify": False,
}
