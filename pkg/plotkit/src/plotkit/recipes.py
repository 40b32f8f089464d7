"""The seven figure recipes: which CSVs, which columns, which styles."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .csvio import Table
from .style import PLOT_FLOOR, SERIES_STYLES


def _floored(log_values: np.ndarray) -> tuple[np.ndarray, bool]:
    """Exponentiate natural-log data onto a linear-log axis safely."""
    log_floor = math.log(PLOT_FLOOR)
    clipped = bool(np.any(log_values < log_floor))
    return np.exp(np.maximum(log_values, log_floor)), clipped


def add_log_series(ax, x, table: Table, column: str, style: str, label: str) -> None:
    y, clipped = _floored(table.column(column))
    if clipped:
        label = f"{label} (clipped at {PLOT_FLOOR:g})"
    ax.plot(x, y, label=label, **SERIES_STYLES[style])


@dataclass(frozen=True)
class FigureRecipe:
    """Inputs and draw routine behind one rendered figure."""

    figure_id: str
    inputs: tuple[str, ...]  # CSV file names looked up in the data directory
    optional_inputs: tuple[str, ...]
    draw: Callable[[object, dict[str, Table]], None]


def _draw_fig1(fig, tables):
    thr = tables["fig1_threshold.csv"]
    err = tables["fig1_error.csv"]
    ax_top, ax_bot = fig.subplots(2, 1, sharex=True, height_ratios=[1, 2])
    ax_top.step(thr.column("m"), thr.column("threshold"), where="post",
                **SERIES_STYLES["conversion"])
    ax_top.set_ylabel("optimal threshold $N$")
    ax_top.set_yticks([0, 1, 2, 3])
    m = err.column("m")
    add_log_series(ax_bot, m, err, "log_pcd_largeM", "conversion", "receiver optimum")
    for n in (0, 1, 2):
        add_log_series(ax_bot, m, err, f"log_poisson_N{n}", f"threshold_{n}",
                       f"Poisson, $N={n}$")
        add_log_series(ax_bot, m, err, f"log_exact_N{n}", f"threshold_{n}_dot",
                       f"exact, $N={n}$")
    ax_bot.set_xscale("log")
    ax_bot.set_yscale("log")
    ax_bot.set_xlabel("$M$")
    ax_bot.set_ylabel("error probability")
    ax_bot.legend(ncols=2)


def _draw_fig2a(fig, tables):
    t = tables["fig2a.csv"]
    ax = fig.subplots()
    m = t.column("m")
    add_log_series(ax, m, t, "log_pcd_largeM", "conversion", "conversion receiver")
    add_log_series(ax, m, t, "log_pcd_asy", "conversion_alt", "asymptote")
    add_log_series(ax, m, t, "log_qcb", "qcb", "Chernoff bound")
    add_log_series(ax, m, t, "log_ng", "lower_bound", "fundamental lower bound")
    add_log_series(ax, m, t, "log_ci_helstrom", "ci", "classical illumination")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("$M$")
    ax.set_ylabel("error probability")
    ax.legend()


def _draw_fig2b(fig, tables):
    t = tables["fig2b.csv"]
    ax = fig.subplots()
    m = t.column("m")
    ax.plot(m, t.column("r_pcd_over_2xi"), label="receiver",
            **SERIES_STYLES["conversion"])
    ax.plot(m, t.column("r_asy_finite_over_2xi"), label="asymptote (finite $M$)",
            **SERIES_STYLES["conversion_alt"])
    ax.plot(m, t.column("r_qcb_over_2xi"), label="Chernoff", **SERIES_STYLES["qcb"])
    ax.plot(m, t.column("r_asy_over_2xi"), label="limit", **SERIES_STYLES["reference"])
    ax.set_xscale("log")
    ax.set_xlabel("$M$")
    ax.set_ylabel(r"$-\ln P\,/\,(2\xi M)$")
    ax.legend()


def _draw_fig2c(fig, tables):
    t = tables["fig2c.csv"]
    ax = fig.subplots()
    n_s = t.column("n_s")
    ax.plot(n_s, t.column("r_asy_over_r_ci"), label="receiver / CI",
            **SERIES_STYLES["conversion"])
    ax.plot(n_s, t.column("r_qcb_over_r_ci"), label="Chernoff / CI",
            **SERIES_STYLES["qcb"])
    ax.plot(n_s, t.column("six_db_reference"), label="6 dB reference",
            **SERIES_STYLES["reference"])
    ax.set_xscale("log")
    ax.set_xlabel("$n_s$")
    ax.set_ylabel("error-exponent ratio")
    ax.legend()


def _draw_fig5(fig, tables):
    t = tables["fig5.csv"]
    ax = fig.subplots()
    m = t.column("m")
    add_log_series(ax, m, t, "log_rayleigh_achievable", "conversion", "achievable")
    add_log_series(ax, m, t, "log_rayleigh_lb", "lower_bound_alt", "lower bound")
    add_log_series(ax, m, t, "log_ci_helstrom", "ci", "classical illumination")
    sfg = tables.get("fig5_overlay.csv")
    if sfg is not None:
        add_log_series(ax, sfg.column("m"), sfg, "log_p", "ci_alt2", "overlay")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("$M$")
    ax.set_ylabel("error probability")
    ax.legend()


def _draw_fig7(fig, tables):
    axes = fig.subplots(1, 2, sharey=True)
    for ax, name, title in (
        (axes[0], "fig7_fixed.csv", "fixed reflectivity"),
        (axes[1], "fig7_rayleigh.csv", "Rayleigh fading"),
    ):
        t = tables[name]
        m = t.column("m")
        add_log_series(ax, m, t, "log_ci_helstrom", "ci", "Helstrom")
        add_log_series(ax, m, t, "log_ci_roc", "conversion_alt", "counting ROC")
        add_log_series(ax, m, t, "log_ci_roc_analytic", "ci_alt2", "continuum ROC")
        ax.set_xscale("log")
        ax.set_yscale("log")
        ax.set_xlabel("$M$")
        ax.set_title(title)
        ax.legend()
    axes[0].set_ylabel("error probability")


def _draw_fig8(fig, tables):
    t = tables["fig8.csv"]
    ax_top, ax_bot = fig.subplots(2, 1, sharex=True, height_ratios=[2, 1])
    m = t.column("m")
    add_log_series(ax_top, m, t, "log_pcd_exact", "conversion", "exact")
    add_log_series(ax_top, m, t, "log_pcd_largeM", "ci_alt", "approximated")
    ax_top.set_yscale("log")
    ax_top.set_ylabel("error probability")
    max_dev = t.comment_value("max_rel_deviation")
    if max_dev is not None:
        ax_top.set_title(f"max relative deviation {float(max_dev):.2e}")
    ax_top.legend()
    ax_bot.plot(m, t.column("rel_deviation"), **SERIES_STYLES["qcb"])
    ax_bot.set_xscale("log")
    ax_bot.set_yscale("log")
    ax_bot.set_xlabel("$M$")
    ax_bot.set_ylabel("relative deviation")


RECIPES: dict[str, FigureRecipe] = {
    "fig1": FigureRecipe("fig1", ("fig1_threshold.csv", "fig1_error.csv"), (), _draw_fig1),
    "fig2a": FigureRecipe("fig2a", ("fig2a.csv",), (), _draw_fig2a),
    "fig2b": FigureRecipe("fig2b", ("fig2b.csv",), (), _draw_fig2b),
    "fig2c": FigureRecipe("fig2c", ("fig2c.csv",), (), _draw_fig2c),
    "fig5": FigureRecipe("fig5", ("fig5.csv",), ("fig5_overlay.csv",), _draw_fig5),
    "fig7": FigureRecipe("fig7", ("fig7_fixed.csv", "fig7_rayleigh.csv"), (), _draw_fig7),
    "fig8": FigureRecipe("fig8", ("fig8.csv",), (), _draw_fig8),
}
