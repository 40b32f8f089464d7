"""Sweep configuration, validation, and deterministic CSV emission."""

from __future__ import annotations

import math
import os
import time

import numpy as np
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable

from . import __version__
from .baselines import ci_helstrom, ci_roc, ci_roc_analytic, ng_lower_bound
from .cd_module import asymptotics, finite_exponent, pcd_exact, pcd_largeM, pcd_poisson_threshold
from .discrimination import qcb_diagonal
from .fading import rayleigh_achievable, rayleigh_lower_bound
from .photon_stats import Fixed, Rayleigh, ScenarioParams


class ValidationError(ValueError):
    """Configuration rejected before any computation ran."""


class NonConvergenceError(RuntimeError):
    """A numerical routine failed to meet its convergence criterion."""


def _q_pcd_exact(p: ScenarioParams) -> dict:
    res = pcd_exact(p)
    if res.meta and not res.meta.get("converged", True):
        raise NonConvergenceError(f"pcd_exact quadrature did not converge at m={p.m}")
    return {"log_pcd_exact": res.log_p_error, "pcd_exact_nodes": res.meta["n_nodes"]}


def _q_pcd_largeM(p: ScenarioParams) -> dict:
    res = pcd_largeM(p)
    return {"log_pcd_largeM": res.log_p_error, "threshold": res.optimal_threshold}


def _q_pcd_asy(p: ScenarioParams) -> dict:
    return {"log_pcd_asy": asymptotics(p).log_p_asy}


def _q_threshold(p: ScenarioParams) -> dict:
    return {"threshold": pcd_largeM(p).optimal_threshold}


def _q_qcb(p: ScenarioParams) -> dict:
    from .cd_module import hypothesis_pmfs

    absent, present = hypothesis_pmfs(p, 2.0 * p.m)
    return {"log_qcb": qcb_diagonal(absent, present).log_p_error}


def _q_ng(p: ScenarioParams) -> dict:
    return {"log_ng": ng_lower_bound(p).log_p_error}


def _q_ci_helstrom(p: ScenarioParams) -> dict:
    return {"log_ci_helstrom": ci_helstrom(p).log_p_error}


def _q_ci_roc(p: ScenarioParams) -> dict:
    return {"log_ci_roc": ci_roc(p).log_p_error}


def _q_ci_roc_analytic(p: ScenarioParams) -> dict:
    return {"log_ci_roc_analytic": ci_roc_analytic(p).log_p_error}


def _q_rayleigh_lb(p: ScenarioParams) -> dict:
    return {"log_rayleigh_lb": rayleigh_lower_bound(p).log_p_error}


def _q_rayleigh_achievable(p: ScenarioParams) -> dict:
    return {"log_rayleigh_achievable": rayleigh_achievable(p).log_p_error}


def _q_exponents(p: ScenarioParams) -> dict:
    asy = asymptotics(p)
    lm = pcd_largeM(p)
    return {
        "r_finite_pcd": finite_exponent(lm.log_p_error, p.m),
        "r_finite_asy": asy.r_finite,
        "r_asy": asy.r_asy,
    }


#: quantity name -> (evaluator, {"fixed", "rayleigh"} models it supports)
QUANTITIES: dict[str, tuple[Callable[[ScenarioParams], dict], frozenset[str]]] = {
    "pcd_exact": (_q_pcd_exact, frozenset({"fixed"})),
    "pcd_largeM": (_q_pcd_largeM, frozenset({"fixed"})),
    "pcd_asy": (_q_pcd_asy, frozenset({"fixed"})),
    "threshold": (_q_threshold, frozenset({"fixed"})),
    "qcb": (_q_qcb, frozenset({"fixed"})),
    "ng": (_q_ng, frozenset({"fixed"})),
    "ci_helstrom": (_q_ci_helstrom, frozenset({"fixed", "rayleigh"})),
    "ci_roc": (_q_ci_roc, frozenset({"fixed", "rayleigh"})),
    "ci_roc_analytic": (_q_ci_roc_analytic, frozenset({"fixed", "rayleigh"})),
    "rayleigh_lb": (_q_rayleigh_lb, frozenset({"rayleigh"})),
    "rayleigh_achievable": (_q_rayleigh_achievable, frozenset({"rayleigh"})),
    "exponents": (_q_exponents, frozenset({"fixed"})),
}


@dataclass(frozen=True)
class SweepSpec:
    """One sweep: a scenario, an M grid, and the quantities to evaluate."""

    scenario: ScenarioParams  # the m field is a placeholder, overridden per row
    m_grid: tuple[int, ...]
    quantities: tuple[str, ...]
    output_path: str

    def validate(self) -> None:
        if not self.quantities:
            raise ValidationError("quantities set is empty")
        if not self.m_grid:
            raise ValidationError("m_grid is empty")
        if any(b <= a for a, b in zip(self.m_grid, self.m_grid[1:])):
            raise ValidationError("m_grid must be strictly increasing")
        if any(m < 1 for m in self.m_grid):
            raise ValidationError("m_grid entries must be positive integers")
        model = "fixed" if isinstance(self.scenario.reflectivity, Fixed) else "rayleigh"
        problems = []
        for name in self.quantities:
            if name not in QUANTITIES:
                problems.append(f"unknown quantity {name!r} (valid: {sorted(QUANTITIES)})")
            elif model not in QUANTITIES[name][1]:
                problems.append(f"quantity {name!r} requires a {'/'.join(sorted(QUANTITIES[name][1]))} reflectivity model, scenario uses {model}")
        if problems:
            raise ValidationError("; ".join(problems))


def _worker_count() -> int:
    env = os.environ.get("QI_CD_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _timestamp() -> str:
    # Reproducible-build convention: SOURCE_DATE_EPOCH pins the clock.
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    t = int(epoch) if epoch else int(time.time())
    return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime(t))


def scenario_header_lines(params: ScenarioParams, extra: dict | None = None) -> list[str]:
    refl = params.reflectivity
    if isinstance(refl, Fixed):
        refl_desc = f"fixed kappa={refl.kappa!r}"
    else:
        refl_desc = f"rayleigh kappa_bar={refl.kappa_bar!r}"
    lines = [
        f"# qicd {__version__}",
        f"# generated {_timestamp()}",
        f"# n_s={params.n_s!r} n_e={params.n_e!r} reflectivity={refl_desc} phase=uniform",
    ]
    for key, val in (extra or {}).items():
        lines.append(f"# {key}={val}")
    return lines


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        # Plain-float repr (shortest round-trip form), never the numpy one.
        return repr(float(value))
    return str(value)


def write_csv(path: Path, header_lines: Iterable[str], columns: list[str], rows: Iterable[dict]) -> None:
    """Deterministic CSV: '#'-prefixed provenance comments, then data."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for line in header_lines:
            fh.write(line + "\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_format_cell(row.get(c)) for c in columns) + "\n")
            fh.flush()  # interruption keeps completed rows


def evaluate_row(scenario: ScenarioParams, m: int, quantities: tuple[str, ...]) -> dict:
    params = scenario.with_m(m)
    row: dict = {"m": m}
    for name in quantities:
        row.update(QUANTITIES[name][0](params))
    return row


def run_sweep(spec: SweepSpec, linear: bool = False) -> Path:
    """Evaluate the sweep and emit one CSV row per grid point, in order.

    Rows are computed concurrently (capped by QI_CD_THREADS) but emitted
    in m-order, so the output is identical for any worker count.
    """
    spec.validate()
    with ThreadPoolExecutor(max_workers=_worker_count()) as pool:
        futures = [
            pool.submit(evaluate_row, spec.scenario, m, spec.quantities)
            for m in spec.m_grid
        ]
        rows = [f.result() for f in futures]
    columns: list[str] = ["m"]
    for row in rows:
        for key in row:
            if key not in columns:
                columns.append(key)
    if linear:
        for col in [c for c in columns if c.startswith("log_")]:
            lin = col[4:]
            columns.append(lin)
            for row in rows:
                if col in row:
                    row[lin] = math.exp(row[col])
    path = Path(spec.output_path)
    header = scenario_header_lines(
        spec.scenario,
        {"quantities": " ".join(spec.quantities), "m_grid_points": len(spec.m_grid)},
    )
    write_csv(path, header, columns, rows)
    return path
