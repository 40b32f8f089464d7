"""Classical-illumination benchmarks and the Nair-Gu lower bound.

CI is evaluated two independent ways (number-diagonal Helstrom limit and
a receiver-operating-characteristic minimization) so each can certify
the other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .discrimination import DiscriminationResult, helstrom_diagonal
from .fading import mixture_pmf, rayleigh_quadrature
from .numerics import (
    LOG_ZERO,
    golden_section_min,
    log_marcum_q_complement,
)
from .photon_stats import (
    Fixed,
    FockPmf,
    ScenarioParams,
    phase_averaged_displaced_thermal_pmf,
    thermal_pmf,
)

CI_QUAD_NODES = 64


def ci_present_pmf(params: ScenarioParams) -> FockPmf:
    """Return-mode pmf under the target-present hypothesis for CI.

    Coherent probe of total energy M*n_s; per reflectivity kappa the
    return is a phase-averaged displaced thermal state with displacement
    energy M*kappa*n_s in residual noise (1-kappa)*n_e.
    """
    m, n_s, n_e = params.m, params.n_s, params.n_e
    if isinstance(params.reflectivity, Fixed):
        kappa = params.reflectivity.kappa
        return phase_averaged_displaced_thermal_pmf(m * kappa * n_s, (1.0 - kappa) * n_e)
    quad = rayleigh_quadrature(params.reflectivity.kappa_bar, CI_QUAD_NODES)
    comps = [
        (w, m * k * n_s, (1.0 - k) * n_e)
        for k, w in zip(quad.nodes, quad.weights)
    ]
    return mixture_pmf(comps)


def ci_helstrom(params: ScenarioParams) -> DiscriminationResult:
    """CI Helstrom limit between thermal noise and the returned state."""
    absent = thermal_pmf(params.n_e)
    present = ci_present_pmf(params)
    res = helstrom_diagonal(absent, present)
    return DiscriminationResult(res.log_p_error, None, "helstrom")


def _roc_log_miss_fixed(log_pf: float, a2_half: float) -> float:
    """log(1 - P_D) for the fixed-reflectivity (Marcum Q) ROC."""
    b = math.sqrt(-2.0 * log_pf)
    return log_marcum_q_complement(math.sqrt(2.0 * a2_half), b)


def _roc_log_miss_rayleigh(log_pf: float, snr_bar: float) -> float:
    """log(1 - P_D) for the Rayleigh ROC P_D = P_F^{1/(1+snr_bar)}."""
    u = log_pf / (1.0 + snr_bar)
    if u >= 0.0:
        return LOG_ZERO
    return math.log(-math.expm1(u))


def ci_roc(params: ScenarioParams) -> DiscriminationResult:
    """CI error probability by minimizing (P_F + 1 - P_D)/2 over the ROC.

    The ROC is that of the photon-counting receiver on the exact
    number-diagonal statistics; the Bayes objective is linear in
    (P_F, P_D), so the minimum over the polygonal ROC sits at a vertex
    (an integer threshold) and a log-domain vertex scan finds it.
    """
    from .discrimination import optimal_threshold

    absent = thermal_pmf(params.n_e)
    present = ci_present_pmf(params)
    best = optimal_threshold(absent, present)
    return DiscriminationResult(
        log_p_error=best.log_p_error,
        optimal_threshold=best.optimal_threshold,
        method="roc",
    )


def ci_roc_analytic(params: ScenarioParams, obj_tol: float = 1e-10) -> DiscriminationResult:
    """Semiclassical ROC minimization (Marcum Q / Swerling form).

    Continuum envelope-detection approximation of the counting ROC; it
    tracks `ci_roc` only to O(1/n_e) relative accuracy but stays cheap at
    mode counts where the exact pmfs would need astronomically large
    cutoffs, which is what the error-exponent extrapolation needs.
    """
    m, n_s, n_e = params.m, params.n_s, params.n_e
    if isinstance(params.reflectivity, Fixed):
        kappa = params.reflectivity.kappa
        e_prime = (1.0 - kappa) * n_e
        a2_half = kappa * m * n_s / e_prime
        log_miss = lambda t: _roc_log_miss_fixed(t, a2_half)
        scale = a2_half
    else:
        kappa_bar = params.reflectivity.kappa_bar
        e_prime = (1.0 - kappa_bar) * n_e
        snr_bar = m * kappa_bar * n_s / e_prime
        log_miss = lambda t: _roc_log_miss_rayleigh(t, snr_bar)
        scale = snr_bar

    def objective(t: float) -> float:
        return float(np.logaddexp(t, log_miss(t))) - math.log(2.0)

    lo = -2.0 * scale - 50.0
    hi = -1e-12
    # Golden section to interval width where the objective is converged;
    # the objective is locally quadratic, so sqrt of the requested
    # relative tolerance on the objective is enough for the abscissa.
    t_star, log_p = golden_section_min(objective, lo, hi, math.sqrt(obj_tol))
    return DiscriminationResult(
        log_p_error=min(log_p, -math.log(2.0)),
        optimal_threshold=None,
        method="roc",
        meta={"log_pf": t_star},
    )


def ng_lower_bound(params: ScenarioParams) -> DiscriminationResult:
    """Nair-Gu fundamental lower bound (1/4) exp(-beta M n_s)."""
    if not isinstance(params.reflectivity, Fixed):
        raise ValueError("ng_lower_bound requires a Fixed reflectivity")
    kappa = params.reflectivity.kappa
    beta = -math.log1p(-kappa / (params.n_e * (1.0 - kappa) + 1.0))
    return DiscriminationResult(
        log_p_error=-math.log(4.0) - beta * params.m * params.n_s,
        optimal_threshold=None,
        method="ng",
    )


@dataclass(frozen=True)
class ExponentEstimate:
    """Finite-M exponent sequence with its convergence verdict."""

    value: float
    converged: bool
    m_grid: tuple[int, ...]
    exponents: tuple[float, ...]


def ci_error_exponent(
    params: ScenarioParams,
    m_grid: list[int] | None = None,
    rel_tol: float = 0.005,
) -> ExponentEstimate:
    """Error exponent of CI: -ln(P_CI)/M on a geometric M grid.

    Uses the semiclassical ROC (the only route that stays tractable at
    the mode counts the limit needs).  Converged once successive
    doublings move the exponent by less than `rel_tol` relatively;
    non-convergence is reported, not raised.
    """
    if m_grid is None:
        # Auto grid: doublings from where the exponent is O(100)/M.
        if isinstance(params.reflectivity, Fixed):
            scale = params.reflectivity.kappa * params.n_s / (4.0 * params.n_e)
        else:
            scale = params.reflectivity.kappa_bar * params.n_s / (4.0 * params.n_e)
        m0 = max(int(100.0 / scale), 2)
        m_grid = [m0 * 2**i for i in range(14)]
    if len(m_grid) < 4:
        raise ValueError("m_grid needs at least 4 points")
    exponents = []
    converged = False
    used = []
    prev = None
    for m in m_grid:
        r = -ci_roc_analytic(params.with_m(m)).log_p_error / m
        exponents.append(r)
        used.append(m)
        if prev is not None and abs(r / prev - 1.0) < rel_tol:
            converged = True
            break
        prev = r
    return ExponentEstimate(
        value=exponents[-1],
        converged=converged,
        m_grid=tuple(used),
        exponents=tuple(exponents),
    )
