"""Receiver performance for the random-phase, known-reflectivity model.

Exact chi-square-averaged Helstrom limit, its large-M delta
approximation, Poisson threshold approximations, and the asymptotic
threshold / error exponent obtained through the Lambert W function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .discrimination import DiscriminationResult, helstrom_diagonal, optimal_threshold
from .numerics import (
    DEFAULT_CONFIG,
    chi2_log_pdf,
    gauss_legendre,
    lambert_w_minus1,
    log_sum_exp,
)
from .photon_stats import (
    Fixed,
    FockPmf,
    ScenarioParams,
    idler_stats,
    phase_averaged_displaced_thermal_pmf,
    thermal_pmf,
)


def _fixed_kappa(params: ScenarioParams) -> float:
    if not isinstance(params.reflectivity, Fixed):
        raise ValueError("this operation needs a Fixed reflectivity; use the fading module for Rayleigh")
    return params.reflectivity.kappa


def hypothesis_pmfs(params: ScenarioParams, y: float) -> tuple[FockPmf, FockPmf]:
    """(target-absent, target-present) pmfs at heterodyne energy y."""
    kappa = _fixed_kappa(params)
    stats = idler_stats(params, kappa)
    absent = thermal_pmf(params.n_s)
    present = phase_averaged_displaced_thermal_pmf(stats.xi * y, stats.e_kappa)
    return absent, present


def pcd_largeM(params: ScenarioParams) -> DiscriminationResult:
    """Helstrom limit in the large-M limit (chi-square pinned at its mean 2M)."""
    absent, present = hypothesis_pmfs(params, 2.0 * params.m)
    hel = helstrom_diagonal(absent, present)
    best = optimal_threshold(absent, present)
    return DiscriminationResult(
        log_p_error=hel.log_p_error,
        optimal_threshold=best.optimal_threshold,
        method="helstrom",
    )


def pcd_exact(
    params: ScenarioParams,
    rel_tol: float = 1e-6,
    max_nodes: int = 8192,
) -> DiscriminationResult:
    """Exact error probability: chi-square(2M) average of the Helstrom limit.

    Gauss-Legendre over a +-10-sigma window of the chi-square density,
    doubling the node count from 64 until the result moves by less than
    `rel_tol` relatively.
    """
    kappa = _fixed_kappa(params)
    m = params.m
    stats = idler_stats(params, kappa)
    absent = thermal_pmf(params.n_s)
    sigma = 2.0 * math.sqrt(m)
    lo = max(0.0, 2.0 * m - 10.0 * sigma)
    hi = 2.0 * m + 10.0 * sigma

    def integral(n_nodes: int) -> float:
        ys, ws = gauss_legendre(n_nodes, lo, hi)
        terms = np.empty(n_nodes)
        for i, y in enumerate(ys):
            present = phase_averaged_displaced_thermal_pmf(stats.xi * y, stats.e_kappa)
            terms[i] = (
                math.log(ws[i])
                + chi2_log_pdf(y, 2 * m)
                + helstrom_diagonal(absent, present).log_p_error
            )
        return log_sum_exp(terms)

    n_nodes = 64
    prev = integral(n_nodes)
    converged = False
    while n_nodes < max_nodes:
        n_nodes *= 2
        cur = integral(n_nodes)
        if abs(cur - prev) < rel_tol:
            converged = True
            prev = cur
            break
        prev = cur
    return DiscriminationResult(
        log_p_error=min(prev, -math.log(2.0)),
        optimal_threshold=None,
        method="helstrom",
        meta={"n_nodes": n_nodes, "converged": converged},
    )


def pcd_poisson_threshold(params: ScenarioParams, threshold: int) -> DiscriminationResult:
    """Low-brightness Poisson approximation of the threshold-N error.

    N = 0 is the Kennedy receiver: (1/2) exp(-2 xi M).
    """
    if threshold < 0:
        raise ValueError(f"threshold must be >= 0, got {threshold}")
    kappa = _fixed_kappa(params)
    lam = 2.0 * idler_stats(params, kappa).xi * params.m
    from scipy.special import gammaln

    n = np.arange(threshold + 1)
    if lam == 0.0:
        log_p = 0.0
    else:
        log_p = log_sum_exp(n * math.log(lam) - lam - gammaln(n + 1.0))
    return DiscriminationResult(
        log_p_error=min(log_p, 0.0) - math.log(2.0),
        optimal_threshold=threshold,
        method="threshold",
    )


@dataclass(frozen=True)
class AsymptoticQuantities:
    """Asymptotic threshold, error probability and exponents."""

    epsilon: float  # -W_{-1}(-n_s / e), > 1 for n_s < 1
    n_opt: float  # asymptotic decision threshold 2 xi M / epsilon
    r_asy: float  # limiting error exponent
    r_finite: float  # -ln(P_asy) / M at this M
    log_p_asy: float  # asymptote of the error probability (natural log)


def asymptotics(params: ScenarioParams, m: int | None = None) -> AsymptoticQuantities:
    """Asymptotic threshold and exponent from the Lambert-W closed form."""
    if params.n_s >= 1.0:
        raise ValueError("asymptotics requires n_s < 1 (low-brightness regime)")
    m = params.m if m is None else m
    if m < 1:
        raise ValueError(f"m must be positive, got {m}")
    kappa = _fixed_kappa(params)
    xi = idler_stats(params, kappa).xi
    eps = -lambert_w_minus1(-params.n_s / math.e)
    two_xi_m = 2.0 * xi * m
    n_opt = two_xi_m / eps
    r_asy = (1.0 - math.log(math.e * eps) / eps) * 2.0 * xi
    # Stirling form of the Poisson term at the asymptotic threshold; the
    # subexponential sqrt prefactor is kept so the asymptote tracks
    # absolute values, not just the exponent.
    log_p_asy = (
        -math.log(2.0)
        - two_xi_m
        + n_opt * math.log(two_xi_m)
        - 0.5 * math.log(2.0 * math.pi * n_opt)
        - n_opt * (math.log(n_opt) - 1.0)
    )
    return AsymptoticQuantities(
        epsilon=eps,
        n_opt=n_opt,
        r_asy=r_asy,
        r_finite=-log_p_asy / m,
        log_p_asy=log_p_asy,
    )


def finite_exponent(log_p: float, m: int) -> float:
    """Finite-M error exponent -ln(P) / M from a log-domain probability."""
    if log_p > 0.0:
        raise ValueError(f"log_p must be <= 0, got {log_p}")
    if m < 1:
        raise ValueError(f"m must be positive, got {m}")
    return -log_p / m


def threshold_fixed_point(
    params: ScenarioParams,
    m: int | None = None,
    max_iter: int = 200,
    tol: float = 1e-12,
) -> float:
    """Diagnostic: self-consistent pre-simplification asymptotic threshold.

    Iterates the Stirling-corrected threshold condition starting from the
    simplified Lambert-W solution; diverges from it only at modest N.
    """
    asy = asymptotics(params, m)
    m = params.m if m is None else m
    kappa = _fixed_kappa(params)
    two_xi_m = 2.0 * idler_stats(params, kappa).xi * m
    n_s = params.n_s
    n = asy.n_opt
    for _ in range(max_iter):
        arg = (
            -n_s
            * (1.0 / (1.0 + n_s)) ** (1.0 + 1.0 / n)
            * (2.0 * math.pi * n) ** (1.0 / n)
            / math.e
        )
        arg = max(arg, -1.0 / math.e)
        n_new = -two_xi_m / lambert_w_minus1(min(arg, -1e-300))
        if abs(n_new - n) <= tol * max(1.0, abs(n)):
            return n_new
        n = n_new
    return n
