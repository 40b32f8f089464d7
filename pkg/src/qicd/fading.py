"""Rayleigh-fading target model: reflectivity quadrature, the concavity
lower bound, and the achievable fixed-threshold mixture performance."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .discrimination import DiscriminationResult, helstrom_diagonal
from .numerics import LOG_ZERO, gauss_legendre, log_sum_exp
from .photon_stats import (
    FockPmf,
    Rayleigh,
    ScenarioParams,
    idler_stats,
    phase_averaged_displaced_thermal_pmf,
    required_cutoff,
    thermal_pmf,
)

DEFAULT_KAPPA_NODES = 64


@dataclass(frozen=True)
class KappaQuadrature:
    """Nodes/weights for the truncated-exponential reflectivity measure."""

    nodes: np.ndarray
    weights: np.ndarray


def rayleigh_quadrature(kappa_bar: float, n_nodes: int) -> KappaQuadrature:
    """Quadrature for the exponential reflectivity density on [0, 1].

    The density is renormalized over [0, 1] (mass deficit exp(-1/kappa_bar)
    is astronomically small at the regimes of interest).  Substituting
    kappa(u) = -kappa_bar * ln(1 - u * (1 - exp(-1/kappa_bar))) maps the
    measure to the uniform one on u in [0, 1], flattening the integrand
    that otherwise concentrates at kappa = 0.
    """
    if not 0.0 < kappa_bar < 1.0:
        raise ValueError(f"rayleigh_quadrature requires kappa_bar in (0, 1), got {kappa_bar}")
    if n_nodes < 1:
        raise ValueError(f"n_nodes must be positive, got {n_nodes}")
    z = -math.expm1(-1.0 / kappa_bar)  # 1 - exp(-1/kappa_bar)
    u, w = gauss_legendre(n_nodes, 0.0, 1.0)
    nodes = -kappa_bar * np.log1p(-u * z)
    return KappaQuadrature(nodes=nodes, weights=w)


def _require_rayleigh(params: ScenarioParams) -> float:
    if not isinstance(params.reflectivity, Rayleigh):
        raise ValueError("this operation needs a Rayleigh reflectivity model")
    return params.reflectivity.kappa_bar


def rayleigh_lower_bound(
    params: ScenarioParams,
    n_nodes: int = DEFAULT_KAPPA_NODES,
) -> DiscriminationResult:
    """Concavity lower bound: reflectivity average of per-kappa Helstrom limits.

    Uses the large-M delta approximation of the heterodyne-energy
    distribution, as in the achievable counterpart.
    """
    kappa_bar = _require_rayleigh(params)
    quad = rayleigh_quadrature(kappa_bar, n_nodes)
    absent = thermal_pmf(params.n_s)
    terms = np.empty(n_nodes)
    for i, (k, w) in enumerate(zip(quad.nodes, quad.weights)):
        stats = idler_stats(params, min(k, 1.0))
        present = phase_averaged_displaced_thermal_pmf(stats.xi * 2.0 * params.m, stats.e_kappa)
        terms[i] = math.log(w) + helstrom_diagonal(absent, present).log_p_error
    return DiscriminationResult(
        log_p_error=min(log_sum_exp(terms), -math.log(2.0)),
        optimal_threshold=None,
        method="helstrom",
        meta={"n_nodes": n_nodes},
    )


def mixture_pmf(components: list[tuple[float, float, float]]) -> FockPmf:
    """Weighted displaced-thermal mixture on a common Fock cutoff.

    `components` holds (weight, d2, e_mean) triples; the common cutoff is
    the maximum of the per-component adaptive cutoffs, so every component
    lives in one aligned index space.
    """
    cutoff = max(required_cutoff(d2, e) for _, d2, e in components)
    stack = np.full((len(components), cutoff + 1), LOG_ZERO)
    tail = 0.0
    for i, (w, d2, e) in enumerate(components):
        pmf = phase_averaged_displaced_thermal_pmf(d2, e, cutoff=cutoff)
        stack[i] = math.log(w) + pmf.log_probs
        tail += w * pmf.tail_bound
    log_mix = np.logaddexp.reduce(stack, axis=0)
    return FockPmf(log_probs=log_mix, tail_bound=tail)


def rayleigh_mixture_pmf(params: ScenarioParams, n_nodes: int = DEFAULT_KAPPA_NODES) -> FockPmf:
    """Reflectivity-averaged conditional idler pmf on a common Fock cutoff."""
    kappa_bar = _require_rayleigh(params)
    quad = rayleigh_quadrature(kappa_bar, n_nodes)
    comps = []
    for k, w in zip(quad.nodes, quad.weights):
        stats = idler_stats(params, min(k, 1.0))
        comps.append((w, stats.xi * 2.0 * params.m, stats.e_kappa))
    return mixture_pmf(comps)


def rayleigh_achievable(
    params: ScenarioParams,
    n_nodes: int = DEFAULT_KAPPA_NODES,
) -> DiscriminationResult:
    """Achievable performance: photon counting with one fixed threshold.

    Helstrom limit between the thermal reference and the
    reflectivity-averaged mixture state (large-M delta approximation).
    """
    absent = thermal_pmf(params.n_s)
    mixture = rayleigh_mixture_pmf(params, n_nodes)
    res = helstrom_diagonal(absent, mixture)
    return DiscriminationResult(
        log_p_error=res.log_p_error,
        optimal_threshold=None,
        method="helstrom",
        meta={"n_nodes": n_nodes},
    )
