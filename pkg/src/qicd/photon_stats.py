"""Photon-number-diagonal distributions produced by the conversion module.

The heterodyne stage turns the signal-idler cross-correlation into a
displacement of one combined idler mode; after uniform phase averaging
the relevant states are diagonal in the number basis, so everything here
is a truncated log-domain pmf over photon number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .numerics import (
    DEFAULT_CONFIG,
    LOG_ZERO,
    log_laguerre_sequence,
    log_sum_exp,
)

# Below this conditional thermal occupation the displaced-thermal pmf is
# numerically a Poisson distribution (kappa -> 1 and the low-brightness
# approximation regimes both land here).
POISSON_LIMIT_E = 1e-12


@dataclass(frozen=True)
class Fixed:
    """Known constant target reflectivity."""

    kappa: float

    def __post_init__(self):
        if not 0.0 <= self.kappa <= 1.0:
            raise ValueError(f"fixed reflectivity requires kappa in [0, 1], got {self.kappa}")


@dataclass(frozen=True)
class Rayleigh:
    """Exponentially distributed reflectivity with mean kappa_bar."""

    kappa_bar: float

    def __post_init__(self):
        if not 0.0 < self.kappa_bar < 1.0:
            raise ValueError(f"Rayleigh reflectivity requires kappa_bar in (0, 1), got {self.kappa_bar}")


Reflectivity = Union[Fixed, Rayleigh]


@dataclass(frozen=True)
class UniformPhase:
    """Uniform random return phase on [0, 2*pi) (the only supported model)."""


@dataclass(frozen=True)
class ScenarioParams:
    """Physical scenario: source brightness, background, target model, mode count."""

    n_s: float
    n_e: float
    reflectivity: Reflectivity
    m: int
    phase: UniformPhase = field(default_factory=UniformPhase)

    def __post_init__(self):
        if not self.n_s > 0.0:
            raise ValueError(f"n_s must be positive, got {self.n_s}")
        if self.n_e < 0.0:
            raise ValueError(f"n_e must be non-negative, got {self.n_e}")
        if self.m < 1:
            raise ValueError(f"m must be a positive integer, got {self.m}")

    def with_m(self, m: int) -> "ScenarioParams":
        return ScenarioParams(self.n_s, self.n_e, self.reflectivity, m, self.phase)


@dataclass(frozen=True)
class ConditionalIdlerStats:
    """Scalars of the conditional idler state at a given reflectivity."""

    mu: float  # displacement gain multiplying |x|
    e_kappa: float  # conditional thermal photon number
    sigma2: float  # per-complex-sample heterodyne variance
    xi: float  # mu^2 * sigma2, the displacement energy per unit of y
    c_p: float  # cross-correlation amplitude sqrt(kappa n_s (n_s + 1))


def idler_stats(params: ScenarioParams, kappa: float) -> ConditionalIdlerStats:
    """Closed-form conditional-idler scalars at reflectivity `kappa`."""
    if not 0.0 <= kappa <= 1.0:
        raise ValueError(f"kappa must lie in [0, 1], got {kappa}")
    n_s, n_e = params.n_s, params.n_e
    denom = kappa * n_s + (1.0 - kappa) * n_e + 1.0
    c_p = math.sqrt(kappa * n_s * (n_s + 1.0))
    mu = c_p / denom
    e_kappa = (1.0 - kappa) * (1.0 + n_e) * n_s / denom
    sigma2 = 0.5 * denom
    xi = mu * mu * sigma2
    return ConditionalIdlerStats(mu=mu, e_kappa=e_kappa, sigma2=sigma2, xi=xi, c_p=c_p)


@dataclass(frozen=True)
class FockPmf:
    """Truncated photon-number pmf in the log domain with a certified tail bound."""

    log_probs: np.ndarray
    tail_bound: float

    @property
    def cutoff(self) -> int:
        return len(self.log_probs) - 1

    def log_total(self) -> float:
        return log_sum_exp(self.log_probs)

    def mean(self) -> float:
        n = np.arange(len(self.log_probs))
        return float(np.sum(n * np.exp(self.log_probs)))


def _geometric_cutoff(log_r: float, cutoff_tol: float) -> int:
    # Tail of sum_{n>N} (1-r) r^n is r^{N+1}; solve r^{N+1} < tol.
    if log_r == LOG_ZERO:
        return 0
    n = int(math.ceil(math.log(cutoff_tol) / log_r))
    return max(n, 1)


def thermal_pmf(n_mean: float, cutoff_tol: float = DEFAULT_CONFIG.pmf_tail_tol) -> FockPmf:
    """Thermal (geometric) photon-number distribution with mean `n_mean`."""
    if n_mean < 0.0:
        raise ValueError(f"thermal_pmf requires n_mean >= 0, got {n_mean}")
    if n_mean == 0.0:
        return FockPmf(log_probs=np.array([0.0]), tail_bound=0.0)
    log_r = math.log(n_mean) - math.log1p(n_mean)
    cutoff = _geometric_cutoff(log_r, cutoff_tol)
    n = np.arange(cutoff + 1)
    log_probs = n * log_r - math.log1p(n_mean)
    tail = math.exp((cutoff + 1) * log_r)
    return FockPmf(log_probs=log_probs, tail_bound=tail)


def _certified_tail(log_probs: np.ndarray) -> float:
    """Geometric tail bound past the last retained term.

    Requires the trailing ratio to be below one; the caller extends the
    cutoff until that holds and the bound is small enough.
    """
    lp = log_probs
    if len(lp) < 2 or lp[-1] == LOG_ZERO:
        return 0.0
    log_ratio = lp[-1] - lp[-2]
    if log_ratio >= 0.0:
        return math.inf
    r = math.exp(log_ratio)
    return math.exp(lp[-1]) * r / (1.0 - r)


def _displaced_thermal_log_probs(d2: float, e_mean: float, cutoff: int) -> np.ndarray:
    """log p_n, n = 0..cutoff, of the phase-averaged displaced thermal state."""
    n = np.arange(cutoff + 1)
    if e_mean < POISSON_LIMIT_E:
        # Degenerate Poisson(d2) limit.
        if d2 == 0.0:
            out = np.full(cutoff + 1, LOG_ZERO)
            out[0] = 0.0
            return out
        from scipy.special import gammaln

        return n * math.log(d2) - d2 - gammaln(n + 1.0)
    z = d2 / (e_mean * (1.0 + e_mean))
    # -d2/e + z collapses to -d2/(1+e); keep that form, and use the raw
    # Laguerre log (not the regularized-Kummer log minus z, which loses
    # absolute precision once z is large).
    return (
        n * (math.log(e_mean) - math.log1p(e_mean))
        - math.log1p(e_mean)
        - d2 / (1.0 + e_mean)
        + log_laguerre_sequence(cutoff, z)
    )


def phase_averaged_displaced_thermal_pmf(
    d2: float,
    e_mean: float,
    cutoff_tol: float = DEFAULT_CONFIG.pmf_tail_tol,
    cutoff: int | None = None,
) -> FockPmf:
    """Photon-number pmf of a displaced thermal state after phase averaging.

    `d2` is the displacement energy |mu_kappa x|^2 and `e_mean` the
    conditional thermal occupation.  Passing `cutoff` forces the index
    space (used when building mixtures on a common cutoff).
    """
    if d2 < 0.0 or e_mean < 0.0:
        raise ValueError("phase_averaged_displaced_thermal_pmf requires d2, e_mean >= 0")
    if d2 == 0.0 and cutoff is None:
        return thermal_pmf(e_mean, cutoff_tol)
    if cutoff is not None:
        lp = _displaced_thermal_log_probs(d2, e_mean, cutoff)
        return FockPmf(log_probs=lp, tail_bound=_certified_tail(lp))
    mean = d2 + e_mean
    var = e_mean * (1.0 + e_mean) + d2 * (1.0 + 2.0 * e_mean)
    n_cut = int(math.ceil(mean + 12.0 * math.sqrt(var) + 10.0))
    for _ in range(60):
        lp = _displaced_thermal_log_probs(d2, e_mean, n_cut)
        tail = _certified_tail(lp)
        if tail < cutoff_tol:
            return FockPmf(log_probs=lp, tail_bound=tail)
        n_cut = int(n_cut * 1.3) + 10
    raise RuntimeError(
        f"displaced-thermal cutoff search failed (d2={d2}, e_mean={e_mean}, tol={cutoff_tol})"
    )


def required_cutoff(d2: float, e_mean: float, cutoff_tol: float = DEFAULT_CONFIG.pmf_tail_tol) -> int:
    """Cutoff the adaptive constructor would pick for these parameters."""
    return phase_averaged_displaced_thermal_pmf(d2, e_mean, cutoff_tol).cutoff


def gamma_n(n: int, y: float, params: ScenarioParams, kappa: float) -> float:
    """Difference of the two hypothesis pmfs at photon number n.

    Sign-carrying by construction (computed as a difference of
    exponentiated log probabilities, not by log-domain subtraction).
    """
    if y < 0.0:
        raise ValueError(f"gamma_n requires y >= 0, got {y}")
    stats = idler_stats(params, kappa)
    absent = thermal_pmf(params.n_s)
    present = phase_averaged_displaced_thermal_pmf(stats.xi * y, stats.e_kappa, cutoff=max(n, 1))
    p_absent = math.exp(absent.log_probs[n]) if n <= absent.cutoff else math.exp(
        n * (math.log(params.n_s) - math.log1p(params.n_s)) - math.log1p(params.n_s)
    )
    return p_absent - math.exp(present.log_probs[n])
