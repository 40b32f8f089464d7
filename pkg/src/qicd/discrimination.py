"""Binary discrimination of photon-number-diagonal states.

All inputs commute, so the Helstrom limit reduces to half the complement
of the total-variation distance and counting-plus-threshold receivers
are the natural measurement family.  Equal priors (1/2, 1/2) throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numerics import LOG_ZERO, golden_section_min, log_sum_exp
from .photon_stats import FockPmf


@dataclass(frozen=True)
class DiscriminationResult:
    """Log-domain error probability with the decision rule that produced it."""

    log_p_error: float
    optimal_threshold: int | None
    method: str  # helstrom | threshold | qcb | ng | roc
    meta: dict | None = None


def _aligned(p: FockPmf, q: FockPmf) -> tuple[np.ndarray, np.ndarray]:
    """Extend the shorter pmf with -inf so both share one cutoff."""
    n = max(len(p.log_probs), len(q.log_probs))
    lp = np.full(n, LOG_ZERO)
    lq = np.full(n, LOG_ZERO)
    lp[: len(p.log_probs)] = p.log_probs
    lq[: len(q.log_probs)] = q.log_probs
    return lp, lq


def helstrom_diagonal(p: FockPmf, q: FockPmf) -> DiscriminationResult:
    """Minimum error probability between two diagonal states.

    Evaluated as (1/2) sum_n min(p_n, q_n): identical to the usual
    positive-part form but free of the 1 - (...) cancellation, so it
    stays meaningful for errors far below machine epsilon.
    """
    lp, lq = _aligned(p, q)
    log_overlap = log_sum_exp(np.minimum(lp, lq))
    tail = min(p.tail_bound, q.tail_bound)
    if tail > 0.0 and math.isfinite(tail):
        log_overlap = np.logaddexp(log_overlap, math.log(tail))
    return DiscriminationResult(
        log_p_error=min(log_overlap - math.log(2.0), -math.log(2.0)),
        optimal_threshold=None,
        method="helstrom",
    )


def threshold_error(p: FockPmf, q: FockPmf, threshold: int) -> DiscriminationResult:
    """Error of declaring target present iff the count exceeds `threshold`.

    `p` is the target-absent pmf, `q` the target-present pmf.
    """
    lp, lq = _aligned(p, q)
    if not 0 <= threshold < len(lp):
        raise ValueError(f"threshold {threshold} outside pmf support [0, {len(lp) - 1}]")
    false_alarm = log_sum_exp(np.append(lp[threshold + 1 :], LOG_ZERO))
    if p.tail_bound > 0.0 and math.isfinite(p.tail_bound):
        false_alarm = np.logaddexp(false_alarm, math.log(p.tail_bound))
    miss = log_sum_exp(lq[: threshold + 1])
    return DiscriminationResult(
        log_p_error=float(np.logaddexp(false_alarm, miss)) - math.log(2.0),
        optimal_threshold=threshold,
        method="threshold",
    )


def optimal_threshold(p: FockPmf, q: FockPmf) -> DiscriminationResult:
    """Best counting threshold by exact linear scan, ties toward smaller N.

    Uses prefix/suffix log-cumulations so the scan is one pass even when
    the individual error terms underflow linear doubles.
    """
    lp, lq = _aligned(p, q)
    n = len(lp)
    log_tail_p = math.log(p.tail_bound) if 0.0 < p.tail_bound < math.inf else LOG_ZERO
    # false_alarm[N] = log sum_{n > N} p_n (+ tail beyond the cutoff)
    suffix = np.logaddexp.accumulate(lp[::-1])[::-1]
    false_alarm = np.logaddexp(np.append(suffix[1:], LOG_ZERO), log_tail_p)
    miss = np.logaddexp.accumulate(lq)
    log_err = np.logaddexp(false_alarm, miss) - math.log(2.0)
    # Ties (within float noise) resolve toward the smaller threshold.
    best = int(np.argmax(log_err <= np.min(log_err) + 1e-12))
    return DiscriminationResult(
        log_p_error=float(log_err[best]),
        optimal_threshold=best,
        method="threshold",
    )


def qcb_diagonal(p: FockPmf, q: FockPmf, s_tol: float = 1e-8) -> DiscriminationResult:
    """Quantum Chernoff bound (1/2) inf_s sum_n p_n^s q_n^{1-s}.

    For commuting states the trace reduces to the classical Chernoff
    quantity, which is log-convex in s; golden-section search finds the
    minimizer to |ds| < `s_tol`.
    """
    lp, lq = _aligned(p, q)
    both = (lp > LOG_ZERO) & (lq > LOG_ZERO)
    lp_c, lq_c = lp[both], lq[both]

    def log_q_s(s: float) -> float:
        if lp_c.size == 0:
            return LOG_ZERO
        return log_sum_exp(s * lp_c + (1.0 - s) * lq_c)

    # Endpoints are total masses over the other state's support.
    log_q0 = log_sum_exp(lq[lp > LOG_ZERO]) if np.any(lp > LOG_ZERO) else LOG_ZERO
    log_q1 = log_sum_exp(lp[lq > LOG_ZERO]) if np.any(lq > LOG_ZERO) else LOG_ZERO
    s_star, log_q_min = golden_section_min(log_q_s, 0.0, 1.0, s_tol)
    candidates = [(log_q0, 0.0), (log_q1, 1.0), (log_q_min, s_star)]
    log_q_best, s_best = min(candidates, key=lambda t: t[0])
    return DiscriminationResult(
        log_p_error=min(log_q_best - math.log(2.0), -math.log(2.0)),
        optimal_threshold=None,
        method="qcb",
        meta={"s": s_best},
    )
