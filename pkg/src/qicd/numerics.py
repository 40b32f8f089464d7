"""Stable scalar special functions and log-domain arithmetic.

Everything downstream works with natural-log probabilities (floats, with
-inf for exact zero) because the interesting error probabilities scale
like exp(-r*M) and underflow linear doubles long before the sweeps end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

LOG_ZERO = -math.inf
LOG_HALF = -math.log(2.0)

#: Additive probability tolerance used to terminate series summations.
SERIES_TOL = 1e-15


@dataclass(frozen=True)
class NumericsConfig:
    """Single knob record for series/cutoff tolerances."""

    series_tol: float = SERIES_TOL
    pmf_tail_tol: float = 1e-18


DEFAULT_CONFIG = NumericsConfig()


def log_sum_exp(terms: Sequence[float]) -> float:
    """log(sum(exp(t) for t in terms)) with max-shift stabilization.

    Returns -inf when every term is -inf.  Raises on an empty sequence.
    """
    arr = np.asarray(terms, dtype=float)
    if arr.size == 0:
        raise ValueError("log_sum_exp of an empty sequence")
    m = np.max(arr)
    if m == LOG_ZERO:
        return LOG_ZERO
    return float(m + np.log(np.sum(np.exp(arr - m))))


def lambert_w_minus1(x: float) -> float:
    """Lower real branch W_-1 of w*exp(w) = x, for x in [-1/e, 0).

    Halley iteration from an asymptotic initial guess; residual
    |w e^w - x| <= 1e-13 |x| over the whole domain.
    """
    if not (-1.0 / math.e <= x < 0.0):
        raise ValueError(f"lambert_w_minus1 requires -1/e <= x < 0, got {x}")
    # Branch point: series w = -1 + sqrt(2(1+e x)) - ... toward -1.
    p2 = 2.0 * (1.0 + math.e * x)
    if p2 <= 0.0:
        return -1.0
    if p2 < 1e-4:
        p = math.sqrt(p2)
        w = -1.0 - p - p2 / 3.0 - 11.0 * p * p2 / 72.0
    else:
        # Asymptotic guess for x -> 0-: w ~ ln(-x) - ln(-ln(-x)).
        l1 = math.log(-x)
        l2 = math.log(-l1) if l1 < -1.0 else 0.0
        w = l1 - l2
        w = min(w, -1.0)
    for _ in range(50):
        ew = math.exp(w)
        f = w * ew - x
        if f == 0.0:
            break
        denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0)
        dw = f / denom
        w -= dw
        if abs(dw) <= 1e-16 * abs(w):
            break
    return w


def _log_laguerre_at_negative(n_max: int, z: float) -> np.ndarray:
    """log L_n(-z) for n = 0..n_max via the three-term recurrence.

    At negative argument every term of the recurrence is positive, so
    there is no cancellation; a running scale keeps values finite.
    """
    out = np.empty(n_max + 1)
    scale = 0.0  # natural-log offset of the scaled values
    prev = 1.0  # L_0(-z)
    out[0] = 0.0
    if n_max == 0:
        return out
    cur = 1.0 + z  # L_1(-z)
    out[1] = math.log(cur)
    for k in range(1, n_max):
        nxt = ((2.0 * k + 1.0 + z) * cur - k * prev) / (k + 1.0)
        prev, cur = cur, nxt
        if cur > 1e250:
            shift = math.log(cur)
            scale += shift
            prev = math.exp(math.log(prev) - shift) if prev > 0 else 0.0
            cur = 1.0
        out[k + 1] = scale + math.log(cur)
    return out


def log_laguerre_1f1(n: int, z: float) -> float:
    """log of the regularized Kummer function 1F1~[n+1, 1, z] for z >= 0.

    Uses the identity 1F1(n+1; 1; z) = exp(z) * L_n(-z).
    """
    if z < 0.0:
        raise ValueError(f"log_laguerre_1f1 requires z >= 0, got {z}")
    if n < 0:
        raise ValueError(f"log_laguerre_1f1 requires n >= 0, got {n}")
    if n == 0:
        return z
    return z + float(_log_laguerre_at_negative(n, z)[n])


def log_laguerre_1f1_sequence(n_max: int, z: float) -> np.ndarray:
    """log 1F1~[n+1, 1, z] for n = 0..n_max in one recurrence pass."""
    if z < 0.0:
        raise ValueError(f"log_laguerre_1f1_sequence requires z >= 0, got {z}")
    return z + _log_laguerre_at_negative(n_max, z)


def log_laguerre_sequence(n_max: int, z: float) -> np.ndarray:
    """log L_n(-z) for n = 0..n_max, i.e. log 1F1~[n+1, 1, z] minus z.

    Preferred over subtracting z from `log_laguerre_1f1_sequence` when z
    is large: the difference is O(n log z) while the regularized Kummer
    log is O(z), so forming it directly avoids absolute-precision loss.
    """
    if z < 0.0:
        raise ValueError(f"log_laguerre_sequence requires z >= 0, got {z}")
    return _log_laguerre_at_negative(n_max, z)


def chi2_log_pdf(y: float, dof: int) -> float:
    """Natural log of the chi-square density with `dof` degrees of freedom."""
    if y < 0.0:
        raise ValueError(f"chi2_log_pdf requires y >= 0, got {y}")
    if dof < 1:
        raise ValueError(f"chi2_log_pdf requires dof >= 1, got {dof}")
    half = 0.5 * dof
    if y == 0.0:
        if dof == 2:
            return -math.log(2.0)
        return math.inf if dof == 1 else LOG_ZERO
    return (half - 1.0) * math.log(y) - 0.5 * y - half * math.log(2.0) - math.lgamma(half)


def _log_poisson_terms(lam: float, k_max: int) -> np.ndarray:
    """log of Poisson(lam) pmf for k = 0..k_max (lam > 0)."""
    k = np.arange(k_max + 1)
    from scipy.special import gammaln

    return k * math.log(lam) - lam - gammaln(k + 1.0)


def _poisson_span(lam: float) -> int:
    """Index beyond which the Poisson(lam) upper tail is < ~1e-18."""
    return int(math.ceil(lam + 12.0 * math.sqrt(lam + 1.0) + 30.0))


def log_marcum_q(a: float, b: float) -> float:
    """log Q(a, b) for the (first-order) Marcum Q function.

    Series over the Poisson mixture of regularized upper incomplete
    gammas, accumulated entirely in the log domain.
    """
    if a < 0.0 or b < 0.0:
        raise ValueError("marcum_q requires a, b >= 0")
    if b == 0.0:
        return 0.0
    x = 0.5 * b * b
    lam = 0.5 * a * a
    if lam == 0.0:
        return -x
    k_max = max(_poisson_span(lam), _poisson_span(x))
    log_pois = _log_poisson_terms(lam, k_max)
    # log of e^{-x} x^j / j!, cumulated: log Gamma_upper_reg(k+1, x).
    log_gx = _log_poisson_terms(x, k_max)
    log_upper = np.logaddexp.accumulate(log_gx)
    return min(0.0, float(log_sum_exp(log_pois + log_upper)))


def log_marcum_q_complement(a: float, b: float) -> float:
    """log(1 - Q(a, b)), accurate when Q is close to one.

    Uses the complementary series with the *lower* regularized
    incomplete gamma, so no cancellation against one occurs.
    """
    if a < 0.0 or b < 0.0:
        raise ValueError("marcum_q requires a, b >= 0")
    if b == 0.0:
        return LOG_ZERO
    x = 0.5 * b * b
    lam = 0.5 * a * a
    k_max = max(_poisson_span(lam), _poisson_span(x)) if lam > 0.0 else _poisson_span(x)
    log_gx = _log_poisson_terms(x, k_max)
    # Suffix cumulation: log P_reg(k+1, x) = log sum_{j>k} e^{-x} x^j / j!.
    # The suffix beyond k_max is negligible by construction of k_max.
    log_lower = np.logaddexp.accumulate(log_gx[::-1])[::-1]
    log_lower = np.append(log_lower[1:], LOG_ZERO)
    if lam == 0.0:
        return float(log_lower[0])
    log_pois = _log_poisson_terms(lam, k_max)
    return min(0.0, float(log_sum_exp(log_pois + log_lower)))


def marcum_q(a: float, b: float) -> float:
    """Marcum Q(a, b) as a probability in [0, 1]."""
    lq = log_marcum_q(a, b)
    if lq > LOG_HALF:
        return 1.0 - math.exp(log_marcum_q_complement(a, b))
    return math.exp(lq)


def gauss_legendre(n_nodes: int, lo: float, hi: float) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [lo, hi].

    Exact for polynomials up to degree 2*n_nodes - 1.
    """
    if n_nodes < 1:
        raise ValueError(f"gauss_legendre requires n_nodes >= 1, got {n_nodes}")
    if not lo < hi:
        raise ValueError(f"gauss_legendre requires lo < hi, got [{lo}, {hi}]")
    x, w = np.polynomial.legendre.leggauss(n_nodes)
    half = 0.5 * (hi - lo)
    return lo + half * (x + 1.0), half * w


def golden_section_min(f, lo: float, hi: float, tol: float, max_iter: int = 400):
    """Minimize a unimodal scalar function on [lo, hi].

    Returns (x_min, f_min).  `tol` is the absolute interval tolerance.
    """
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    if fc < fd:
        return c, fc
    return d, fd
