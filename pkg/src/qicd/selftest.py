"""Reduced-size invariant suites runnable from the CLI in under a minute."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .baselines import ci_helstrom, ci_roc, ng_lower_bound
from .cd_module import hypothesis_pmfs, pcd_largeM, pcd_poisson_threshold
from .discrimination import helstrom_diagonal, optimal_threshold, qcb_diagonal, threshold_error
from .fading import rayleigh_achievable, rayleigh_lower_bound, rayleigh_quadrature
from .numerics import (
    chi2_log_pdf,
    gauss_legendre,
    lambert_w_minus1,
    log_laguerre_1f1,
    marcum_q,
)
from .photon_stats import (
    Fixed,
    Rayleigh,
    ScenarioParams,
    idler_stats,
    phase_averaged_displaced_thermal_pmf,
    thermal_pmf,
)


@dataclass
class CheckResult:
    suite: str
    name: str
    passed: bool
    detail: str = ""


def _check(results, suite, name, ok, detail=""):
    results.append(CheckResult(suite, name, bool(ok), detail))


def suite_numerics(results: list, tol_scale: float = 1.0) -> None:
    rng = np.random.default_rng(20230817)
    worst = 0.0
    for _ in range(200):
        x = -math.exp(rng.uniform(math.log(1e-12), math.log(1.0 / math.e)))
        w = lambert_w_minus1(x)
        worst = max(worst, abs(w * math.exp(w) - x) / abs(x))
    _check(results, "numerics", "lambert_w_residual", worst <= 1e-13 * tol_scale, f"worst={worst:.2e}")

    mono = all(
        log_laguerre_1f1(n, z1) < log_laguerre_1f1(n, z2)
        for n in (1, 5, 40)
        for z1, z2 in ((0.5, 1.0), (3.0, 7.0), (20.0, 30.0))
    )
    _check(results, "numerics", "laguerre_1f1_monotone_in_z", mono)

    ok = True
    for dof in (2, 10, 20000):
        hi = dof + 20.0 * math.sqrt(2.0 * dof)
        ys, ws = gauss_legendre(400, 0.0, hi)
        total = float(np.sum(ws * np.exp([chi2_log_pdf(y, dof) for y in ys])))
        ok = ok and abs(total - 1.0) <= 1e-8 * tol_scale
    _check(results, "numerics", "chi2_normalization", ok)

    grid = np.linspace(0.0, 4.0, 9)
    ok = all(
        marcum_q(a, b1) >= marcum_q(a, b2) - 1e-12
        for a in grid
        for b1, b2 in zip(grid, grid[1:])
    ) and all(
        marcum_q(a2, b) >= marcum_q(a1, b) - 1e-12
        for b in grid
        for a1, a2 in zip(grid, grid[1:])
    )
    _check(results, "numerics", "marcum_q_monotone", ok)


def suite_photon_stats(results: list, tol_scale: float = 1.0) -> None:
    rng = np.random.default_rng(4257)
    ok_norm, ok_mean = True, True
    for _ in range(30):
        d2 = rng.uniform(0.0, 20.0)
        e = math.exp(rng.uniform(math.log(1e-6), math.log(5.0)))
        pmf = phase_averaged_displaced_thermal_pmf(d2, e)
        total = math.exp(pmf.log_total())
        ok_norm = ok_norm and abs(total - 1.0) <= pmf.tail_bound + 1e-12
        ok_mean = ok_mean and abs(pmf.mean() - (d2 + e)) <= 1e-10 * max(1.0, d2 + e) * tol_scale
    _check(results, "photon_stats", "pmf_normalization", ok_norm)
    _check(results, "photon_stats", "pmf_first_moment", ok_mean)

    ok_sign = True
    for kappa in (1e-3, 1e-2, 1e-1):
        for m in (10**4, 10**6, 10**8):
            p = ScenarioParams(0.001, 20.0, Fixed(kappa), m)
            stats = idler_stats(p, kappa)
            absent = thermal_pmf(p.n_s)
            present = phase_averaged_displaced_thermal_pmf(stats.xi * 2.0 * m, stats.e_kappa)
            n = max(absent.cutoff, present.cutoff)
            lp = np.full(n + 1, -np.inf)
            lq = np.full(n + 1, -np.inf)
            lp[: absent.cutoff + 1] = absent.log_probs
            lq[: present.cutoff + 1] = present.log_probs
            diff = np.exp(lp) - np.exp(lq)
            signs = np.sign(diff[np.abs(diff) > 1e-300])
            changes = int(np.sum(signs[:-1] != signs[1:]))
            ok_sign = ok_sign and changes == 1
    _check(results, "photon_stats", "gamma_single_sign_change", ok_sign)


def suite_discrimination(results: list, tol_scale: float = 1.0) -> None:
    rng = np.random.default_rng(991)
    ok_order, ok_sym, ok_qcb = True, True, True
    for _ in range(40):
        d2 = rng.uniform(0.0, 8.0)
        e = math.exp(rng.uniform(math.log(1e-4), math.log(2.0)))
        p = thermal_pmf(rng.uniform(1e-4, 1.0))
        q = phase_averaged_displaced_thermal_pmf(d2, e)
        hel = helstrom_diagonal(p, q).log_p_error
        thr = threshold_error(p, q, int(rng.integers(0, 5))).log_p_error
        best = optimal_threshold(p, q).log_p_error
        ok_order = ok_order and hel <= best + 1e-12 <= thr + 2e-12
        ok_order = ok_order and best <= math.log(0.5) + 1e-12
        ok_sym = ok_sym and abs(hel - helstrom_diagonal(q, p).log_p_error) <= 1e-12
        ok_qcb = ok_qcb and qcb_diagonal(p, q).log_p_error >= hel - 1e-12 * tol_scale
    _check(results, "discrimination", "helstrom_threshold_ordering", ok_order)
    _check(results, "discrimination", "helstrom_symmetry", ok_sym)
    _check(results, "discrimination", "qcb_upper_bounds_helstrom", ok_qcb)


def suite_cd_module(results: list, tol_scale: float = 1.0) -> None:
    base = ScenarioParams(0.001, 20.0, Fixed(0.01), 1)
    ms = np.round(np.geomspace(1e6, 6e7, 8)).astype(int)
    logs = [pcd_largeM(base.with_m(int(m))).log_p_error for m in ms]
    _check(results, "cd_module", "pcd_nonincreasing_in_m", all(a >= b for a, b in zip(logs, logs[1:])))
    kappas = np.linspace(0.002, 0.05, 6)
    logs_k = [
        pcd_largeM(ScenarioParams(0.001, 20.0, Fixed(float(k)), 10**7)).log_p_error
        for k in kappas
    ]
    _check(results, "cd_module", "pcd_nonincreasing_in_kappa", all(a >= b for a, b in zip(logs_k, logs_k[1:])))
    p = base.with_m(10**7)
    stats = idler_stats(p, 0.01)
    kennedy = pcd_poisson_threshold(p, 0).log_p_error
    expect = -math.log(2.0) - 2.0 * stats.xi * p.m
    _check(results, "cd_module", "kennedy_closed_form", abs(kennedy - expect) <= 1e-12 * tol_scale)


def suite_baselines_fading(results: list, tol_scale: float = 1.0) -> None:
    ok_ci = True
    for m in (10**6, 10**7):
        for refl in (Fixed(0.01), Rayleigh(0.01)):
            p = ScenarioParams(0.001, 20.0, refl, m)
            h = ci_helstrom(p).log_p_error
            r = ci_roc(p).log_p_error
            ok_ci = ok_ci and abs(math.exp(h - r) - 1.0) <= 1e-3 * tol_scale
    _check(results, "baselines", "ci_two_methods_agree", ok_ci)

    p = ScenarioParams(0.001, 20.0, Fixed(0.01), 10**7)
    hel = pcd_largeM(p).log_p_error
    absent, present = hypothesis_pmfs(p, 2.0 * p.m)
    _check(
        results,
        "baselines",
        "bound_ordering",
        ng_lower_bound(p).log_p_error <= hel <= qcb_diagonal(absent, present).log_p_error,
    )

    quad = rayleigh_quadrature(0.01, 32)
    _check(results, "fading", "quadrature_weights_normalized", abs(np.sum(quad.weights) - 1.0) <= 1e-12)
    pr = ScenarioParams(0.001, 20.0, Rayleigh(0.01), 10**7)
    lb = rayleigh_lower_bound(pr, 32).log_p_error
    ach = rayleigh_achievable(pr, 32).log_p_error
    _check(results, "fading", "lower_bound_below_achievable", lb <= ach + 1e-12)


SUITES = {
    "numerics": suite_numerics,
    "photon_stats": suite_photon_stats,
    "discrimination": suite_discrimination,
    "cd_module": suite_cd_module,
    "baselines_fading": suite_baselines_fading,
}


def run_selftest(inject_failure: str | None = None) -> tuple[bool, str]:
    """Run all invariant suites; returns (all_passed, report_text).

    `inject_failure` names a suite whose tolerances get corrupted by a
    large factor, as a harness check that failures are actually caught.
    """
    lines = []
    all_ok = True
    for suite_name, fn in SUITES.items():
        results: list[CheckResult] = []
        t0 = time.perf_counter()
        tol_scale = 1e-9 if inject_failure == suite_name else 1.0
        fn(results, tol_scale=tol_scale)
        dt = time.perf_counter() - t0
        for r in results:
            all_ok = all_ok and r.passed
            status = "PASS" if r.passed else "FAIL"
            detail = f" ({r.detail})" if r.detail else ""
            lines.append(f"{status} {r.suite}.{r.name}{detail}")
        lines.append(f"     suite {suite_name}: {len(results)} checks in {dt:.2f}s")
    lines.append("selftest: " + ("all checks passed" if all_ok else "FAILURES detected"))
    return all_ok, "\n".join(lines)
