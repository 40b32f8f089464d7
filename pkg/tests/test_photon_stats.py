import math

import numpy as np
import pytest

from qicd.photon_stats import (
    Fixed,
    Rayleigh,
    ScenarioParams,
    gamma_n,
    idler_stats,
    phase_averaged_displaced_thermal_pmf,
    required_cutoff,
    thermal_pmf,
)

from _oracles import STOCK_E_KAPPA, STOCK_MU, STOCK_XI

STOCK = ScenarioParams(n_s=0.001, n_e=20.0, reflectivity=Fixed(0.01), m=1)


class TestScenarioParams:
    def test_validation(self):
        with pytest.raises(ValueError):
            ScenarioParams(-0.1, 20.0, Fixed(0.01), 1)
        with pytest.raises(ValueError):
            ScenarioParams(0.001, -1.0, Fixed(0.01), 1)
        with pytest.raises(ValueError):
            ScenarioParams(0.001, 20.0, Fixed(0.01), 0)
        with pytest.raises(ValueError):
            Fixed(1.5)
        with pytest.raises(ValueError):
            Rayleigh(0.0)
        with pytest.raises(ValueError):
            Rayleigh(1.0)

    def test_with_m(self):
        p = STOCK.with_m(10**6)
        assert p.m == 10**6
        assert p.n_s == STOCK.n_s
        assert p.reflectivity == STOCK.reflectivity


class TestIdlerStats:
    def test_stock_values(self):
        s = idler_stats(STOCK, 0.01)
        assert s.xi == pytest.approx(STOCK_XI, rel=1e-14)
        assert s.mu == pytest.approx(STOCK_MU, rel=1e-14)
        assert s.e_kappa == pytest.approx(STOCK_E_KAPPA, rel=1e-14)
        assert s.sigma2 == pytest.approx(0.5 * (0.01 * 0.001 + 0.99 * 20.0 + 1.0), rel=1e-14)

    def test_internal_consistency(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            p = ScenarioParams(rng.uniform(1e-4, 0.5), rng.uniform(0.0, 40.0), Fixed(0.5), 1)
            k = rng.uniform(0.0, 1.0)
            s = idler_stats(p, k)
            assert s.xi == pytest.approx(s.mu**2 * s.sigma2, rel=1e-14)
            assert s.c_p == pytest.approx(math.sqrt(k * p.n_s * (p.n_s + 1.0)), rel=1e-14)
            assert s.e_kappa >= 0.0

    def test_kappa_limits(self):
        s0 = idler_stats(STOCK, 0.0)
        assert s0.mu == 0.0 and s0.xi == 0.0
        # Full reflectivity removes the background from the conditional state.
        s1 = idler_stats(STOCK, 1.0)
        assert s1.e_kappa == 0.0

    def test_domain_error(self):
        with pytest.raises(ValueError):
            idler_stats(STOCK, 1.2)


class TestThermalPmf:
    def test_closed_form(self):
        n_mean = 1.7
        pmf = thermal_pmf(n_mean)
        n = np.arange(pmf.cutoff + 1)
        exact = n * (math.log(n_mean) - math.log1p(n_mean)) - math.log1p(n_mean)
        assert np.allclose(pmf.log_probs, exact, rtol=1e-14)

    def test_normalization_and_tail(self):
        for n_mean in (1e-6, 0.02, 1.0, 35.0):
            pmf = thermal_pmf(n_mean)
            total = math.fsum(np.exp(pmf.log_probs))
            assert total + pmf.tail_bound == pytest.approx(1.0, abs=1e-13)
            assert pmf.tail_bound <= 1e-18 * 1.001

    def test_zero_mean(self):
        pmf = thermal_pmf(0.0)
        assert pmf.cutoff == 0
        assert pmf.log_probs[0] == 0.0
        assert pmf.tail_bound == 0.0

    def test_mean(self):
        for n_mean in (0.3, 5.0):
            assert thermal_pmf(n_mean).mean() == pytest.approx(n_mean, rel=1e-12)


def _oracle_log_pmf(d2, e, n_max):
    """Independent displaced-thermal pmf via mpmath's Kummer function."""
    import mpmath as mp

    mp.mp.dps = 40
    d2m, em = mp.mpf(d2), mp.mpf(e)
    z = d2m / (em * (1 + em))
    out = []
    for n in range(n_max + 1):
        p = (
            (em / (1 + em)) ** n
            / (1 + em)
            * mp.exp(-d2m / em)
            * mp.hyp1f1(n + 1, 1, z)
        )
        out.append(float(mp.log(p)))
    return np.array(out)


class TestDisplacedThermalPmf:
    def test_mpmath_oracle(self):
        for d2, e in ((0.5, 0.3), (4.0, 1.2), (9.0, 0.001), (0.01, 2.0)):
            pmf = phase_averaged_displaced_thermal_pmf(d2, e)
            n_check = min(pmf.cutoff, 40)
            oracle = _oracle_log_pmf(d2, e, n_check)
            assert np.allclose(pmf.log_probs[: n_check + 1], oracle, atol=5e-11)

    def test_monte_carlo_oracle(self):
        # P-representation: displaced thermal = coherent states with
        # amplitude alpha + beta, beta complex Gaussian of variance e, so
        # p_n is a Poisson mixture over |alpha + beta|^2.
        rng = np.random.default_rng(2024)
        n_samp = 400_000
        for d2, e in ((2.0, 0.8), (0.3, 0.05)):
            beta = (rng.normal(size=n_samp) + 1j * rng.normal(size=n_samp)) * math.sqrt(e / 2.0)
            intensity = np.abs(math.sqrt(d2) + beta) ** 2
            counts = rng.poisson(intensity)
            pmf = phase_averaged_displaced_thermal_pmf(d2, e)
            for n in range(0, 6):
                p_mc = np.mean(counts == n)
                se = math.sqrt(max(p_mc * (1.0 - p_mc), 1e-12) / n_samp)
                assert math.exp(pmf.log_probs[n]) == pytest.approx(p_mc, abs=4.0 * se)

    def test_normalization_certified(self):
        rng = np.random.default_rng(99)
        for _ in range(40):
            d2 = rng.uniform(0.0, 25.0)
            e = math.exp(rng.uniform(math.log(1e-8), math.log(8.0)))
            pmf = phase_averaged_displaced_thermal_pmf(d2, e)
            total = math.fsum(np.exp(pmf.log_probs))
            assert 1.0 - pmf.tail_bound - 1e-10 <= total <= 1.0 + 1e-10
            assert pmf.tail_bound <= 1e-18 * 1.001

    def test_first_moment(self):
        rng = np.random.default_rng(5)
        for _ in range(25):
            d2 = rng.uniform(0.0, 15.0)
            e = math.exp(rng.uniform(math.log(1e-7), math.log(4.0)))
            pmf = phase_averaged_displaced_thermal_pmf(d2, e)
            assert pmf.mean() == pytest.approx(d2 + e, rel=1e-9, abs=1e-11)

    def test_second_moment(self):
        # Var(n) = e(1+e) + d2(1+2e) for the phase-averaged state.
        for d2, e in ((3.0, 0.7), (0.2, 2.5)):
            pmf = phase_averaged_displaced_thermal_pmf(d2, e)
            n = np.arange(pmf.cutoff + 1)
            var = float(np.sum(n**2 * np.exp(pmf.log_probs))) - pmf.mean() ** 2
            assert var == pytest.approx(e * (1.0 + e) + d2 * (1.0 + 2.0 * e), rel=1e-9)

    def test_poisson_limit(self):
        from scipy.stats import poisson

        d2 = 3.0
        pmf = phase_averaged_displaced_thermal_pmf(d2, 0.0)
        n = np.arange(pmf.cutoff + 1)
        assert np.allclose(pmf.log_probs, poisson.logpmf(n, d2), atol=1e-10)

    def test_zero_displacement_is_thermal(self):
        pmf = phase_averaged_displaced_thermal_pmf(0.0, 1.3)
        ref = thermal_pmf(1.3)
        assert np.allclose(pmf.log_probs, ref.log_probs)

    def test_forced_cutoff(self):
        pmf = phase_averaged_displaced_thermal_pmf(1.0, 0.5, cutoff=80)
        assert pmf.cutoff == 80
        free = phase_averaged_displaced_thermal_pmf(1.0, 0.5)
        m = min(pmf.cutoff, free.cutoff)
        assert np.allclose(pmf.log_probs[: m + 1], free.log_probs[: m + 1])

    def test_required_cutoff_consistent(self):
        assert required_cutoff(2.0, 0.4) == phase_averaged_displaced_thermal_pmf(2.0, 0.4).cutoff

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            phase_averaged_displaced_thermal_pmf(-1.0, 0.5)
        with pytest.raises(ValueError):
            phase_averaged_displaced_thermal_pmf(1.0, -0.5)


class TestGammaN:
    def test_matches_pmf_difference(self):
        p = STOCK.with_m(10**7)
        stats = idler_stats(p, 0.01)
        y = 2.0 * p.m
        absent = thermal_pmf(p.n_s)
        present = phase_averaged_displaced_thermal_pmf(stats.xi * y, stats.e_kappa)
        for n in range(min(absent.cutoff, present.cutoff) + 1):
            expect = math.exp(absent.log_probs[n]) - math.exp(present.log_probs[n])
            assert gamma_n(n, y, p, 0.01) == pytest.approx(expect, rel=1e-9, abs=1e-300)

    def test_single_sign_change(self):
        # The two hypotheses cross exactly once in photon number, which
        # is what makes a single counting threshold optimal.
        for kappa in (1e-3, 1e-2, 0.1):
            for m in (10**5, 10**7):
                p = ScenarioParams(0.001, 20.0, Fixed(kappa), m)
                y = 2.0 * p.m
                stats = idler_stats(p, kappa)
                absent = thermal_pmf(p.n_s)
                present = phase_averaged_displaced_thermal_pmf(stats.xi * y, stats.e_kappa)
                top = max(absent.cutoff, present.cutoff)
                vals = [gamma_n(n, y, p, kappa) for n in range(top + 1)]
                signs = [v for v in np.sign(vals) if v != 0.0]
                changes = sum(1 for a, b in zip(signs, signs[1:]) if a != b)
                assert changes == 1
