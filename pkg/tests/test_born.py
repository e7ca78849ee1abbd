import math

import numpy as np
import pytest
from scipy import integrate, stats

from symquant.born import (MCEstimate, RateModel, as_pairs, born, born_array, mean_rate_closed,
                           mean_rate_mc, phases, poisson_stream, prior_moments, sample_prior,
                           solve_alpha, two_source_rates)
from symquant.errors import DomainError, SymquantError
from symquant.pairs import ELLIPTIC, Pair, pair_sum, product


def quadrature_mean_rate(alpha):
    """Independent oracle: average of (2 + 2 cos t)**(alpha/2) over one period."""
    val, _ = integrate.quad(lambda t: (2 + 2 * math.cos(t)) ** (alpha / 2), 0, 2 * math.pi, limit=200)
    return val / (2 * math.pi)


class TestClosedForm:
    def test_alpha_two_is_exactly_two(self):
        assert mean_rate_closed(2) == 2.0

    def test_alpha_zero(self):
        assert mean_rate_closed(0) == 1.0

    def test_alpha_four(self):
        assert mean_rate_closed(4) == pytest.approx(6.0, rel=1e-15)

    def test_alpha_one(self):
        assert mean_rate_closed(1) == pytest.approx(4 / math.pi, rel=1e-15)

    @pytest.mark.parametrize("alpha", [0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 6.5])
    def test_matches_quadrature(self, alpha):
        assert mean_rate_closed(alpha) == pytest.approx(quadrature_mean_rate(alpha), rel=1e-9)

    def test_large_alpha_log_gamma_path(self):
        a = 200.0
        expected = math.exp(math.lgamma(a + 1) - 2 * math.lgamma(a / 2 + 1))
        assert mean_rate_closed(a) == pytest.approx(expected, rel=1e-12)
        assert mean_rate_closed(150.0) == pytest.approx(
            math.exp(math.lgamma(151) - 2 * math.lgamma(76)), rel=1e-12)

    def test_pole(self):
        with pytest.raises(DomainError):
            mean_rate_closed(-1)


class TestMonteCarlo:
    def test_alpha_two(self):
        mc = mean_rate_mc(2, 10**6, seed=0)
        assert abs(mc.estimate - 2) <= 4 * mc.std_error
        assert mc.std_error < 0.003

    def test_alpha_zero_exact(self):
        mc = mean_rate_mc(0, 12345, seed=9)
        assert mc == MCEstimate(1.0, 0.0, 12345)

    def test_alpha_one(self):
        mc = mean_rate_mc(1, 10**6, seed=1)
        assert abs(mc.estimate - 4 / math.pi) <= 4 * mc.std_error

    def test_std_error_definition(self):
        # one chunk: compare against a direct numpy computation on the same draws
        n = 5000
        mc = mean_rate_mc(3, n, seed=4)
        rng = np.random.default_rng(np.random.SeedSequence(4).spawn(1)[0])
        th, ph = rng.uniform(0, 2 * math.pi, n), rng.uniform(0, 2 * math.pi, n)
        f = np.abs(np.exp(1j * th) + np.exp(1j * ph)) ** 3
        assert mc.estimate == pytest.approx(f.mean(), rel=1e-12)
        assert mc.std_error == pytest.approx(f.std(ddof=1) / math.sqrt(n), rel=1e-9)

    def test_thread_count_does_not_change_result(self):
        assert mean_rate_mc(2.5, 300_000, seed=11, threads=1) == mean_rate_mc(2.5, 300_000, seed=11, threads=4)

    def test_seeded(self):
        assert mean_rate_mc(1.5, 1000, seed=3) == mean_rate_mc(1.5, 1000, seed=3)
        assert mean_rate_mc(1.5, 1000, seed=3) != mean_rate_mc(1.5, 1000, seed=4)

    def test_bad_count(self):
        with pytest.raises(SymquantError):
            mean_rate_mc(2, 0)


class TestSolveAlpha:
    def test_target_two(self):
        assert solve_alpha(2.0) == pytest.approx(2.0, abs=1e-8)

    def test_target_one(self):
        assert solve_alpha(1.0) == 0.0

    def test_target_six(self):
        assert solve_alpha(6.0) == pytest.approx(4.0, abs=1e-8)

    @pytest.mark.parametrize("target", [1.3, 2.7, 15.0, 69.0])
    def test_residual_within_tol(self, target):
        assert abs(mean_rate_closed(solve_alpha(target, tol=1e-10)) - target) <= 1e-10

    @pytest.mark.parametrize("target", [0.5, 71.0])
    def test_outside_bracket(self, target):
        with pytest.raises(DomainError):
            solve_alpha(target)


class TestBorn:
    def test_values(self):
        assert born(Pair(3, 4)) == 25
        assert born(Pair(0, 0)) == 0

    def test_multiplicative(self, rng):
        for row in rng.normal(size=(100, 4)):
            u, v = Pair(*row[:2]), Pair(*row[2:])
            assert born(product(ELLIPTIC, u, v)) == pytest.approx(born(u) * born(v), rel=1e-12)

    def test_not_additive_for_coherent_phases(self):
        x1 = x2 = Pair(1, 0)
        assert born(pair_sum(x1, x2)) == 4 != born(x1) + born(x2)

    def test_additive_in_quadrature(self):
        x1, x2 = Pair(1, 0), Pair(0, 1)
        assert born(pair_sum(x1, x2)) == born(x1) + born(x2)

    def test_two_source_mean(self):
        p = two_source_rates(10**6, seed=5)
        se = p.std(ddof=1) / math.sqrt(p.size)
        assert abs(p.mean() - 2) <= 4 * se


class TestPrior:
    def test_mean_rate(self):
        x = sample_prior(1.0, 10**6, seed=2)
        p = born_array(x)
        assert abs(p.mean() - 1) <= 4 * p.std(ddof=1) / math.sqrt(p.size)

    def test_phases_uniform(self):
        ph = phases(sample_prior(1.0, 10**6, seed=3))
        assert ph.min() >= 0 and ph.max() < 2 * math.pi
        assert stats.kstest(ph / (2 * math.pi), "uniform").pvalue > 0.01

    def test_exponential_variance(self):
        p = born_array(sample_prior(4.0, 10**6, seed=4))
        assert p.var(ddof=1) == pytest.approx(16.0, rel=0.05)

    def test_born_is_exponential(self):
        p = born_array(sample_prior(2.0, 200_000, seed=6))
        assert stats.kstest(p, "expon", args=(0, 2.0)).pvalue > 0.01

    def test_prior_moments_match_materialised(self):
        m = prior_moments(1.0, 1000, seed=1)
        rng = np.random.default_rng(np.random.SeedSequence(1).spawn(1)[0])
        p = born_array(rng.normal(0, math.sqrt(0.5), size=(1000, 2)))
        assert m.mean == pytest.approx(p.mean(), rel=1e-12)
        assert m.var == pytest.approx(p.var(ddof=1), rel=1e-9)

    @pytest.mark.parametrize("k", [2, 4, 16])
    def test_infinitely_divisible(self, k):
        r, n = 3.0, 200_000
        parts = sum(sample_prior(r / k, n, seed=100 + j) for j in range(k))
        whole = sample_prior(r, n, seed=99)
        sd2 = math.sqrt(2 * (r / 2) ** 2 / n)  # std error of a mean of x**2
        for x in (parts, whole):
            assert np.all(np.abs(x.mean(axis=0)) <= 4 * math.sqrt(r / 2 / n))
            assert np.all(np.abs((x ** 2).mean(axis=0) - r / 2) <= 4 * sd2)
        diff = np.abs((parts ** 2).mean(axis=0) - (whole ** 2).mean(axis=0))
        assert np.all(diff <= 4 * math.sqrt(2) * sd2)

    def test_as_pairs(self):
        x = sample_prior(1.0, 3, seed=0)
        assert [tuple(p) for p in as_pairs(x)] == [tuple(r) for r in x]

    def test_validation(self):
        with pytest.raises(DomainError):
            RateModel(0)
        with pytest.raises(DomainError):
            sample_prior(-1, 10)
        with pytest.raises(SymquantError):
            sample_prior(1, 0)


class TestPoisson:
    def test_count(self):
        t = poisson_stream(3.0, 1000.0, seed=1)
        assert abs(t.size - 3000) <= 4 * math.sqrt(3000)

    def test_sorted_in_window(self):
        t = poisson_stream(2.0, 50.0, seed=2)
        assert np.all(np.diff(t) > 0) and t[0] >= 0 and t[-1] < 50.0

    def test_inter_arrival_mean(self):
        r = 7.5
        gaps = np.diff(np.concatenate([[0.0], poisson_stream(r, 5000.0, seed=3)]))
        assert abs(gaps.mean() - 1 / r) <= 4 * (1 / r) / math.sqrt(gaps.size)
        assert stats.kstest(gaps, "expon", args=(0, 1 / r)).pvalue > 0.01

    def test_empty_window_is_valid(self):
        t = poisson_stream(1e-3, 1e-3, seed=0)
        assert t.size == 0

    def test_count_distribution(self):
        counts = np.array([poisson_stream(2.0, 5.0, seed=s).size for s in range(2000)])
        se = math.sqrt(10.0 / counts.size)
        assert abs(counts.mean() - 10.0) <= 4 * se
        assert counts.var(ddof=1) == pytest.approx(10.0, rel=0.15)

    def test_validation(self):
        with pytest.raises(DomainError):
            poisson_stream(1.0, 0.0)
