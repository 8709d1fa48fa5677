"""Summaries: quantiles, intervals, histograms, and the KS statistic."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad
from scipy.optimize import brentq

from relcalc import (
    BetaParams,
    InvalidParameterError,
    RngStream,
    beta_pdf,
    histogram,
    ks_two_sample,
    quantile,
    sample_beta,
    summarize,
)


def _beta_quantile_by_quadrature(p: BetaParams, q: float) -> float:
    """Invert the CDF numerically: independent of any sampling code."""

    def cdf(t):
        return quad(lambda u: beta_pdf(p, u), 0.0, t, limit=200)[0] - q

    return brentq(cdf, 1e-12, 1 - 1e-12, xtol=1e-10)


@pytest.fixture(scope="module")
def beta_3_19_draws():
    rng = RngStream(500)
    p = BetaParams(3, 19)
    return np.array([sample_beta(rng, p) for _ in range(100_000)])


class TestQuantile:
    def test_exact_middle(self):
        assert quantile(np.array([0.1, 0.2, 0.3]), 0.5) == pytest.approx(0.2)

    def test_linear_interpolation(self):
        assert quantile(np.array([0.0, 1.0]), 0.25) == pytest.approx(0.25)

    def test_endpoints_are_min_and_max(self):
        values = np.array([0.42, 0.1, 0.9, 0.5])
        assert quantile(values, 0.0) == 0.1
        assert quantile(values, 1.0) == 0.9

    @given(
        values=st.lists(st.floats(min_value=0.0, max_value=1.0), min_size=1, max_size=50),
        qs=st.tuples(
            st.floats(min_value=0.0, max_value=1.0),
            st.floats(min_value=0.0, max_value=1.0),
        ),
    )
    def test_monotone_in_q(self, values, qs):
        lo, hi = sorted(qs)
        arr = np.array(values)
        assert quantile(arr, lo) <= quantile(arr, hi) + 1e-15

    def test_empty_rejected(self):
        with pytest.raises(InvalidParameterError):
            quantile(np.array([]), 0.5)

    def test_q_out_of_range(self):
        with pytest.raises(InvalidParameterError):
            quantile(np.array([0.5]), 1.5)


class TestSummarize:
    def test_full_level_interval_spans_extremes(self):
        report = summarize(np.array([0.2, 0.4, 0.6, 0.8]), level=1.0)
        assert report.mean == pytest.approx(0.5)
        assert (report.interval_low, report.interval_high) == (0.2, 0.8)

    def test_degenerate_sample(self):
        report = summarize(np.full(100, 0.5), level=0.95)
        assert report.mean == 0.5
        assert report.variance == 0.0
        assert (report.interval_low, report.interval_high) == (0.5, 0.5)

    def test_single_observation_has_zero_variance(self):
        assert summarize(np.array([0.3])).variance == 0.0

    def test_beta_draws_match_quadrature_inverted_quantiles(self, beta_3_19_draws):
        report = summarize(beta_3_19_draws, level=0.95)
        p = BetaParams(3, 19)
        assert abs(report.mean - 3 / 22) < 0.004
        assert abs(report.interval_low - _beta_quantile_by_quadrature(p, 0.025)) < 0.01
        assert abs(report.interval_high - _beta_quantile_by_quadrature(p, 0.975)) < 0.01

    def test_interval_narrows_as_level_drops(self, beta_3_19_draws):
        widths = [
            (lambda r: r.interval_high - r.interval_low)(summarize(beta_3_19_draws, level))
            for level in (0.99, 0.95, 0.8, 0.5)
        ]
        assert all(a >= b for a, b in zip(widths, widths[1:]))

    def test_level_validated(self):
        with pytest.raises(InvalidParameterError):
            summarize(np.array([0.5]), level=0.0)

    def test_empty_rejected(self):
        with pytest.raises(InvalidParameterError):
            summarize(np.array([]))


class TestHistogram:
    def test_two_bins(self):
        h = histogram(np.array([0.05, 0.95]), 2)
        assert h.counts.tolist() == [1, 1]

    def test_value_one_lands_in_last_bin(self):
        h = histogram(np.array([1.0]), 10)
        assert h.counts.tolist()[-1] == 1
        assert h.counts.sum() == 1

    def test_counts_sum_and_density_normalisation(self, beta_3_19_draws):
        h = histogram(beta_3_19_draws, 50)
        assert h.counts.sum() == beta_3_19_draws.size
        width = 1.0 / 50
        assert abs(float((h.densities * width).sum()) - 1.0) < 1e-9

    def test_densities_track_exact_bin_averages(self):
        # multinomial 4-sigma envelope around the quadrature bin mass
        rng = RngStream(501)
        p = BetaParams(2, 10)
        draws = np.array([sample_beta(rng, p) for _ in range(100_000)])
        n_bins = 50
        h = histogram(draws, n_bins)
        width = 1.0 / n_bins
        for k in range(n_bins):
            mass = quad(lambda t: beta_pdf(p, t), k * width, (k + 1) * width)[0]
            sigma = np.sqrt(mass * (1 - mass) / draws.size) / width
            assert abs(h.densities[k] - mass / width) <= 4 * sigma + 1e-9

    def test_bins_validated(self):
        with pytest.raises(InvalidParameterError):
            histogram(np.array([0.5]), 0)

    def test_empty_rejected(self):
        with pytest.raises(InvalidParameterError):
            histogram(np.array([]), 10)


class TestKsTwoSample:
    def test_identical_samples_give_zero(self):
        values = np.array([0.1, 0.4, 0.4, 0.9])
        assert ks_two_sample(values, values) == 0.0

    def test_disjoint_supports_give_one(self):
        a = np.full(10, 0.1)
        b = np.full(7, 0.9)
        assert ks_two_sample(a, b) == 1.0

    def test_same_distribution_stays_small(self):
        p = BetaParams(3, 19)
        rng_a, rng_b = RngStream(601), RngStream(602)
        a = np.array([sample_beta(rng_a, p) for _ in range(10_000)])
        b = np.array([sample_beta(rng_b, p) for _ in range(10_000)])
        assert ks_two_sample(a, b) < 0.03

    def test_symmetry(self):
        rng = RngStream(603)
        a = np.array([rng.uniform() for _ in range(100)])
        b = np.array([rng.uniform() for _ in range(200)])
        assert ks_two_sample(a, b) == ks_two_sample(b, a)

    def test_known_small_case(self):
        # F_a jumps at .2/.6, F_b at .4/.8; largest gap is 1/2 at [.2,.4)
        a = np.array([0.2, 0.6])
        b = np.array([0.4, 0.8])
        assert ks_two_sample(a, b) == pytest.approx(0.5)

    def test_empty_rejected(self):
        with pytest.raises(InvalidParameterError):
            ks_two_sample(np.array([]), np.array([0.5]))
