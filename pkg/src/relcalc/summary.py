"""Posterior summaries: moments, equal-tailed intervals, histograms, KS.

Quantiles use the type-7 convention (linear interpolation at rank
h = (n-1)q on the sorted sample) so identical samples summarise to
identical numbers everywhere. Credible intervals are equal-tailed: the
(1-level)/2 and 1-(1-level)/2 quantiles. Histograms always bin over [0, 1]
since every quantity here is a probability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError


@dataclass(frozen=True)
class SummaryReport:
    """Moments and equal-tailed credible interval of a sample."""

    mean: float
    variance: float
    interval_low: float
    interval_high: float
    credible_level: float
    n: int


@dataclass(frozen=True, eq=False)
class Histogram:
    """Uniform-bin histogram over [0, 1] with normalised densities."""

    edges: np.ndarray
    counts: np.ndarray
    densities: np.ndarray


def _values(s) -> np.ndarray:
    values = np.asarray(getattr(s, "values", s), dtype=np.float64)
    if values.ndim != 1:
        raise InvalidParameterError("sample must be one-dimensional")
    return values


def _nonempty(s) -> np.ndarray:
    values = _values(s)
    if values.size == 0:
        raise InvalidParameterError("empty sample")
    return values


def quantile(s, q: float) -> float:
    """Type-7 sample quantile: interpolate at h = (n-1)q on the sorted data."""
    values = _nonempty(s)
    q = float(q)
    if not 0.0 <= q <= 1.0:
        raise InvalidParameterError(f"q must be in [0, 1], got {q}")
    ordered = np.sort(values)
    h = (ordered.size - 1) * q
    lo = math.floor(h)
    hi = min(lo + 1, ordered.size - 1)
    frac = h - lo
    return float(ordered[lo] + frac * (ordered[hi] - ordered[lo]))


def summarize(s, level: float = 0.95) -> SummaryReport:
    """Sample mean, unbiased variance, and equal-tailed credible interval."""
    values = _nonempty(s)
    level = float(level)
    if not 0.0 < level <= 1.0:
        raise InvalidParameterError(f"credible level must be in (0, 1], got {level}")
    mean = float(values.mean())
    variance = float(values.var(ddof=1)) if values.size > 1 else 0.0
    tail = (1.0 - level) / 2.0
    return SummaryReport(
        mean=mean,
        variance=variance,
        interval_low=quantile(values, tail),
        interval_high=quantile(values, 1.0 - tail),
        credible_level=level,
        n=int(values.size),
    )


def histogram(s, n_bins: int = 50) -> Histogram:
    """Counts over n_bins uniform bins of [0, 1]; the last bin includes 1."""
    values = _nonempty(s)
    if not isinstance(n_bins, int) or isinstance(n_bins, bool) or n_bins < 1:
        raise InvalidParameterError(f"n_bins must be a positive integer, got {n_bins!r}")
    edges = np.linspace(0.0, 1.0, n_bins + 1)
    counts, _ = np.histogram(values, bins=edges)
    width = 1.0 / n_bins
    densities = counts / (values.size * width)
    return Histogram(edges=edges, counts=counts, densities=densities)


def ks_two_sample(a, b) -> float:
    """Two-sample Kolmogorov-Smirnov statistic: sup |F_a - F_b|."""
    xa = np.sort(_nonempty(a))
    xb = np.sort(_nonempty(b))
    pooled = np.concatenate([xa, xb])
    cdf_a = np.searchsorted(xa, pooled, side="right") / xa.size
    cdf_b = np.searchsorted(xb, pooled, side="right") / xb.size
    return float(np.abs(cdf_a - cdf_b).max())
