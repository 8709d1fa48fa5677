"""Beta and binomial primitives for pass/fail reliability data.

A survival probability theta gets a Beta(alpha, beta) prior; observing x
successes out of n trials updates it conjugately to
Beta(alpha + x, beta + n - x). Priors can be stated directly as shapes or
elicited from a point estimate and an effective sample size. All
gamma-function arithmetic goes through log-gamma so large shape sums do not
overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import BoundaryDensityError, InvalidParameterError
from .rng import RngStream


@dataclass(frozen=True)
class BetaParams:
    """Shape pair of a beta distribution over a survival probability."""

    alpha: float
    beta: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))
        for name, value in (("alpha", self.alpha), ("beta", self.beta)):
            if not math.isfinite(value) or value <= 0.0:
                raise InvalidParameterError(
                    f"{name} must be a finite positive number, got {value}"
                )


@dataclass(frozen=True)
class TestRecord:
    """Pass/fail campaign outcome: x successes out of n trials."""

    __test__ = False  # keep pytest from collecting this as a test class

    n: int
    x: int

    def __post_init__(self):
        for name, value in (("n", self.n), ("x", self.x)):
            if not isinstance(value, int) or isinstance(value, bool):
                raise InvalidParameterError(f"{name} must be an integer, got {value!r}")
        if self.n < 0:
            raise InvalidParameterError(f"n must be >= 0, got {self.n}")
        if not 0 <= self.x <= self.n:
            raise InvalidParameterError(
                f"x must be in [0, n] = [0, {self.n}], got {self.x}"
            )


@dataclass(frozen=True)
class PriorElicitation:
    """Prior point estimate plus the effective sample size behind it."""

    theta_hat_pr: float
    n_pr: float

    def __post_init__(self):
        object.__setattr__(self, "theta_hat_pr", float(self.theta_hat_pr))
        object.__setattr__(self, "n_pr", float(self.n_pr))
        if not 0.0 <= self.theta_hat_pr <= 1.0:
            raise InvalidParameterError(
                f"theta_hat_pr must be in [0, 1], got {self.theta_hat_pr}"
            )
        if not math.isfinite(self.n_pr) or self.n_pr < 0.0:
            raise InvalidParameterError(
                f"n_pr must be finite and >= 0, got {self.n_pr}"
            )


def elicit_prior(e: PriorElicitation) -> BetaParams:
    """Beta prior from a point estimate and effective sample size.

    alpha = n_pr * theta_hat + 1 and beta = n_pr * (1 - theta_hat) + 1, so
    both shapes are >= 1 and n_pr = 0 gives the flat Beta(1, 1).
    """
    return BetaParams(
        e.n_pr * e.theta_hat_pr + 1.0,
        e.n_pr * (1.0 - e.theta_hat_pr) + 1.0,
    )


def beta_mean(p: BetaParams) -> float:
    """alpha / (alpha + beta); always strictly inside (0, 1)."""
    return p.alpha / (p.alpha + p.beta)


def beta_variance(p: BetaParams) -> float:
    """alpha*beta / ((alpha+beta)**2 * (alpha+beta+1))."""
    s = p.alpha + p.beta
    return p.alpha * p.beta / (s * s * (s + 1.0))


def beta_pdf(p: BetaParams, theta: float) -> float:
    """Beta density at theta in [0, 1].

    Boundary values where the density diverges (theta=0 with alpha<1,
    theta=1 with beta<1) raise BoundaryDensityError instead of returning
    infinity, so downstream consumers only ever see finite numbers.
    """
    theta = float(theta)
    if not 0.0 <= theta <= 1.0:
        raise InvalidParameterError(f"theta must be in [0, 1], got {theta}")
    if theta == 0.0:
        if p.alpha < 1.0:
            raise BoundaryDensityError(
                f"infinite density at boundary theta=0 for alpha={p.alpha} < 1"
            )
        return p.beta if p.alpha == 1.0 else 0.0
    if theta == 1.0:
        if p.beta < 1.0:
            raise BoundaryDensityError(
                f"infinite density at boundary theta=1 for beta={p.beta} < 1"
            )
        return p.alpha if p.beta == 1.0 else 0.0
    log_norm = math.lgamma(p.alpha + p.beta) - math.lgamma(p.alpha) - math.lgamma(p.beta)
    log_kernel = (p.alpha - 1.0) * math.log(theta) + (p.beta - 1.0) * math.log1p(-theta)
    return math.exp(log_norm + log_kernel)


def conjugate_update(prior: BetaParams, data: TestRecord) -> BetaParams:
    """Posterior shapes after observing x successes out of n trials."""
    return BetaParams(prior.alpha + data.x, prior.beta + (data.n - data.x))


def beta_binomial_pmf(p: BetaParams, n: int, x: int) -> float:
    """Prior-predictive P(X = x) for X ~ Binomial(n, theta), theta ~ p.

    Equals C(n, x) * B(alpha+x, beta+n-x) / B(alpha, beta); this is also the
    acceptance probability of the exact rejection sampler conditioning on x.
    """
    record = TestRecord(int(n), int(x))  # validates 0 <= x <= n
    n, x = record.n, record.x
    log_choose = (
        math.lgamma(n + 1.0) - math.lgamma(x + 1.0) - math.lgamma(n - x + 1.0)
    )
    return math.exp(
        log_choose
        + _log_beta_fn(p.alpha + x, p.beta + (n - x))
        - _log_beta_fn(p.alpha, p.beta)
    )


def _log_beta_fn(a: float, b: float) -> float:
    return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)


def sample_beta(rng: RngStream, p: BetaParams) -> float:
    """One draw from Beta(alpha, beta), advancing the stream."""
    return rng.beta(p.alpha, p.beta)


def sample_binomial(rng: RngStream, n: int, theta: float) -> int:
    """One draw of the success count in n Bernoulli(theta) trials."""
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise InvalidParameterError(f"n must be a nonnegative integer, got {n!r}")
    theta = float(theta)
    if not 0.0 <= theta <= 1.0:
        raise InvalidParameterError(f"theta must be in [0, 1], got {theta}")
    return rng.binomial(n, theta)
