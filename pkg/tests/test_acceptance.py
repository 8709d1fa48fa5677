"""Acceptance suite: one test per exit criterion, at its stated tolerance.

The conftest hook prints one PASS/FAIL line per criterion at the end of the
run. Oracles used here are independent of the code paths they check:
closed-form beta/binomial moments, quadrature, and exact tilted-moment
algebra for conditioned series systems.
"""

from __future__ import annotations

import io
import json
import math
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path

import numpy as np
import pytest
from scipy.integrate import quad

from relcalc import (
    BetaParams,
    Component,
    Parallel,
    PriorElicitation,
    RngStream,
    Series,
    SystemTestData,
    TestRecord,
    all_success_series_shortcut,
    analytic_first_two_moments,
    beta_binomial_pmf,
    beta_pdf,
    condition_on_system_tests,
    conjugate_update,
    elicit_prior,
    ks_two_sample,
    propagate,
    sample_beta,
)
from relcalc.cli import main

MODELS = Path(__file__).resolve().parents[1] / "models"

SERIES3 = Series(Component("s1"), Component("s2"), Component("s3"))
SERIES3_PRIORS = {
    "s1": BetaParams(5, 2),
    "s2": BetaParams(3, 2),
    "s3": BetaParams(2, 2),
}
FIVE_BLOCK = Series(
    Component("s1"),
    Parallel(Component("s2"), Component("s3")),
    Component("s4"),
    Component("s5"),
)
FIVE_BLOCK_PRIORS = {
    "s1": BetaParams(5, 2),
    "s2": BetaParams(3, 2),
    "s3": BetaParams(2, 2),
    "s4": BetaParams(7, 3),
    "s5": BetaParams(2, 10),
}


def run_cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(list(argv))
    return code, out.getvalue(), err.getvalue()


def _series_moment(params, r):
    """E[theta^r] for a product of independent beta variables (exact)."""
    out = 1.0
    for p in params:
        for i in range(r):
            out *= (p.alpha + i) / (p.alpha + p.beta + i)
    return out


def _series_tilted_mean(params, n, x):
    """Exact posterior mean of a series system conditioned on x of n.

    Expands (1-theta)^(n-x) binomially so everything reduces to raw product
    moments; independent of the sampling machinery entirely.
    """

    def weighted(k):
        return sum(
            math.comb(n - x, j) * (-1) ** j * _series_moment(params, k + j)
            for j in range(n - x + 1)
        )

    return weighted(x + 1) / weighted(x)


def test_criterion_1_discrete_demo_conditional_and_acceptance_rate():
    code, out, _ = run_cli("demo-discrete", "--seed", "2024", "--nsim", "100000")
    assert code == 0
    payload = json.loads(out)
    exact = (0.1, 0.2, 0.3, 0.4)
    assert tuple(payload["exact_conditional"]) == exact
    for empirical, truth in zip(payload["empirical_frequency"], exact):
        assert abs(empirical - truth) <= 0.01
    assert abs(payload["acceptance_rate"] - 0.30) <= 0.01


def test_criterion_2_conjugate_arithmetic_exact():
    low = conjugate_update(BetaParams(2, 10), TestRecord(10, 1))
    assert (low.alpha, low.beta) == (3.0, 19.0)
    high = conjugate_update(BetaParams(7, 3), TestRecord(10, 2))
    assert (high.alpha, high.beta) == (9.0, 11.0)


def test_criterion_3_rejection_conditioning_is_exact_on_conjugate_grid():
    n = 10_000
    seed = 9000
    for prior_shapes in ((1, 1), (2, 10), (7, 3)):
        for n_ts, x_ts in ((10, 1), (10, 2), (4, 4)):
            seed += 1
            prior = BetaParams(*prior_shapes)
            conditioned = condition_on_system_tests(
                Component("c"),
                {"c": prior},
                SystemTestData(n_ts, x_ts),
                n,
                RngStream(seed),
            )
            posterior = conjugate_update(prior, TestRecord(n_ts, x_ts))
            rng = RngStream(seed + 5_000)
            direct = np.array([sample_beta(rng, posterior) for _ in range(n)])
            ks = ks_two_sample(conditioned.values, direct)
            assert ks < 0.03, f"prior {prior_shapes}, data {(n_ts, x_ts)}: KS {ks}"
            rate = n / conditioned.attempts
            mass = beta_binomial_pmf(prior, n_ts, x_ts)
            bound = 4 * math.sqrt(mass * (1 - mass) / conditioned.attempts)
            assert abs(rate - mass) < bound, (
                f"prior {prior_shapes}, data {(n_ts, x_ts)}: rate {rate} vs mass {mass}"
            )


def test_criterion_4_all_success_shortcut_matches_rejection():
    n = 10_000
    updated = all_success_series_shortcut(SERIES3, SERIES3_PRIORS, 4)
    assert updated == {
        "s1": BetaParams(9, 2),
        "s2": BetaParams(7, 2),
        "s3": BetaParams(6, 2),
    }
    via_shortcut = propagate(SERIES3, updated, n, RngStream(41))
    via_rejection = condition_on_system_tests(
        SERIES3, SERIES3_PRIORS, SystemTestData(4, 4), n, RngStream(42)
    )
    assert ks_two_sample(via_shortcut.values, via_rejection.values) < 0.03
    assert abs(via_shortcut.values.mean() - via_rejection.values.mean()) < 0.01


def test_criterion_5_propagation_matches_analytic_moments():
    n = 100_000
    for tree, priors, seed in (
        (SERIES3, SERIES3_PRIORS, 51),
        (FIVE_BLOCK, FIVE_BLOCK_PRIORS, 52),
    ):
        mean, second = analytic_first_two_moments(tree, priors)
        variance = second - mean * mean
        s = propagate(tree, priors, n, RngStream(seed))
        se_mean = math.sqrt(variance / n)
        assert abs(s.values.mean() - mean) < 4 * se_mean
        sample_var = s.values.var(ddof=1)
        m4 = ((s.values - s.values.mean()) ** 4).mean()
        se_var = math.sqrt(max(m4 - sample_var**2, 0.0) / n)
        assert abs(sample_var - variance) < 4 * se_var


def test_criterion_6_more_subsystem_data_shrinks_variance():
    def posterior_variance(campaigns):
        posteriors = {
            cid: conjugate_update(SERIES3_PRIORS[cid], TestRecord(n, n))
            for cid, n in campaigns.items()
        }
        mean, second = analytic_first_two_moments(SERIES3, posteriors)
        return second - mean * mean

    small = posterior_variance({"s1": 2, "s2": 5, "s3": 4})
    large = posterior_variance({"s1": 11, "s2": 14, "s3": 12})
    assert large < small


def test_criterion_7_success_evidence_shifts_posterior_right():
    n = 10_000
    for campaigns, system_data, seed in (
        ({"s1": 2, "s2": 5, "s3": 4}, SystemTestData(4, 4), 71),
        ({"s1": 11, "s2": 14, "s3": 12}, SystemTestData(7, 5), 72),
    ):
        posteriors = {
            cid: conjugate_update(SERIES3_PRIORS[cid], TestRecord(m, m))
            for cid, m in campaigns.items()
        }
        ordered = [posteriors[cid] for cid in ("s1", "s2", "s3")]
        base_mean = _series_moment(ordered, 1)
        cond_mean_exact = _series_tilted_mean(ordered, system_data.n_ts, system_data.x_ts)
        assert cond_mean_exact > base_mean  # the claim itself, settled exactly

        prop = propagate(SERIES3, posteriors, n, RngStream(seed))
        cond = condition_on_system_tests(
            SERIES3, posteriors, system_data, n, RngStream(seed + 100)
        )
        sigma_diff = math.sqrt(
            prop.values.var(ddof=1) / n + cond.values.var(ddof=1) / n
        )
        diff = cond.values.mean() - prop.values.mean()
        # sample means must show the rise up to 4-sigma Monte Carlo slack
        assert diff > -4 * sigma_diff
        assert abs(cond.values.mean() - cond_mean_exact) < 4 * sigma_diff


def test_criterion_8_reproducibility_and_chunk_invariance(tmp_path):
    model = str(MODELS / "series3_small_campaign_systest.json")
    for command in ("propagate", "condition"):
        runs = []
        for tag in ("x", "y"):
            out_dir = tmp_path / f"{command}_{tag}"
            code, *_ = run_cli(
                command, "--model", model, "--seed", "88",
                "--nsim", "2000", "--out", str(out_dir),
            )
            assert code == 0
            runs.append(
                tuple(
                    (out_dir / name).read_bytes()
                    for name in ("samples.csv", "summary.json", "histogram.csv")
                )
            )
        assert runs[0] == runs[1]

    demo_a = run_cli("demo-discrete", "--seed", "88", "--nsim", "2000")
    demo_b = run_cli("demo-discrete", "--seed", "88", "--nsim", "2000")
    assert demo_a == demo_b

    chunk_outputs = {}
    for chunks in (1, 2, 8):
        out_dir = tmp_path / f"chunks{chunks}"
        code, *_ = run_cli(
            "condition", "--model", model, "--seed", "88", "--nsim", "2000",
            "--chunks", str(chunks), "--out", str(out_dir),
        )
        assert code == 0
        chunk_outputs[chunks] = (out_dir / "samples.csv").read_bytes()
    assert chunk_outputs[1] == chunk_outputs[2] == chunk_outputs[8]

    engine_sets = [
        condition_on_system_tests(
            SERIES3, SERIES3_PRIORS, SystemTestData(4, 4), 2000,
            RngStream(88), chunks=k,
        ).values
        for k in (1, 2, 8)
    ]
    assert np.array_equal(engine_sets[0], engine_sets[1])
    assert np.array_equal(engine_sets[0], engine_sets[2])


def test_criterion_9_distribution_primitive_suite():
    # density normalisation over the shape grid
    for alpha in (0.5, 1, 2, 7, 20):
        for beta in (0.5, 1, 2, 7, 20):
            p = BetaParams(alpha, beta)
            total, _ = quad(lambda t: beta_pdf(p, t), 0.0, 1.0, limit=200)
            assert abs(total - 1.0) <= 1e-6, f"({alpha}, {beta}) integrates to {total}"

    # conjugate-update associativity, exact, over demo-realistic shapes
    shapes = (0.5, 1.0, 2.0, 3.0, 5.0, 7.0, 10.0, 20.0, 30.0)
    splits = ((0, 0, 0, 0), (10, 1, 4, 4), (2, 2, 5, 5), (1000, 900, 250, 0))
    for a in shapes:
        for b in shapes:
            p = BetaParams(a, b)
            for n1, x1, n2, x2 in splits:
                seq = conjugate_update(
                    conjugate_update(p, TestRecord(n1, x1)), TestRecord(n2, x2)
                )
                pooled = conjugate_update(p, TestRecord(n1 + n2, x1 + x2))
                assert seq == pooled

    # elicitation edge cases
    assert elicit_prior(PriorElicitation(0.7, 0)) == BetaParams(1, 1)
    assert elicit_prior(PriorElicitation(0.4, 10)) == BetaParams(5, 7)
    assert elicit_prior(PriorElicitation(1.0, 20)) == BetaParams(21, 1)
