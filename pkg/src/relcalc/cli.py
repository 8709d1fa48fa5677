"""Command-line front end.

Subcommands: elicit, update, propagate, condition, demo-discrete. Sampling
commands read a JSON model file, run seeded and fully reproducible Monte
Carlo, and write samples.csv / summary.json / histogram.csv into --out
(atomically; identical inputs give byte-identical files).

Exit codes: 0 success, 2 validation or configuration error, 3 rejection
budget exhausted. Errors are emitted as one JSON object on stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path

from .betacore import BetaParams, PriorElicitation, beta_mean, beta_variance, elicit_prior
from .engine import (
    DISCRETE_DEMO_OBSERVED_Z,
    DISCRETE_DEMO_TABLE,
    condition_on_system_tests,
    discrete_conditional_rejection,
    propagate,
)
from .errors import (
    InvalidParameterError,
    ModelFormatError,
    RejectionBudgetError,
    RelcalcError,
)
from .model import load_model
from .rng import RngStream
from .summary import histogram, summarize

_U64_MAX = (1 << 64) - 1


def _emit_error(exc: BaseException) -> None:
    payload = {"type": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, RejectionBudgetError):
        payload.update(
            accepted=exc.accepted,
            requested=exc.requested,
            attempts=exc.attempts,
            predictive_mass_estimate=exc.predictive_mass_estimate,
        )
    print(json.dumps({"error": payload}), file=sys.stderr)


class _Parser(argparse.ArgumentParser):
    """argparse with JSON diagnostics instead of plain-text usage errors."""

    def error(self, message):
        _emit_error(InvalidParameterError(message))
        raise SystemExit(2)


def _resolve_seed(ns) -> int:
    if ns.seed is not None:
        seed = ns.seed
    else:
        raw = os.environ.get("RELCALC_SEED")
        if raw is None:
            return 0
        try:
            seed = int(raw, 0)
        except ValueError:
            raise InvalidParameterError(f"RELCALC_SEED is not an integer: {raw!r}")
    if not 0 <= seed <= _U64_MAX:
        raise InvalidParameterError(f"seed must be in [0, 2**64), got {seed}")
    return seed


def _check_positive(name: str, value: int) -> int:
    if value < 1:
        raise InvalidParameterError(f"{name} must be >= 1, got {value}")
    return value


def _write_atomic(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _samples_csv(values) -> str:
    lines = ["theta_tot_sys"]
    lines.extend(format(v, ".17g") for v in values)
    return "\n".join(lines) + "\n"


def _histogram_csv(hist) -> str:
    lines = ["bin_low,bin_high,count,density"]
    for k in range(len(hist.counts)):
        lines.append(
            f"{format(hist.edges[k], '.17g')},{format(hist.edges[k + 1], '.17g')},"
            f"{int(hist.counts[k])},{format(hist.densities[k], '.17g')}"
        )
    return "\n".join(lines) + "\n"


def _emit_run_outputs(ns, sample_set, acceptance_rate=None) -> None:
    report = summarize(sample_set, ns.level)
    hist = histogram(sample_set, ns.bins)
    payload = {
        "mean": report.mean,
        "variance": report.variance,
        "interval_low": report.interval_low,
        "interval_high": report.interval_high,
        "level": report.credible_level,
        "n": report.n,
        "seed": sample_set.seed,
        "chunks": ns.chunks,
    }
    if acceptance_rate is not None:
        payload["acceptance_rate"] = acceptance_rate
    out_dir = Path(ns.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    summary_text = json.dumps(payload, indent=2) + "\n"
    _write_atomic(out_dir / "samples.csv", _samples_csv(sample_set.values))
    _write_atomic(out_dir / "summary.json", summary_text)
    _write_atomic(out_dir / "histogram.csv", _histogram_csv(hist))
    sys.stdout.write(summary_text)


def _cmd_elicit(ns) -> int:
    prior = elicit_prior(PriorElicitation(ns.theta_hat, ns.n_pr))
    payload = {
        "alpha": prior.alpha,
        "beta": prior.beta,
        "mean": beta_mean(prior),
        "variance": beta_variance(prior),
    }
    print(json.dumps(payload, indent=2))
    return 0


def _cmd_update(ns) -> int:
    model = load_model(ns.model)
    payload = {
        c.id: {"alpha_post": c.posterior().alpha, "beta_post": c.posterior().beta}
        for c in model.components
    }
    print(json.dumps(payload, indent=2))
    return 0


def _run_config(ns):
    _check_positive("--nsim", ns.nsim)
    _check_positive("--bins", ns.bins)
    _check_positive("--chunks", ns.chunks)
    if not 0.0 < ns.level <= 1.0:
        raise InvalidParameterError(f"--level must be in (0, 1], got {ns.level}")
    if ns.max_attempts is not None and ns.max_attempts < ns.nsim:
        raise InvalidParameterError(
            f"--max-attempts ({ns.max_attempts}) must be >= --nsim ({ns.nsim})"
        )
    return RngStream(_resolve_seed(ns))


def _cmd_propagate(ns) -> int:
    rng = _run_config(ns)
    model = load_model(ns.model)
    if model.structure is None:
        raise ModelFormatError("no structure defined in model file")
    sample_set = propagate(
        model.structure, model.posterior_map(), ns.nsim, rng, chunks=ns.chunks
    )
    _emit_run_outputs(ns, sample_set)
    return 0


def _cmd_condition(ns) -> int:
    rng = _run_config(ns)
    model = load_model(ns.model)
    if model.structure is None:
        raise ModelFormatError("no structure defined in model file")
    if model.system_tests is None:
        raise ModelFormatError("no system_tests defined in model file")
    sample_set = condition_on_system_tests(
        model.structure,
        model.posterior_map(),
        model.system_tests,
        ns.nsim,
        rng,
        max_attempts=ns.max_attempts,
        chunks=ns.chunks,
    )
    _emit_run_outputs(ns, sample_set, acceptance_rate=ns.nsim / sample_set.attempts)
    return 0


def _cmd_demo_discrete(ns) -> int:
    if ns.nsim < 0:
        raise InvalidParameterError(f"--nsim must be >= 0, got {ns.nsim}")
    rng = RngStream(_resolve_seed(ns))
    result = discrete_conditional_rejection(
        DISCRETE_DEMO_TABLE,
        DISCRETE_DEMO_OBSERVED_Z,
        ns.nsim,
        rng,
        max_attempts=ns.max_attempts,
    )
    z_idx = DISCRETE_DEMO_TABLE.z_labels.index(DISCRETE_DEMO_OBSERVED_Z)
    column = DISCRETE_DEMO_TABLE.probs[:, z_idx]
    exact = [float(v) for v in column / column.sum()]
    empirical = (
        [result.counts[y] / ns.nsim for y in DISCRETE_DEMO_TABLE.y_labels]
        if ns.nsim > 0
        else []
    )
    payload = {
        "n_sim": ns.nsim,
        "seed": rng.seed,
        "observed_z": DISCRETE_DEMO_OBSERVED_Z,
        "attempts": result.attempts,
        "acceptance_rate": result.acceptance_rate,
        "y_values": list(DISCRETE_DEMO_TABLE.y_labels),
        "exact_conditional": exact,
        "empirical_frequency": empirical,
    }
    print(json.dumps(payload, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="relcalc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_seed(p):
        p.add_argument("--seed", type=int, default=None,
                       help="64-bit stream seed (default: $RELCALC_SEED or 0)")

    p = sub.add_parser("elicit", help="turn a point estimate into beta shapes")
    p.add_argument("--theta-hat", type=float, required=True, dest="theta_hat")
    p.add_argument("--n-pr", type=float, required=True, dest="n_pr")
    p.set_defaults(func=_cmd_elicit)

    p = sub.add_parser("update", help="per-component conjugate posterior shapes")
    p.add_argument("--model", required=True)
    p.set_defaults(func=_cmd_update)

    for name, func, needs_attempts in (
        ("propagate", _cmd_propagate, False),
        ("condition", _cmd_condition, True),
    ):
        p = sub.add_parser(
            name,
            help=("sample system reliability from component posteriors"
                  if name == "propagate"
                  else "condition system reliability on whole-system test data"),
        )
        p.add_argument("--model", required=True)
        add_seed(p)
        p.add_argument("--nsim", type=int, default=10_000)
        p.add_argument("--bins", type=int, default=50)
        p.add_argument("--level", type=float, default=0.95)
        p.add_argument("--max-attempts", type=int, default=None, dest="max_attempts",
                       help="candidate budget (default 1000 * nsim)")
        p.add_argument("--chunks", type=int, default=1)
        p.add_argument("--out", default=".")
        p.set_defaults(func=func)

    p = sub.add_parser("demo-discrete", help="discrete rejection-sampling demonstration")
    add_seed(p)
    p.add_argument("--nsim", type=int, default=10_000)
    p.add_argument("--max-attempts", type=int, default=None, dest="max_attempts")
    p.set_defaults(func=_cmd_demo_discrete)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return ns.func(ns)
    except RejectionBudgetError as exc:
        _emit_error(exc)
        return 3
    except (RelcalcError, OSError) as exc:
        _emit_error(exc)
        return 2


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
