"""Monte Carlo engine: propagation, exact rejection conditioning, shortcuts.

Three sampling routines drive everything:

* :func:`propagate` pushes per-component beta posteriors through a block
  diagram — each iteration draws one theta per leaf and evaluates the tree.
* :func:`condition_on_system_tests` turns propagation draws into candidates
  and keeps exactly those whose simulated system campaign reproduces the
  observed success count. Accepted draws are exact samples from the
  system-level posterior, no approximation involved; the accept rate
  estimates the prior-predictive mass of the observed outcome.
* :func:`discrete_conditional_rejection` is the same accept/reject idea on
  a finite joint pmf table, kept as a self-contained demonstration.

Sample i always uses substream derive(seed, i), so output is identical for
any chunk partition of the slot range, and a run is reproducible from
(model, seed) alone. The candidate budget (``max_attempts``) bounds runtime
when the observed outcome is deep in the predictive tail.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from ._backend import kernel
from .betacore import BetaParams, TestRecord, conjugate_update
from .errors import (
    InvalidParameterError,
    RejectionBudgetError,
    ShortcutStructureError,
    ZeroColumnMassError,
)
from .rbd import (
    BlockNode,
    Component,
    Parallel,
    Series,
    check_coverage,
)
from .rng import RngStream, derive_substream

__all__ = [
    "SampleSet",
    "SystemTestData",
    "DiscretePmfTable",
    "DiscreteRejectionResult",
    "DISCRETE_DEMO_TABLE",
    "DISCRETE_DEMO_OBSERVED_Z",
    "propagate",
    "condition_on_system_tests",
    "all_success_series_shortcut",
    "discrete_conditional_rejection",
    "derive_substream",
]


@dataclass(frozen=True, eq=False)
class SampleSet:
    """Ordered Monte Carlo draws of a reliability value, with provenance."""

    values: np.ndarray
    seed: int
    n_sim: int
    attempts: int
    label: str = ""

    def __post_init__(self):
        values = np.ascontiguousarray(self.values, dtype=np.float64)
        if values.ndim != 1:
            raise InvalidParameterError("values must be one-dimensional")
        if values.size != self.n_sim:
            raise InvalidParameterError(
                f"values length {values.size} != n_sim {self.n_sim}"
            )
        if values.size and (values.min() < 0.0 or values.max() > 1.0):
            raise InvalidParameterError("sample values must lie in [0, 1]")
        if self.attempts < self.n_sim:
            raise InvalidParameterError("attempts cannot be smaller than n_sim")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.n_sim


@dataclass(frozen=True)
class SystemTestData:
    """Observed whole-system campaign: x_ts successes out of n_ts trials."""

    n_ts: int
    x_ts: int

    def __post_init__(self):
        record = TestRecord(self.n_ts, self.x_ts)  # reuse range validation
        object.__setattr__(self, "n_ts", record.n)
        object.__setattr__(self, "x_ts", record.x)


@dataclass(frozen=True, eq=False)
class DiscretePmfTable:
    """Joint pmf over finite (y, z) label sets; rows are y, columns are z."""

    y_labels: tuple
    z_labels: tuple
    probs: np.ndarray

    def __post_init__(self):
        probs = np.ascontiguousarray(self.probs, dtype=np.float64)
        object.__setattr__(self, "y_labels", tuple(self.y_labels))
        object.__setattr__(self, "z_labels", tuple(self.z_labels))
        if probs.shape != (len(self.y_labels), len(self.z_labels)):
            raise InvalidParameterError(
                f"probs shape {probs.shape} does not match labels "
                f"({len(self.y_labels)} x {len(self.z_labels)})"
            )
        if probs.size == 0 or (probs < 0.0).any():
            raise InvalidParameterError("probs must be nonempty and nonnegative")
        if abs(float(probs.sum()) - 1.0) > 1e-9:
            raise InvalidParameterError(
                f"joint pmf must sum to 1 within 1e-9, got {float(probs.sum())!r}"
            )
        probs.flags.writeable = False
        object.__setattr__(self, "probs", probs)


@dataclass(frozen=True, eq=False)
class DiscreteRejectionResult:
    """Accepted y draws plus the acceptance bookkeeping."""

    samples: tuple
    acceptance_rate: float | None
    attempts: int
    counts: dict = field(repr=False, default_factory=dict)


# Built-in demonstration joint pmf for the discrete rejection demo
# (y down the rows, z across the columns, both labelled 1..4).
DISCRETE_DEMO_TABLE = DiscretePmfTable(
    y_labels=(1, 2, 3, 4),
    z_labels=(1, 2, 3, 4),
    probs=np.array(
        [
            [0.12, 0.03, 0.14, 0.09],
            [0.01, 0.06, 0.08, 0.04],
            [0.05, 0.09, 0.03, 0.05],
            [0.07, 0.12, 0.01, 0.01],
        ]
    ),
)
DISCRETE_DEMO_OBSERVED_Z = 2

_OP_LEAF = 0
_OP_SERIES = 1
_OP_PARALLEL = 2


def _compile_program(node: BlockNode, ids: Sequence[str]):
    """Flatten a tree into a postfix program over leaf indices."""
    index = {cid: k for k, cid in enumerate(ids)}
    ops: list[int] = []
    args: list[int] = []

    def emit(n: BlockNode):
        if isinstance(n, Component):
            ops.append(_OP_LEAF)
            args.append(index[n.id])
        else:
            for child in n.children:
                emit(child)
            ops.append(_OP_SERIES if isinstance(n, Series) else _OP_PARALLEL)
            args.append(len(n.children))

    emit(node)
    return np.asarray(ops, dtype=np.int64), np.asarray(args, dtype=np.int64)


def _leaf_params(node: BlockNode, posteriors: Mapping[str, BetaParams]):
    ids = check_coverage(node, posteriors)
    alphas = np.array([posteriors[cid].alpha for cid in ids], dtype=np.float64)
    betas = np.array([posteriors[cid].beta for cid in ids], dtype=np.float64)
    ops, args = _compile_program(node, ids)
    return ops, args, alphas, betas


def _chunk_bounds(n: int, chunks: int) -> list[tuple[int, int]]:
    if chunks < 1:
        raise InvalidParameterError(f"chunks must be >= 1, got {chunks}")
    return [(n * c // chunks, n * (c + 1) // chunks) for c in range(chunks)]


def _check_n_sim(n_sim: int) -> int:
    if not isinstance(n_sim, int) or isinstance(n_sim, bool) or n_sim < 0:
        raise InvalidParameterError(f"n_sim must be a nonnegative integer, got {n_sim!r}")
    return n_sim


def propagate(
    node: BlockNode,
    posteriors: Mapping[str, BetaParams],
    n_sim: int,
    rng: RngStream,
    chunks: int = 1,
    label: str = "propagate",
) -> SampleSet:
    """Sample the system-reliability distribution implied by the leaves.

    Iteration i draws one theta per leaf (canonical tree order) from its
    substream derive(seed, i) and evaluates the tree, so the result is a
    pure function of (tree, posteriors, n_sim, rng.seed) — chunking only
    partitions the work.
    """
    _check_n_sim(n_sim)
    ops, args, alphas, betas = _leaf_params(node, posteriors)
    parts = [
        kernel.propagate_run(rng.seed, lo, hi, ops, args, alphas, betas)
        for lo, hi in _chunk_bounds(n_sim, chunks)
    ]
    values = np.concatenate(parts) if parts else np.empty(0)
    return SampleSet(values=values, seed=rng.seed, n_sim=n_sim, attempts=n_sim, label=label)


def condition_on_system_tests(
    node: BlockNode,
    posteriors: Mapping[str, BetaParams],
    data: SystemTestData,
    n_sim: int,
    rng: RngStream,
    max_attempts: int | None = None,
    chunks: int = 1,
    label: str = "condition",
) -> SampleSet:
    """Exact posterior draws of system reliability given a system campaign.

    Rejection sampling: candidates come from the propagation distribution;
    a candidate theta is accepted when a simulated Binomial(n_ts, theta)
    count equals the observed x_ts. meta.attempts records all candidates
    drawn, so n_sim/attempts estimates the prior-predictive probability of
    the observed outcome.

    Raises RejectionBudgetError once max_attempts candidates (default
    1000 * n_sim) have been spent before n_sim acceptances.
    """
    _check_n_sim(n_sim)
    if max_attempts is None:
        max_attempts = 1000 * n_sim
    if max_attempts < n_sim:
        raise InvalidParameterError(
            f"max_attempts ({max_attempts}) must be >= n_sim ({n_sim})"
        )
    ops, args, alphas, betas = _leaf_params(node, posteriors)
    values_parts = []
    accepted = 0
    attempts = 0
    for lo, hi in _chunk_bounds(n_sim, chunks):
        part, got, used = kernel.condition_run(
            rng.seed, lo, hi, ops, args, alphas, betas,
            data.n_ts, data.x_ts, max_attempts - attempts,
        )
        values_parts.append(part)
        accepted += got
        attempts += used
        if got < hi - lo:
            raise RejectionBudgetError(accepted, n_sim, attempts)
    values = np.concatenate(values_parts) if values_parts else np.empty(0)
    return SampleSet(values=values, seed=rng.seed, n_sim=n_sim, attempts=attempts, label=label)


def all_success_series_shortcut(
    node: BlockNode,
    posteriors: Mapping[str, BetaParams],
    n_ts: int,
) -> dict[str, BetaParams]:
    """Fold an all-success system campaign into each component posterior.

    In a pure series system every successful system test exercises every
    component successfully, so each leaf can be updated with (n_ts, n_ts)
    directly; propagating the result matches rejection conditioning on
    x_ts = n_ts. Any parallel node breaks the implication (the surviving
    branch is unidentified), so such trees are rejected.
    """
    if not isinstance(n_ts, int) or isinstance(n_ts, bool) or n_ts < 0:
        raise InvalidParameterError(f"n_ts must be a nonnegative integer, got {n_ts!r}")
    if _contains_parallel(node):
        raise ShortcutStructureError(
            "all-success shortcut requires a pure series system; "
            "a parallel node does not identify which branch succeeded"
        )
    check_coverage(node, posteriors)
    record = TestRecord(n_ts, n_ts)
    return {cid: conjugate_update(p, record) for cid, p in posteriors.items()}


def _contains_parallel(node: BlockNode) -> bool:
    if isinstance(node, Parallel):
        return True
    if isinstance(node, Series):
        return any(_contains_parallel(c) for c in node.children)
    return False


def discrete_conditional_rejection(
    table: DiscretePmfTable,
    observed_z,
    n_sim: int,
    rng: RngStream,
    max_attempts: int | None = None,
) -> DiscreteRejectionResult:
    """Sample y from p(y | z = observed_z) by exact rejection.

    Each attempt draws y from the marginal p(y), then z from p(z | y), and
    keeps y when z matches. The acceptance rate estimates p(z = observed_z).
    """
    _check_n_sim(n_sim)
    if max_attempts is None:
        max_attempts = 1000 * n_sim
    if max_attempts < n_sim:
        raise InvalidParameterError(
            f"max_attempts ({max_attempts}) must be >= n_sim ({n_sim})"
        )
    if observed_z not in table.z_labels:
        raise InvalidParameterError(
            f"observed z {observed_z!r} is not a column label of the table"
        )
    z_index = table.z_labels.index(observed_z)
    column_mass = float(table.probs[:, z_index].sum())
    if column_mass <= 0.0:
        raise ZeroColumnMassError(
            f"column z={observed_z!r} has zero probability mass"
        )
    marginal = table.probs.sum(axis=1)
    conditional = np.zeros_like(table.probs)
    for r in range(len(table.y_labels)):
        if marginal[r] > 0.0:
            conditional[r] = table.probs[r] / marginal[r]
    y_idx, attempts = kernel.discrete_run(
        rng.seed, n_sim, marginal, conditional, z_index, max_attempts
    )
    if len(y_idx) < n_sim:
        raise RejectionBudgetError(len(y_idx), n_sim, attempts)
    counts = {
        label: int((y_idx == k).sum()) for k, label in enumerate(table.y_labels)
    }
    rate = n_sim / attempts if attempts > 0 else None
    samples = tuple(table.y_labels[k] for k in y_idx)
    return DiscreteRejectionResult(
        samples=samples, acceptance_rate=rate, attempts=attempts, counts=counts
    )
