"""Exception types raised across the package.

Every relcalc-specific failure derives from :class:`RelcalcError` so callers
(and the CLI) can distinguish our diagnostics from generic Python errors.
"""

from __future__ import annotations


class RelcalcError(Exception):
    """Base class for all relcalc errors."""


class InvalidParameterError(RelcalcError, ValueError):
    """A numeric argument violates its documented range or type invariant."""


class BoundaryDensityError(RelcalcError, ValueError):
    """Beta density requested exactly at a boundary where it is infinite.

    Raised for theta=0 with alpha<1 and theta=1 with beta<1, instead of
    returning a non-finite number.
    """


class DuplicateComponentError(RelcalcError, ValueError):
    """The same component id appears more than once in a block diagram."""

    def __init__(self, ids):
        self.ids = tuple(sorted(ids))
        super().__init__(f"duplicate component ids: {', '.join(self.ids)}")


class StructureMismatchError(RelcalcError, ValueError):
    """An id->value map does not cover exactly the leaves of a tree."""

    def __init__(self, missing=(), extra=()):
        self.missing = tuple(sorted(missing))
        self.extra = tuple(sorted(extra))
        parts = []
        if self.missing:
            parts.append(f"missing ids: {', '.join(self.missing)}")
        if self.extra:
            parts.append(f"extra ids: {', '.join(self.extra)}")
        super().__init__("assignment does not match tree leaves (" + "; ".join(parts) + ")")


class ModelFormatError(RelcalcError, ValueError):
    """A model or structure document is malformed."""


class ShortcutStructureError(RelcalcError, ValueError):
    """All-success shortcut applied to a tree containing a parallel node.

    A successful system test does not identify which parallel branch worked,
    so the per-component update is not justified there.
    """


class ZeroColumnMassError(RelcalcError, ValueError):
    """Conditioning column of a discrete joint pmf has zero probability."""


class RejectionBudgetError(RelcalcError, RuntimeError):
    """Candidate budget exhausted before enough samples were accepted.

    Signals that the observed outcome sits deep in the prior-predictive tail.
    Carries the partial acceptance statistics gathered before the cutoff.
    """

    def __init__(self, accepted: int, requested: int, attempts: int):
        self.accepted = accepted
        self.requested = requested
        self.attempts = attempts
        self.predictive_mass_estimate = accepted / attempts if attempts > 0 else float("nan")
        super().__init__(
            f"candidate budget exhausted: accepted {accepted} of {requested} "
            f"after {attempts} attempts "
            f"(predictive mass estimate {self.predictive_mass_estimate:.3g})"
        )
