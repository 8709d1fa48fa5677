"""Bayesian reliability analysis of pass/fail test data.

Beta priors over component survival probabilities are updated conjugately
from per-component campaigns, propagated through a series/parallel block
diagram by Monte Carlo, and conditioned exactly on whole-system test
outcomes by rejection sampling. Hot sampling loops run in a compiled
extension when available, with a bit-identical pure-Python fallback
(see relcalc.backend_name).
"""

from ._backend import backend_name
from .betacore import (
    BetaParams,
    PriorElicitation,
    TestRecord,
    beta_binomial_pmf,
    beta_mean,
    beta_pdf,
    beta_variance,
    conjugate_update,
    elicit_prior,
    sample_beta,
    sample_binomial,
)
from .engine import (
    DISCRETE_DEMO_OBSERVED_Z,
    DISCRETE_DEMO_TABLE,
    DiscretePmfTable,
    DiscreteRejectionResult,
    SampleSet,
    SystemTestData,
    all_success_series_shortcut,
    condition_on_system_tests,
    derive_substream,
    discrete_conditional_rejection,
    propagate,
)
from .errors import (
    BoundaryDensityError,
    DuplicateComponentError,
    InvalidParameterError,
    ModelFormatError,
    RejectionBudgetError,
    RelcalcError,
    ShortcutStructureError,
    StructureMismatchError,
    ZeroColumnMassError,
)
from .model import ComponentSpec, ModelFile, load_model, parse_model
from .rbd import (
    BlockNode,
    Component,
    Parallel,
    Series,
    analytic_first_two_moments,
    leaf_ids,
    parse_structure,
    serialize_structure,
    system_reliability,
)
from .rng import RngStream
from .summary import (
    Histogram,
    SummaryReport,
    histogram,
    ks_two_sample,
    quantile,
    summarize,
)

__version__ = "0.1.0"

__all__ = [
    "backend_name",
    "BetaParams",
    "PriorElicitation",
    "TestRecord",
    "beta_binomial_pmf",
    "beta_mean",
    "beta_pdf",
    "beta_variance",
    "conjugate_update",
    "elicit_prior",
    "sample_beta",
    "sample_binomial",
    "DiscretePmfTable",
    "DiscreteRejectionResult",
    "DISCRETE_DEMO_TABLE",
    "DISCRETE_DEMO_OBSERVED_Z",
    "SampleSet",
    "SystemTestData",
    "all_success_series_shortcut",
    "condition_on_system_tests",
    "derive_substream",
    "discrete_conditional_rejection",
    "propagate",
    "BoundaryDensityError",
    "DuplicateComponentError",
    "InvalidParameterError",
    "ModelFormatError",
    "RejectionBudgetError",
    "RelcalcError",
    "ShortcutStructureError",
    "StructureMismatchError",
    "ZeroColumnMassError",
    "ComponentSpec",
    "ModelFile",
    "load_model",
    "parse_model",
    "BlockNode",
    "Component",
    "Parallel",
    "Series",
    "analytic_first_two_moments",
    "leaf_ids",
    "parse_structure",
    "serialize_structure",
    "system_reliability",
    "RngStream",
    "Histogram",
    "SummaryReport",
    "histogram",
    "ks_two_sample",
    "quantile",
    "summarize",
    "__version__",
]
