"""Analysis toolkit for Boolean functions on biased product spaces:
orthogonal decompositions, influences, threshold curves, and the
junta-max / witness / booster reports around coarse thresholds."""

from .errors import (
    DomainError,
    ExactPathUnavailableError,
    NoRootError,
    NotMonotoneError,
    UsageError,
)
from .spaces import (
    BiasedMeasure,
    BooleanFunction,
    GeneralFunction,
    GeneralProductSpace,
    expectation,
    general_expectation,
    is_monotone,
    load_bft,
    loads_bft,
    make_biased_measure,
    probability_plus,
    save_bft,
    dumps_bft,
)
from .catalog import FunctionSpec, build, canonical_name, family_descriptions, parse_spec
from .decomposition import (
    Spectrum,
    averaged_direct,
    averaged_spectral,
    component_by_mobius,
    eval_component,
    general_component_at,
    general_components,
    general_averaged_tables,
    general_inner,
    transform,
    transform_naive,
    zeta_all,
)
from .influence import (
    RussoReport,
    ThresholdPolynomial,
    critical_probability,
    influence,
    influence_spectral,
    margulis_russo_check,
    pivotal_probability,
    threshold_polynomial,
    total_influence,
    total_influence_spectral,
)
from .coarse_threshold import (
    BoosterHit,
    CorollaryReport,
    DiagnosticsReport,
    LevelReport,
    MarginReport,
    ParamDefaults,
    TheoremReport,
    booster_search,
    conditional_boost,
    corollary_check,
    default_parameters,
    junta_max_expectation,
    junta_max_expectation_mc,
    level_report,
    monotone_lower_bound_check,
    proof_diagnostics,
    theorem_report,
    witness_probability,
)
from .sampling import (
    Estimate,
    FunctionOracle,
    estimate_expectation,
    estimate_influence_pivotal,
    estimate_witness_probability,
)
from .kernels import backend_name

__version__ = "0.1.0"

__all__ = [
    "BiasedMeasure",
    "BooleanFunction",
    "BoosterHit",
    "CorollaryReport",
    "DiagnosticsReport",
    "DomainError",
    "Estimate",
    "ExactPathUnavailableError",
    "FunctionOracle",
    "FunctionSpec",
    "GeneralFunction",
    "GeneralProductSpace",
    "LevelReport",
    "MarginReport",
    "NoRootError",
    "NotMonotoneError",
    "ParamDefaults",
    "RussoReport",
    "Spectrum",
    "TheoremReport",
    "ThresholdPolynomial",
    "UsageError",
    "averaged_direct",
    "averaged_spectral",
    "backend_name",
    "booster_search",
    "build",
    "canonical_name",
    "component_by_mobius",
    "conditional_boost",
    "corollary_check",
    "critical_probability",
    "default_parameters",
    "dumps_bft",
    "estimate_expectation",
    "estimate_influence_pivotal",
    "estimate_witness_probability",
    "eval_component",
    "expectation",
    "family_descriptions",
    "general_averaged_tables",
    "general_component_at",
    "general_components",
    "general_expectation",
    "general_inner",
    "influence",
    "influence_spectral",
    "is_monotone",
    "junta_max_expectation",
    "junta_max_expectation_mc",
    "level_report",
    "load_bft",
    "loads_bft",
    "make_biased_measure",
    "margulis_russo_check",
    "monotone_lower_bound_check",
    "parse_spec",
    "pivotal_probability",
    "probability_plus",
    "proof_diagnostics",
    "save_bft",
    "theorem_report",
    "threshold_polynomial",
    "total_influence",
    "total_influence_spectral",
    "transform",
    "transform_naive",
    "witness_probability",
    "zeta_all",
]
