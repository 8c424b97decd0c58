"""Weighted AM-GM gap comparisons, refined Young/Holder/Jensen bounds, and
seeded concentration experiments."""

from .core import (
    DataVector,
    DegenerateInputError,
    DimensionError,
    DomainError,
    EqualityDiagnosis,
    GapComparison,
    QuotientProfile,
    WeightVector,
    amgm_gap,
    equal_weight_bounds,
    equality_diagnosis,
    gap_comparison,
    quotient_profile,
    ratio_bounds,
    variance_lower_bound,
    weighted_arithmetic_mean,
    weighted_geometric_mean,
)
from .experiments import (
    ExperimentConfig,
    ExperimentResult,
    SuiteReport,
    WeightScheme,
    inequality_suite,
    parse_weight_scheme,
    ratio_concentration_experiment,
    results_to_csv,
    run_experiment,
    weighted_gap_experiment,
    weighted_ratio_experiment,
)
from .holder import (
    ConjugatePair,
    DiscreteMeasure,
    HolderEnvelope,
    angular_distance,
    holder_multi,
    holder_refinement,
    young_refinement,
)
from .jensen import (
    CONVEX_FUNCTIONS,
    ConvexFunction,
    jensen_equality_diagnosis,
    jensen_gap,
    jensen_gap_comparison,
)
from .sampling import (
    EXP_NEG_EULER_GAMMA,
    GeometryConstants,
    SeededStream,
    ball_volume_mc_check,
    gm_am_ratio,
    sample_exponential,
    sample_l1_sphere_positive,
    sampler_equivalence_check,
)

__version__ = "0.1.0"

__all__ = [
    "CONVEX_FUNCTIONS",
    "ConjugatePair",
    "ConvexFunction",
    "DataVector",
    "DegenerateInputError",
    "DimensionError",
    "DiscreteMeasure",
    "DomainError",
    "EqualityDiagnosis",
    "EXP_NEG_EULER_GAMMA",
    "ExperimentConfig",
    "ExperimentResult",
    "GapComparison",
    "GeometryConstants",
    "HolderEnvelope",
    "QuotientProfile",
    "SeededStream",
    "SuiteReport",
    "WeightScheme",
    "WeightVector",
    "amgm_gap",
    "angular_distance",
    "ball_volume_mc_check",
    "equal_weight_bounds",
    "equality_diagnosis",
    "gap_comparison",
    "gm_am_ratio",
    "holder_multi",
    "holder_refinement",
    "inequality_suite",
    "jensen_equality_diagnosis",
    "jensen_gap",
    "jensen_gap_comparison",
    "parse_weight_scheme",
    "quotient_profile",
    "ratio_bounds",
    "ratio_concentration_experiment",
    "results_to_csv",
    "run_experiment",
    "sample_exponential",
    "sample_l1_sphere_positive",
    "sampler_equivalence_check",
    "variance_lower_bound",
    "weighted_arithmetic_mean",
    "weighted_gap_experiment",
    "weighted_geometric_mean",
    "weighted_ratio_experiment",
    "young_refinement",
]
