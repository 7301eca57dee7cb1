"""Analyst-audience principle matching: simulation, evaluation and planning."""

__version__ = "0.1.0"

SCHEMA_VERSION = "1"

from .model import (
    DEFAULT_PRINCIPLES,
    CoefficientRows,
    DistanceVector,
    FieldParams,
    PersonProfile,
    PrincipleCatalog,
    WeightVector,
    expected_distance,
    expected_logits,
    group_distance,
    inverse_logit,
    logit,
    pairwise_distance,
    person_logits,
)
from .sampling import (
    DeviationSpec,
    PopulationSpec,
    RngSeed,
    derive_stream,
    logits_to_simplex,
    sample_deviation,
    sample_person,
    sample_weights,
)
from .success import (
    DistanceDistribution,
    ProbabilityEstimate,
    SuccessCriteria,
    SuccessReport,
    closed_form_success_probability,
    estimate_success_probability,
    evaluate_success,
    group_success_report,
    mean_lp_norm,
    potential_success,
    strong_success,
    sup_norm,
    weak_success,
)
from .correction import (
    CorrectedProfile,
    CorrectionBounds,
    CorrectionPlan,
    allocate_weights,
    correct_toward,
    optimize_for_group,
)
from .scenario import ScenarioError, parse_scenario, scenario_digest
from .engine import run_correct, run_evaluate, run_sweep

__all__ = [
    "DEFAULT_PRINCIPLES",
    "SCHEMA_VERSION",
    "CoefficientRows",
    "CorrectedProfile",
    "CorrectionBounds",
    "CorrectionPlan",
    "DeviationSpec",
    "DistanceDistribution",
    "DistanceVector",
    "FieldParams",
    "PersonProfile",
    "PopulationSpec",
    "PrincipleCatalog",
    "ProbabilityEstimate",
    "RngSeed",
    "ScenarioError",
    "SuccessCriteria",
    "SuccessReport",
    "WeightVector",
    "allocate_weights",
    "closed_form_success_probability",
    "correct_toward",
    "derive_stream",
    "estimate_success_probability",
    "evaluate_success",
    "expected_distance",
    "expected_logits",
    "group_distance",
    "group_success_report",
    "inverse_logit",
    "logit",
    "logits_to_simplex",
    "mean_lp_norm",
    "optimize_for_group",
    "pairwise_distance",
    "parse_scenario",
    "person_logits",
    "potential_success",
    "run_correct",
    "run_evaluate",
    "run_sweep",
    "sample_deviation",
    "sample_person",
    "sample_weights",
    "scenario_digest",
    "strong_success",
    "sup_norm",
    "weak_success",
]
