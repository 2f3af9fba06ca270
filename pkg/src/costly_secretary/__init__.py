"""Secretary problem with applicant-borne interview costs: solver,
simulator, asymptotics, and exact verification oracle."""

from .asymptotics import (
    AsymptoticReport,
    convergence_report,
    gamma,
    gauss_product_check,
    limit_constant,
    threshold_bounds,
)
from .equilibrium import (
    EquilibriumPolicy,
    GameConfig,
    ValueTables,
    build_policy,
    closed_form_success,
    compute_threshold,
    compute_threshold_sequence,
    expected_stopping_time,
    record_survival_product,
    solve_values,
)
from .oracle import (
    PolicySpec,
    ScanReport,
    VerificationError,
    exact_expected_tau,
    exact_state_value,
    exact_success_probability,
    full_learning_audit,
    full_learning_counterexample,
    optimality_scan,
    policy_success_probability,
)
from .simulator import (
    AbilityDraw,
    AggregateStats,
    GameTranscript,
    IncentiveViolation,
    StageRule,
    StrategyProfile,
    applicant_action,
    estimate,
    incentive_audit,
    play_game,
    sample_abilities,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "AbilityDraw",
    "AggregateStats",
    "AsymptoticReport",
    "EquilibriumPolicy",
    "GameConfig",
    "GameTranscript",
    "IncentiveViolation",
    "PolicySpec",
    "ScanReport",
    "StageRule",
    "StrategyProfile",
    "ValueTables",
    "VerificationError",
    "applicant_action",
    "build_policy",
    "closed_form_success",
    "compute_threshold",
    "compute_threshold_sequence",
    "convergence_report",
    "estimate",
    "exact_expected_tau",
    "exact_state_value",
    "exact_success_probability",
    "expected_stopping_time",
    "full_learning_audit",
    "full_learning_counterexample",
    "gamma",
    "gauss_product_check",
    "incentive_audit",
    "limit_constant",
    "optimality_scan",
    "play_game",
    "policy_success_probability",
    "record_survival_product",
    "sample_abilities",
    "solve_values",
    "threshold_bounds",
]
