"""Fuzzy multi-criteria group decision making.

Consensus criteria weights from mixed fuzzy preference inputs, criteria
relationship analysis, and ranking of alternatives by triangular fuzzy
satisfaction degrees.
"""

from .problem import (
    DecisionMakerProfile,
    DecisionProblem,
    FuzzyPreferenceRelation,
    MultiplicativePreferenceRelation,
    ProblemValidationError,
    SatisfactionMatrix,
    UtilityVector,
    ValidationReport,
    Violation,
    validate_problem,
)
from .ranking import (
    RankingResult,
    final_degree,
    integrate_final_degrees,
    rank_alternatives,
    rank_problem,
    select_dominant_subset,
)
from .relations import (
    CriteriaPartition,
    PairClass,
    RelationTable,
    analyze_relations,
    classify_pair,
    pair_diff,
    partition_criteria,
    relation_degrees,
)
from .tfn import TFN, extended_subtract, rank_score, signed_area, weighted_sum
from .weights import (
    DeviationRecord,
    SolverConfig,
    WeightSolution,
    adjust_preferences,
    elicit_weights,
    evaluate_objective,
    solve_weights,
)

__all__ = [
    "TFN", "extended_subtract", "weighted_sum", "signed_area", "rank_score",
    "UtilityVector", "FuzzyPreferenceRelation", "MultiplicativePreferenceRelation", "SatisfactionMatrix",
    "DecisionMakerProfile", "DecisionProblem", "ValidationReport", "Violation", "ProblemValidationError",
    "validate_problem",
    "DeviationRecord", "SolverConfig", "WeightSolution", "evaluate_objective", "solve_weights",
    "adjust_preferences", "elicit_weights",
    "PairClass", "RelationTable", "CriteriaPartition", "pair_diff", "classify_pair", "relation_degrees",
    "partition_criteria", "analyze_relations",
    "RankingResult", "select_dominant_subset", "final_degree", "integrate_final_degrees",
    "rank_alternatives", "rank_problem",
    "example_problem_path",
]


def example_problem_path():
    """Path of the bundled five-DM, five-alternative, four-criterion example."""
    from importlib.resources import files

    return files(__name__) / "data" / "worked_example.json"
