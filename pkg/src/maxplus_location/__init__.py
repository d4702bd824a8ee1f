"""Max-plus algebra and an exact solver for rectilinear minimax facility location."""

from .location import (
    CaseTag,
    Coefficients,
    LocationError,
    ProblemInstance,
    RotatedRectConstraint,
    SolutionReport,
    WeightedPoint,
    evaluate_constraint,
    evaluate_merged,
    evaluate_objective,
    solve,
    solve_constrained,
    solve_unconstrained,
)
from .oracle import GridSpec, grid_search_min, verify_report
from .tropical import ONE, ZERO, TropicalMatrix, TropicalScalar, TropicalVector

__version__ = "0.1.0"

__all__ = [
    "ONE",
    "ZERO",
    "CaseTag",
    "Coefficients",
    "GridSpec",
    "LocationError",
    "ProblemInstance",
    "RotatedRectConstraint",
    "SolutionReport",
    "TropicalMatrix",
    "TropicalScalar",
    "TropicalVector",
    "WeightedPoint",
    "evaluate_constraint",
    "evaluate_merged",
    "evaluate_objective",
    "grid_search_min",
    "solve",
    "solve_constrained",
    "solve_unconstrained",
    "verify_report",
]
