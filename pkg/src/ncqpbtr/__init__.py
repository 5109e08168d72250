"""Interior-point solver for non-convex quadratic programs with logarithmic
box barriers and an l-infinity trust region."""

from .errors import (
    BadBounds,
    BadParameters,
    EntryConditionViolated,
    InfeasibleDomain,
    NcqpError,
    NonFinite,
    NotPositiveDefinite,
    NumericalFailure,
)
from .generator import GenParams, generate
from .problem import (
    Convexity,
    DomainGeometry,
    Objective,
    ProblemSpec,
    check_psi_convexity,
    eval_Phi,
    eval_psi,
    validate,
)
from .solver import Solution, SolveTrace, solve

__version__ = "0.1.0"

__all__ = [
    "BadBounds", "BadParameters", "Convexity", "DomainGeometry", "EntryConditionViolated",
    "GenParams", "InfeasibleDomain", "NcqpError", "NonFinite", "NotPositiveDefinite",
    "NumericalFailure", "Objective", "ProblemSpec", "Solution", "SolveTrace",
    "check_psi_convexity", "eval_Phi", "eval_psi", "generate", "solve", "validate",
]
