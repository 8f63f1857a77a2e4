"""Discrete curvature, harmonic functions and ends on weighted graphs."""

from ._core import (
    DomainError,
    Generator,
    Graph,
    IllPosedError,
    NumericError,
    ParseError,
    ResourceError,
    bakry_emery,
    cd_check,
    count_ends,
    curvature_outside,
    dimension_bound,
    dirichlet_solve,
    gamma,
    gamma2,
    gh_check,
    gh_semicontinuity,
    green_limit,
    ollivier,
    run_corpus,
    separating_basis,
)

__all__ = [
    "DomainError",
    "Generator",
    "Graph",
    "IllPosedError",
    "NumericError",
    "ParseError",
    "ResourceError",
    "bakry_emery",
    "cd_check",
    "count_ends",
    "curvature_outside",
    "dimension_bound",
    "dirichlet_solve",
    "gamma",
    "gamma2",
    "gh_check",
    "gh_semicontinuity",
    "green_limit",
    "ollivier",
    "run_corpus",
    "separating_basis",
]
