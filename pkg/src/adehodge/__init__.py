"""Defects and Hodge numbers of threefolds with A-D-E singularities."""

from .errors import AdeHodgeError, InputError, RankUndecided, StageError, Undecided
from .numbers import AlgebraicValue, as_value, eval_value, is_zero_heuristic, rational, refine_root, root_of
from .poly import MultiPoly, ProjectivePoint, monomial_basis, parse_poly
from .singular import ADEType, SingularPointRecord, adapted_frame, classify, is_singular
from .defect import ConditionMatrix, RankResult, build_condition_matrix, build_vanishing_matrix, rank
from .hodge import CohomologyInputs, CoverSpec, HodgeReport, hodge_big_cover, hodge_big_general, hodge_small

__version__ = "0.1.0"

__all__ = [
    "AdeHodgeError",
    "InputError",
    "RankUndecided",
    "StageError",
    "Undecided",
    "AlgebraicValue",
    "as_value",
    "eval_value",
    "is_zero_heuristic",
    "rational",
    "refine_root",
    "root_of",
    "MultiPoly",
    "ProjectivePoint",
    "monomial_basis",
    "parse_poly",
    "ADEType",
    "SingularPointRecord",
    "adapted_frame",
    "classify",
    "is_singular",
    "ConditionMatrix",
    "RankResult",
    "build_condition_matrix",
    "build_vanishing_matrix",
    "rank",
    "CohomologyInputs",
    "CoverSpec",
    "HodgeReport",
    "hodge_big_cover",
    "hodge_big_general",
    "hodge_small",
]
