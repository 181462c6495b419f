"""Optimal polynomial approximants in Dirichlet-type spaces D_alpha."""

from .errors import ConditioningError, SingularSystemError, TruncationError
from .series_core import (
    PowerSeries,
    build_geometric,
    build_kernel,
    build_singular_inner,
    evaluate,
    exp_series,
    inner_product,
    multiply,
    norm,
    shift,
    shift_operator_norm,
    weight,
)
from .opa_solver import GramSystem, OpaResult, build_gram, noncyclic_lower_bound, opa, opa_sequence, solve_opa

__version__ = "0.1.0"
