"""Painleve II on real intervals via an electrodiffusion field equation.

The package solves a generalized Painleve II two-point problem whose
unknown endpoint values enter the equation itself, builds its Airy-basis
perturbation series, and converts both the solution and each partial sum
into Painleve II data: a profile y on an interval [a, b] with constant C,
one interval and constant per order.  A direct perturbation of Painleve II
on a fixed interval is included for contrast, plus a CLI that reports the
standard case studies and parameter sweeps as CSV files and figures.
"""

from .airy import AiryQuad, ScaledAiryBasis, airy_eval, airy_quads, scaled_basis
from .conversion import (ExtraordinaryApproximant, PiiInstance, PiiProfile,
                         convert, convert_profile, extraordinary_sequence,
                         pii_residual)
from .direct import (DirectSeriesState, direct_partial_sums, direct_term,
                     nonlinearity_ratios)
from .errors import (AiryDomainError, ClassificationError, ConfigError,
                     ConvergenceError, DegenerateBasisError,
                     GridMismatchError, InvalidConversionError, P2SeqError,
                     ParameterError)
from .mesh import Grid, GridFunction, cumulative_integral, max_abs_combined
from .params import Parameters
from .reference import (ReferenceSolution, SolutionType, classify_type,
                        fd_derivative, solve_reference)
from .series import (SeriesState, SeriesTerm, delta_n, delta_sequence,
                     extend_series, partial_sum, rhs_term, series_residual,
                     solve_linear_neumann, solve_term)

__version__ = "0.1.0"

__all__ = [
    "AiryQuad", "ScaledAiryBasis", "airy_eval", "airy_quads", "scaled_basis",
    "Grid", "GridFunction", "cumulative_integral", "max_abs_combined",
    "Parameters", "ReferenceSolution", "SolutionType", "classify_type",
    "fd_derivative", "solve_reference",
    "SeriesState", "SeriesTerm", "rhs_term", "solve_term", "extend_series",
    "partial_sum", "delta_n", "delta_sequence", "series_residual",
    "solve_linear_neumann",
    "PiiInstance", "PiiProfile", "ExtraordinaryApproximant", "convert",
    "convert_profile", "extraordinary_sequence", "pii_residual",
    "DirectSeriesState", "direct_term", "direct_partial_sums",
    "nonlinearity_ratios",
    "P2SeqError", "ParameterError", "AiryDomainError", "GridMismatchError",
    "ConvergenceError", "ClassificationError", "DegenerateBasisError",
    "InvalidConversionError", "ConfigError",
    "__version__",
]
