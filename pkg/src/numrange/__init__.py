"""Numerical ranges of matrices and structured operators.

The main entry points are :func:`boundary_sweep` (cl W(A) from support
lines), :func:`trace_branches` (analytic eigenvalue branches),
:func:`ess_range_estimate` (essential numerical range from tail windows) and
:func:`anderson_check` (fill test against a convex analytic curve).
"""

from __future__ import annotations

from ._backend import NAME as backend
from .branches import (Branch, boundary_curve_from_support, hellmann_feynman_check,
                       isolation_gap, regularity_check, trace_branches)
from .curves import (ConvexAnalyticCurve, IntersectionReport, SubSegment, anderson_check,
                     curve_point, curve_tangent, intersect_boundary, parse_curve,
                     segment_coincidence, tangent_meets_region, theorem4_experiment)
from .errors import (BranchBreakError, ContainmentError, ConvergenceError, CurveInvalidError,
                     DimensionError, NumrangeError, PreconditionError, UnsupportedError)
from .essrange import (EssRangeEstimate, OperatorFamily, ess_oracle, ess_range_estimate,
                       essential_support_check, parse_family, tail_compression, truncate)
from .gallery import GalleryItem, build
from .linalg import (EigenDecomposition, hermitian_eig, hermitian_eigvals, imag_part, rayleigh,
                     real_part, rotate)
from .support import (FlatSegment, NumericalRangeBoundary, SupportSample, boundary_on_line,
                      boundary_sweep, contains_point, numerical_radius, support_value)

__version__ = "0.1.0"

__all__ = [
    "Branch", "BranchBreakError", "ContainmentError", "ConvergenceError", "ConvexAnalyticCurve",
    "CurveInvalidError", "DimensionError", "EigenDecomposition", "EssRangeEstimate",
    "FlatSegment", "GalleryItem", "IntersectionReport", "NumericalRangeBoundary",
    "NumrangeError", "OperatorFamily", "PreconditionError", "SubSegment", "SupportSample",
    "UnsupportedError", "anderson_check", "backend", "boundary_curve_from_support",
    "boundary_on_line", "boundary_sweep", "build", "contains_point", "curve_point",
    "curve_tangent", "ess_oracle", "ess_range_estimate", "essential_support_check",
    "hellmann_feynman_check", "hermitian_eig", "hermitian_eigvals", "imag_part",
    "intersect_boundary", "isolation_gap", "numerical_radius", "parse_curve", "parse_family",
    "rayleigh", "real_part", "regularity_check", "rotate", "segment_coincidence",
    "support_value", "tail_compression", "tangent_meets_region", "theorem4_experiment",
    "trace_branches", "truncate",
]
