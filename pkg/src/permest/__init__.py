"""Gaussian determinant estimators for permanents and mixed discriminants.

The estimators draw ``alpha = det(M)**2`` for a random matrix ``M`` built
from the input. ``alpha`` is unbiased, and with constant probability it
lies within a simply exponential factor of the target. Exact oracles for
small instances, the analytic constants of the tail bounds and a rainbow
spanning tree counter are included.
"""
__version__ = "0.1.0"

from ._backend import BACKEND
from .applications import (
    ColoredGraph,
    ColoredVectorFamily,
    color_class_matrices,
    count_rainbow_bases_estimate,
    count_rainbow_bases_exact,
    incidence_matrix,
)
from .constants import AnalyticConstants, analytic_constants, compute_C0, compute_L2, verify_logmoment_bounds
from .errors import *  # noqa: F401,F403
from .estimator import (
    EstimateRun,
    EstimatorKind,
    LogEstimate,
    estimate_mixdisc_once,
    estimate_permanent_once,
    run_estimate,
    tail_bound_lower,
    tail_bound_upper,
)
from .linalg import PsdTuple, as_square_matrix, det, factor_psd, log_abs_det
from .oracles import (
    ExactValue,
    count_rainbow_trees_brute,
    kron_identity,
    mixdisc_inclusion_exclusion,
    mixdisc_naive,
    permanent_naive,
    permanent_ryser,
)
from .sampler import RngStream
