"""Classical and quantum orthogonal Latin squares, and the golden AME(4,6) state."""

from .tensor_core import (
    DEFAULT_TOL,
    BipartiteShape,
    BipartiteState,
    partial_trace,
    partial_transpose,
    polar_unitary,
    reshuffle,
    schmidt_values,
    unitarity_deficit,
    unreshuffle,
)
from .quantum import QOLSDesign, VerificationReport, verify_design
from .golden import build_golden_u

__version__ = "0.1.0"
