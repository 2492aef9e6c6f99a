"""Simultaneous polynomial approximation of a function and its derivatives on [0,1]^N."""

from .approximator import ApproxConfig, ErrorReport, approximate, error_report
from .bernstein import bernstein_approximate, sup_error
from .dbeta_solver import apply_dbeta_w, leading_constant, solve
from .grid import GridSpec
from .oracles import DerivativeOracle
from .polyalgebra import Polynomial, add, affine_substitute, differentiate, evaluate, mul
from .sigma_partition import SigmaTerm, enumerate_sigma, verify_identity, weight_polynomial

__version__ = "0.1.0"
