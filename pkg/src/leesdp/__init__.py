"""Symmetry-reduced three-point SDP bounds for Lee codes and strong powers of circular graphs."""

from .lee import Metric
from .program import EmptyRoute, SdpProgram, Variant, build_lp_b2, build_program
from .sdpa import emit_sdpa, parse_solution_and_floor, run_solver
from .oracle import alpha_circular_power, brute_force_optimum

__version__ = "0.1.0"

__all__ = [
    "Metric", "EmptyRoute", "Variant", "SdpProgram", "build_program", "build_lp_b2",
    "emit_sdpa", "parse_solution_and_floor", "run_solver",
    "brute_force_optimum", "alpha_circular_power",
]
