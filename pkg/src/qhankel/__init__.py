"""Symmetric q-calculus coefficient bounds for bi-univalent function classes.

The closed-form bounds live in :mod:`qhankel.bounds`; :mod:`qhankel.verify`
checks them by sampling the Caratheodory parameter box, and
:mod:`qhankel.suite` runs the self-consistency battery.
"""

from .bounds import thm1_bound, thm1_parts, thm2_bounds, thm3_bound
from .classdef import build_lhs, closed_form_lhs_coeffs, solve_forward
from .phis import PhiSpec, caratheodory, crescent, custom, janowski, parse_phi
from .pseries import TruncatedSeries, comp_inverse, compose
from .qkernel import ClassParams, sym_q_number
from .suite import consistency_suite
from .verify import BoundReport, sup_a2_a3, sup_fekete, sup_hankel

__all__ = [
    "BoundReport", "ClassParams", "PhiSpec", "TruncatedSeries",
    "build_lhs", "caratheodory", "closed_form_lhs_coeffs", "comp_inverse", "compose",
    "consistency_suite", "crescent", "custom", "janowski", "parse_phi", "solve_forward",
    "sup_a2_a3", "sup_fekete", "sup_hankel", "sym_q_number",
    "thm1_bound", "thm1_parts", "thm2_bounds", "thm3_bound",
]
__version__ = "0.1.0"
