"""Exact computation in free metabelian groups and their IA-automorphisms."""

from .laurent import INFINITY, LaurentPoly, omega
from .magnus import FreeMetabelian, MagnusElement, commutator, left_normed
from .graded import GradedVector, GrTuple, basis, coordinates, rank_gr
from .endo import Coset, Endomorphism, automorphism_commutator, star_act, tame_lift
from .parser import format_element, parse_element, parse_endomorphism, parse_scalar

__version__ = "0.1.0"

__all__ = [
    "INFINITY",
    "LaurentPoly",
    "omega",
    "FreeMetabelian",
    "MagnusElement",
    "commutator",
    "left_normed",
    "GradedVector",
    "GrTuple",
    "basis",
    "coordinates",
    "rank_gr",
    "Coset",
    "Endomorphism",
    "automorphism_commutator",
    "star_act",
    "tame_lift",
    "format_element",
    "parse_element",
    "parse_endomorphism",
    "parse_scalar",
]
