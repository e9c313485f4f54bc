"""Polynomials over the rationals: representation, parsing, decomposition,
additive/multiplicative detection and family classification."""

from expandlab.polyalg.addmul import AddMulForm, addmul_by_splits, detect_addmul, poly_root
from expandlab.polyalg.decompose import Decomposition, compose_chain, decompose_uni, left_component, right_component
from expandlab.polyalg.family import (
    EpsVerdict,
    FamilyClass,
    PolyFamily,
    classify_family,
    eps_structured,
    meets_threshold,
)
from expandlab.polyalg.multipoly import MultiPoly, eval_poly
from expandlab.polyalg.parser import load_family_file, parse_any, parse_poly, parse_unipoly
from expandlab.polyalg.unipoly import UniPoly

__all__ = [
    "AddMulForm", "Decomposition", "EpsVerdict", "FamilyClass", "MultiPoly", "PolyFamily", "UniPoly",
    "addmul_by_splits", "classify_family", "compose_chain", "decompose_uni", "detect_addmul",
    "eps_structured", "eval_poly", "left_component", "load_family_file", "meets_threshold",
    "parse_any", "parse_poly", "parse_unipoly", "poly_root", "right_component",
]
