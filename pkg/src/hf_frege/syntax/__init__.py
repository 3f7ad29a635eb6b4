"""Syntax: surface trees, parser/printer, core normal form, enumeration, coding."""

from .ast import (
    And, Eq, EpsTerm, Exists, ForAll, HfLiteral, Iff, Implies, Mem, Not, Or, Param, Var,
    free_names, is_pure,
)
from .coding import code_formula, decode_formula
from .core import ENUMERATION_ORDER_VERSION, CoreFormula, core_text, normalize, to_surface
from .enumeration import enumerate_formula, index_of, iter_formulas
from .parser import parse, to_text

__all__ = [
    "And", "Eq", "EpsTerm", "Exists", "ForAll", "HfLiteral", "Iff", "Implies", "Mem", "Not",
    "Or", "Param", "Var", "free_names", "is_pure", "code_formula", "decode_formula",
    "ENUMERATION_ORDER_VERSION", "CoreFormula", "core_text", "normalize", "to_surface",
    "enumerate_formula", "index_of", "iter_formulas", "parse", "to_text",
]
