"""Fregean abstraction over finite universes of hereditarily finite sets."""

__version__ = "0.1.0"

from .abstraction import (
    AbstractionObject, Equinumerous, Extensional, ExternalComparator, FirstOrderFormula,
    blv_check, class_abstraction, class_number, epsilon, extension_of, is_extension,
    scott_abstraction, scott_abstractions, scott_cardinal,
)
from .diagonal import russell_escape, russell_witness
from .eliminate import eval_extended, translate_literal, translate_uniform
from .hfset import HfSet, format_hf, from_ackermann_index, parse_hf
from .model import ClassExtension, Universe, evaluate, parse_universe, v_stage
from .syntax import parse, to_text

__all__ = [
    "AbstractionObject", "ClassExtension", "Equinumerous", "Extensional", "ExternalComparator",
    "FirstOrderFormula", "HfSet", "Universe", "blv_check", "class_abstraction", "class_number",
    "epsilon", "eval_extended", "evaluate", "extension_of", "format_hf", "from_ackermann_index",
    "is_extension", "parse", "parse_hf", "parse_universe", "russell_escape", "russell_witness",
    "scott_abstraction", "scott_abstractions", "scott_cardinal", "to_text", "translate_literal",
    "translate_uniform", "v_stage",
]
