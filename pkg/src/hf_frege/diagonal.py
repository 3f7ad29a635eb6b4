"""Diagonal arguments at finite scale.

``russell_witness`` defeats any candidate truth predicate T(y, x): with
R(x) = not T(x, x) and r the code of R, T(r, r) and R(r) disagree.
``russell_escape`` shows the extension object of the Russell class of a
universe never lies inside that universe.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import hfset
from .abstraction import AbstractionObject, epsilon, is_extension
from .errors import InvariantViolation, UniverseTooLarge, UserError
from .hfset import HfSet
from .model import ClassExtension, Evaluator, Universe, closure_of, evaluate
from .syntax import ast
from .syntax.ast import Not, Var
from .syntax.coding import code_formula
from .syntax.core import normalize
from .syntax.parser import parse, to_text

MAX_ESCAPE_SIZE = 4096


@dataclass
class DiagonalWitness:
    T: object
    R: object
    r: HfSet
    universe: Universe
    value_T: bool
    value_R: bool

    def to_json(self) -> dict:
        return {
            "T": to_text(self.T),
            "R": to_text(self.R),
            "r": hfset.format_hf(self.r),
            "universe_size": self.universe.size,
            "value_T": self.value_T,
            "value_R": self.value_R,
        }


def _substitute(f, mapping: dict):
    """Replace free variables by variables, renaming nothing (targets must
    not be bound in ``f``)."""
    def term(t, bound):
        if isinstance(t, ast.Var) and t.name in mapping and t.name not in bound:
            return Var(mapping[t.name])
        return t

    def go(n, bound):
        if isinstance(n, (ast.Mem, ast.Eq)):
            return type(n)(term(n.left, bound), term(n.right, bound))
        if isinstance(n, ast.Not):
            return Not(go(n.body, bound))
        if isinstance(n, ast.BINARY):
            return type(n)(go(n.left, bound), go(n.right, bound))
        if isinstance(n, ast.QUANTIFIERS):
            if n.var in mapping.values() and n.var not in mapping:
                raise UserError(f"substitution would capture {n.var!r}")
            return type(n)(n.var, go(n.body, bound | {n.var}))
        raise TypeError(f"not a formula: {n!r}")

    return go(f, frozenset())


def _slots(T, code_var, arg_var):
    free = ast.free_names(T)
    if free <= {code_var, arg_var}:
        return code_var, arg_var
    if len(free) == 2:
        return tuple(sorted(free))
    raise UserError(f"T must have at most the two free variables {code_var!r}, {arg_var!r}; has {sorted(free)}")


def russell_witness(T, base: Universe | None = None, code_var: str = "y",
                    arg_var: str = "x") -> DiagonalWitness:
    """Diagonal counterexample for a candidate truth predicate T(code, arg)."""
    if isinstance(T, str):
        T = parse(T, extended=False)
    if not ast.is_pure(T):
        raise UserError("T must be a pure formula")
    cv, av = _slots(T, code_var, arg_var)
    # quantified variables of T named like the diagonal variable would capture
    diag = "x" if "x" not in _bound(T) else "_x"
    R = Not(_substitute(T, {cv: diag, av: diag}))
    r = code_formula(normalize(R, diag, None))
    seeds = list(base.elements) if base is not None else []
    U = closure_of(seeds + [r], label=f"closure:{'base+' if base is not None else ''}code(R)")
    ev = Evaluator(U)
    value_T = evaluate(U, T, {cv: r, av: r}, ev)
    value_R = evaluate(U, R, {diag: r}, ev)
    if value_T == value_R:
        raise InvariantViolation("diagonal witness failed: T(r, r) agrees with R(r)")
    return DiagonalWitness(T, R, r, U, value_T, value_R)


def _bound(f) -> set:
    out = set()
    stack = [f]
    while stack:
        n = stack.pop()
        if isinstance(n, ast.QUANTIFIERS):
            out.add(n.var)
            stack.append(n.body)
        elif isinstance(n, ast.Not):
            stack.append(n.body)
        elif isinstance(n, ast.BINARY):
            stack.extend((n.left, n.right))
    return out


@dataclass
class Escape:
    russell_class: ClassExtension
    eps_R: AbstractionObject
    hf: HfSet
    escaped: bool
    extension_elements: int

    def to_json(self) -> dict:
        out = self.eps_R.to_json()
        out.update({
            "russell_class_size": self.russell_class.popcount(),
            "universe_size": self.russell_class.universe.size,
            "extension_objects_in_universe": self.extension_elements,
            "escaped": self.escaped,
        })
        return out


def russell_class(u: Universe, budget: int | None = None) -> tuple[ClassExtension, int]:
    """{x in U : x is not an extension object, or x is not in its class}."""
    bits = 0
    hits = 0
    for i, x in enumerate(u.elements):
        found = is_extension(u, x, budget)
        if found is None:
            bits |= 1 << i
            continue
        hits += 1
        _, _, ext = found
        if x not in ext:
            bits |= 1 << i
    return ClassExtension(u, bits), hits


def russell_escape(u: Universe, budget: int | None = None) -> Escape:
    if u.size > MAX_ESCAPE_SIZE:
        raise UniverseTooLarge(f"escape check is capped at {MAX_ESCAPE_SIZE} elements, got {u.size}")
    R, hits = russell_class(u, budget)
    eps_R = epsilon(u, R, budget)
    hf = eps_R.as_hfset
    if hf in u:
        # eps_R in U would fall under R iff it does not
        raise InvariantViolation(f"extension of the Russell class lies inside {u.label}")
    return Escape(R, eps_R, hf, True, hits)
