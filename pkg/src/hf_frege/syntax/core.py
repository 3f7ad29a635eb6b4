"""Core formulas: the connectives not/and/exists over the atoms in/=, with
de Bruijn bound variables and two free slots, X (the object) and P (the
parameter).

A core formula is stored as its prefix token string. The token alphabet, in
ascending order, is frozen because the enumeration order depends on it::

    MEM < EQ < NOT < AND < EXISTS < SLOT_X < SLOT_P < VAR(0) < VAR(1) < ...
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import NonCanonical, NotPure, UnboundVariable
from .ast import (
    And, Eq, EpsTerm, Exists, ForAll, HfLiteral, Iff, Implies, Mem, Not, Or, Param, Var,
)

MEM, EQ, NOT, AND, EXISTS, SLOT_X, SLOT_P, VAR0 = range(8)
ENUMERATION_ORDER_VERSION = "core-v1"

_TOKEN_NAMES = {MEM: "in", EQ: "=", NOT: "~", AND: "&", EXISTS: "E", SLOT_X: "X", SLOT_P: "P"}


@dataclass(frozen=True, slots=True)
class CoreFormula:
    tokens: tuple[int, ...]

    def __post_init__(self):
        if not is_well_formed(self.tokens):
            raise NonCanonical(f"not a well-formed core token string: {self.tokens}")

    def __len__(self):
        return len(self.tokens)

    def __lt__(self, other):
        return (len(self.tokens), self.tokens) < (len(other.tokens), other.tokens)

    def uses_param(self) -> bool:
        return SLOT_P in self.tokens

    def serialize(self) -> bytes:
        return serialize(self.tokens)

    def token_text(self) -> str:
        return " ".join(_TOKEN_NAMES.get(t, str(t - VAR0)) for t in self.tokens)

    def tree(self):
        """Nested tuples: ('mem'|'eq', a, b), ('not', f), ('and', f, g),
        ('exists', f); terms are 'X', 'P' or a de Bruijn int."""
        node, end = _read(self.tokens, 0)
        return node

    def __str__(self):
        return self.token_text()


def _read(tokens, i):
    t = tokens[i]
    if t in (MEM, EQ):
        a, i2 = _read_term(tokens, i + 1)
        b, i3 = _read_term(tokens, i2)
        return ("mem" if t == MEM else "eq", a, b), i3
    if t == NOT:
        f, j = _read(tokens, i + 1)
        return ("not", f), j
    if t == AND:
        f, j = _read(tokens, i + 1)
        g, k = _read(tokens, j)
        return ("and", f, g), k
    if t == EXISTS:
        f, j = _read(tokens, i + 1)
        return ("exists", f), j
    raise NonCanonical(f"expected formula token at {i}")


def _read_term(tokens, i):
    t = tokens[i]
    if t == SLOT_X:
        return "X", i + 1
    if t == SLOT_P:
        return "P", i + 1
    if t >= VAR0:
        return t - VAR0, i + 1
    raise NonCanonical(f"expected term token at {i}")


def is_well_formed(tokens) -> bool:
    """Prefix string of exactly one formula with every de Bruijn index bound."""
    # stack of pending items: depth for a formula, or ~depth for a term
    stack = [0]
    for t in tokens:
        if not stack:
            return False
        item = stack.pop()
        if item >= 0:
            d = item
            if t in (MEM, EQ):
                stack.extend((~d, ~d))
            elif t == NOT:
                stack.append(d)
            elif t == AND:
                stack.extend((d, d))
            elif t == EXISTS:
                stack.append(d + 1)
            else:
                return False
        else:
            d = ~item
            if t in (SLOT_X, SLOT_P):
                continue
            if not (isinstance(t, int) and VAR0 <= t < VAR0 + d):
                return False
    return not stack


def serialize(tokens) -> bytes:
    """One byte per token below 255; larger tokens are 0xFF followed by LEB128."""
    out = bytearray()
    for t in tokens:
        if t < 255:
            out.append(t)
        else:
            out.append(255)
            v = t - 255
            while True:
                b = v & 0x7F
                v >>= 7
                out.append(b | (0x80 if v else 0))
                if not v:
                    break
    return bytes(out)


def deserialize(data: bytes) -> CoreFormula:
    tokens = []
    i = 0
    while i < len(data):
        b = data[i]
        i += 1
        if b < 255:
            tokens.append(b)
            continue
        v, shift = 0, 0
        while True:
            c = data[i]
            i += 1
            v |= (c & 0x7F) << shift
            shift += 7
            if not c & 0x80:
                break
        tokens.append(v + 255)
    return CoreFormula(tuple(tokens))


# builders over token tuples
def c_mem(a, b):
    return (MEM, _term_token(a), _term_token(b))


def c_eq(a, b):
    return (EQ, _term_token(a), _term_token(b))


def _term_token(t):
    if t == "X":
        return SLOT_X
    if t == "P":
        return SLOT_P
    return VAR0 + t


def normalize(f, object_var: str = "x", param_var: str | None = "p") -> CoreFormula:
    """Carry a pure surface formula into core form.

    ``object_var`` becomes the slot X and ``param_var`` the slot P; any other
    free name raises UnboundVariable. or/->/<->/all are rewritten through
    not/and/exists without further simplification.
    """
    if isinstance(f, str):
        from .parser import parse
        f = parse(f, extended=False)
    out: list[int] = []

    def term(t, scope):
        if isinstance(t, (EpsTerm, HfLiteral)):
            raise NotPure("normalize needs a pure formula (no eps terms or HF literals)")
        name = t.name
        if isinstance(t, Var) and name in scope:
            # innermost binding wins; de Bruijn index counts binders outward
            return VAR0 + (len(scope) - 1 - _last_index(scope, name))
        if name == object_var:
            return SLOT_X
        if param_var is not None and name == param_var:
            return SLOT_P
        raise UnboundVariable(("$" if isinstance(t, Param) else "") + name)

    def go(node, scope):
        if isinstance(node, Mem):
            out.extend((MEM, term(node.left, scope), term(node.right, scope)))
        elif isinstance(node, Eq):
            out.extend((EQ, term(node.left, scope), term(node.right, scope)))
        elif isinstance(node, Not):
            out.append(NOT)
            go(node.body, scope)
        elif isinstance(node, And):
            out.append(AND)
            go(node.left, scope)
            go(node.right, scope)
        elif isinstance(node, Or):
            # a or b == not(not a and not b)
            out.extend((NOT, AND, NOT))
            go(node.left, scope)
            out.append(NOT)
            go(node.right, scope)
        elif isinstance(node, Implies):
            # a -> b == not(a and not b)
            out.extend((NOT, AND))
            go(node.left, scope)
            out.append(NOT)
            go(node.right, scope)
        elif isinstance(node, Iff):
            out.append(AND)
            go(Implies(node.left, node.right), scope)
            go(Implies(node.right, node.left), scope)
        elif isinstance(node, Exists):
            out.append(EXISTS)
            go(node.body, scope + (node.var,))
        elif isinstance(node, ForAll):
            out.extend((NOT, EXISTS, NOT))
            go(node.body, scope + (node.var,))
        else:
            raise TypeError(f"not a formula: {node!r}")

    go(f, ())
    return CoreFormula(tuple(out))


def _last_index(scope, name):
    for i in range(len(scope) - 1, -1, -1):
        if scope[i] == name:
            return i
    raise KeyError(name)


def to_surface(core: CoreFormula, object_var: str = "x", param_var: str = "p", prefix: str = "v",
               param_is_var: bool = False):
    """Surface tree of a core formula; bound variables are named by depth.

    P prints as ``$param_var`` unless ``param_is_var`` asks for a plain
    variable (needed when the parameter gets quantified).
    """
    def term(t, depth):
        if t == "X":
            return Var(object_var)
        if t == "P":
            return Var(param_var) if param_is_var else Param(param_var)
        return Var(f"{prefix}{depth - 1 - t}")

    def go(node, depth):
        kind = node[0]
        if kind == "mem":
            return Mem(term(node[1], depth), term(node[2], depth))
        if kind == "eq":
            return Eq(term(node[1], depth), term(node[2], depth))
        if kind == "not":
            return Not(go(node[1], depth))
        if kind == "and":
            return And(go(node[1], depth), go(node[2], depth))
        return Exists(f"{prefix}{depth}", go(node[1], depth + 1))

    return go(core.tree(), 0)


def core_text(core: CoreFormula, object_var: str = "x", param_var: str = "p") -> str:
    from .parser import to_text

    return to_text(to_surface(core, object_var, param_var))
