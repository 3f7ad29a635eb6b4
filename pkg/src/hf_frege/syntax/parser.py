"""Recursive-descent parser and printer for the surface grammar::

    formula := iff ; iff := imp ('<->' imp)* ; imp := or ('->' or)*
    or := and ('or' and)* ; and := unary ('and' unary)*
    unary := 'not' unary | 'all' IDENT unary | 'ex' IDENT unary
           | '(' formula ')' | atom
    atom := term ('in' | '=') term
    term := IDENT | '$' IDENT | hf-literal | 'eps' '[' IDENT '|' formula ']'

``<->`` and the other binary connectives associate to the left, ``->`` to
the right. The printer parenthesizes every binary operand, so
``parse(to_text(f)) == f`` holds for every tree.
"""

from __future__ import annotations

import re
import sys

from .. import hfset
from ..errors import FormulaSyntaxError, HfSyntaxError
from .ast import (
    And, Eq, EpsTerm, Exists, ForAll, HfLiteral, Iff, Implies, Mem, Not, Or, Param, Var,
    BINARY,
)

KEYWORDS = {"not", "all", "ex", "in", "and", "or", "eps"}
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")


class _Parser:
    def __init__(self, text: str, extended: bool):
        self.text = text
        self.pos = 0
        self.extended = extended

    def error(self, message, expected=()):
        raise FormulaSyntaxError(message, self.pos, expected)

    def skip(self):
        text, pos = self.text, self.pos
        while pos < len(text) and text[pos].isspace():
            pos += 1
        self.pos = pos

    def peek_word(self):
        self.skip()
        m = _IDENT.match(self.text, self.pos)
        return m.group(0) if m else None

    def at(self, symbol):
        self.skip()
        if symbol.isalpha():
            return self.peek_word() == symbol
        return self.text.startswith(symbol, self.pos)

    def take(self, symbol):
        if self.at(symbol):
            self.pos += len(symbol)
            return True
        return False

    def expect(self, symbol):
        if not self.take(symbol):
            self.error("unexpected input" if self.pos < len(self.text) else "unexpected end of input", [symbol])

    def ident(self):
        word = self.peek_word()
        if word is None or word in KEYWORDS:
            self.error("expected identifier", ["IDENT"])
        self.pos += len(word)
        return word

    def formula(self):
        left = self.implication()
        while self.take("<->"):
            left = Iff(left, self.implication())
        return left

    def implication(self):
        left = self.disjunction()
        if self.at("->"):
            self.pos += 2
            return Implies(left, self.implication())
        return left

    def disjunction(self):
        left = self.conjunction()
        while self.take("or"):
            left = Or(left, self.conjunction())
        return left

    def conjunction(self):
        left = self.unary()
        while self.take("and"):
            left = And(left, self.unary())
        return left

    def unary(self):
        if self.take("not"):
            return Not(self.unary())
        if self.take("all"):
            var = self.ident()
            return ForAll(var, self.unary())
        if self.take("ex"):
            var = self.ident()
            return Exists(var, self.unary())
        if self.take("("):
            inner = self.formula()
            self.expect(")")
            return inner
        return self.atom()

    def atom(self):
        left = self.term()
        if self.take("in"):
            return Mem(left, self.term())
        if self.take("="):
            return Eq(left, self.term())
        self.error("unexpected input" if self.pos < len(self.text) else "unexpected end of input", ["in", "="])

    def term(self):
        self.skip()
        start = self.pos
        if self.take("$"):
            return Param(self.ident())
        if self.at("{") or self.at("#"):
            if not self.extended:
                self.error("HF literals are only allowed in the extended language")
            try:
                value, self.pos = hfset.read_hf(self.text, self.pos)
            except HfSyntaxError as exc:
                raise FormulaSyntaxError(str(exc), start) from None
            return HfLiteral(value)
        if self.at("eps"):
            if not self.extended:
                self.error("eps terms are only allowed in the extended language")
            self.pos += 3
            self.expect("[")
            var = self.ident()
            self.expect("|")
            body = self.formula()
            self.expect("]")
            return EpsTerm(var, body)
        word = self.peek_word()
        if word is None or word in KEYWORDS:
            expected = ["IDENT", "$IDENT"] + (["{", "#", "eps"] if self.extended else [])
            self.error("unexpected input" if self.pos < len(self.text) else "unexpected end of input", expected)
        self.pos += len(word)
        return Var(word)


def parse(text: str, extended: bool = True):
    """Parse surface text into a formula tree.

    With ``extended=False`` eps terms and HF literals are rejected.
    """
    p = _Parser(text, extended)
    f = p.formula()
    p.skip()
    if p.pos != len(text):
        p.error("trailing input", ["<->", "->", "or", "and"])
    return f


def term_text(t) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Param):
        return "$" + t.name
    if isinstance(t, HfLiteral):
        return hfset.format_hf(t.value)
    if isinstance(t, EpsTerm):
        return f"eps[{t.var} | {to_text(t.body)}]"
    raise TypeError(f"not a term: {t!r}")


_OPS = {And: "and", Or: "or", Implies: "->", Iff: "<->"}


def to_text(f) -> str:
    if sys.getrecursionlimit() < 20000:
        sys.setrecursionlimit(20000)
    parts: list[str] = []
    _emit(f, parts)
    return "".join(parts)


def _emit(f, out):
    if isinstance(f, Mem):
        out.append(f"{term_text(f.left)} in {term_text(f.right)}")
    elif isinstance(f, Eq):
        out.append(f"{term_text(f.left)} = {term_text(f.right)}")
    elif isinstance(f, Not):
        out.append("not ")
        _emit_operand(f.body, out)
    elif isinstance(f, ForAll):
        out.append(f"all {f.var} ")
        _emit_operand(f.body, out)
    elif isinstance(f, Exists):
        out.append(f"ex {f.var} ")
        _emit_operand(f.body, out)
    elif isinstance(f, BINARY):
        _emit_operand(f.left, out)
        out.append(f" {_OPS[type(f)]} ")
        _emit_operand(f.right, out)
    else:
        raise TypeError(f"not a formula: {f!r}")


def _emit_operand(f, out):
    if isinstance(f, BINARY):
        out.append("(")
        _emit(f, out)
        out.append(")")
    else:
        _emit(f, out)
