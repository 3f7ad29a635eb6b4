"""Structural Goedel coding of core formulas as HF sets.

Each node is ``pair(von_neumann(tag), payload)`` with the tag table
Mem=0, Eq=1, Not=2, And=3, Exists=4, VarIndex=5, SlotX=6, SlotP=7.
Payloads: atoms and And carry ``pair(left, right)``, Not and Exists the code
of their body, a de Bruijn index i carries ``von_neumann(i)`` and the slots
carry the empty set.
"""

from __future__ import annotations

from .. import hfset
from ..errors import DecodeError, NotAPair
from ..hfset import EMPTY, HfSet, kuratowski_pair, von_neumann
from .core import AND, EQ, EXISTS, MEM, NOT, SLOT_P, SLOT_X, VAR0, CoreFormula

TAG_MEM, TAG_EQ, TAG_NOT, TAG_AND, TAG_EXISTS, TAG_VAR, TAG_X, TAG_P = range(8)

_FORMULA_TAGS = {MEM: TAG_MEM, EQ: TAG_EQ, NOT: TAG_NOT, AND: TAG_AND, EXISTS: TAG_EXISTS}


def _node(tag, payload):
    return kuratowski_pair(von_neumann(tag), payload)


def code_term(t) -> HfSet:
    if t == "X":
        return _node(TAG_X, EMPTY)
    if t == "P":
        return _node(TAG_P, EMPTY)
    return _node(TAG_VAR, von_neumann(t))


def code_tree(node) -> HfSet:
    kind = node[0]
    if kind == "mem":
        return _node(TAG_MEM, kuratowski_pair(code_term(node[1]), code_term(node[2])))
    if kind == "eq":
        return _node(TAG_EQ, kuratowski_pair(code_term(node[1]), code_term(node[2])))
    if kind == "not":
        return _node(TAG_NOT, code_tree(node[1]))
    if kind == "and":
        return _node(TAG_AND, kuratowski_pair(code_tree(node[1]), code_tree(node[2])))
    if kind == "exists":
        return _node(TAG_EXISTS, code_tree(node[1]))
    raise TypeError(f"not a core node: {node!r}")


def code_formula(f: CoreFormula) -> HfSet:
    return code_tree(f.tree())


def _split(c: HfSet):
    try:
        tag_set, payload = hfset.unpair(c)
    except NotAPair:
        raise DecodeError(f"{hfset.format_hf(c)} is not a coded node") from None
    tag = hfset.as_natural(tag_set)
    if tag is None or tag > TAG_P:
        raise DecodeError("node tag is not one of the eight coded tags")
    return tag, payload


def _unpair(c):
    try:
        return hfset.unpair(c)
    except NotAPair:
        raise DecodeError("expected a pair payload") from None


def _decode_term(c: HfSet, out: list, depth: int):
    tag, payload = _split(c)
    if tag == TAG_X or tag == TAG_P:
        if payload is not EMPTY:
            raise DecodeError("slot payload must be empty")
        out.append(SLOT_X if tag == TAG_X else SLOT_P)
    elif tag == TAG_VAR:
        i = hfset.as_natural(payload)
        if i is None:
            raise DecodeError("variable payload must be a von Neumann natural")
        if i >= depth:
            raise DecodeError("de Bruijn index out of scope")
        out.append(VAR0 + i)
    else:
        raise DecodeError("expected a term node")


def _decode(c: HfSet, out: list, depth: int):
    tag, payload = _split(c)
    if tag in (TAG_MEM, TAG_EQ):
        a, b = _unpair(payload)
        out.append(MEM if tag == TAG_MEM else EQ)
        _decode_term(a, out, depth)
        _decode_term(b, out, depth)
    elif tag == TAG_NOT:
        out.append(NOT)
        _decode(payload, out, depth)
    elif tag == TAG_AND:
        a, b = _unpair(payload)
        out.append(AND)
        _decode(a, out, depth)
        _decode(b, out, depth)
    elif tag == TAG_EXISTS:
        out.append(EXISTS)
        _decode(payload, out, depth + 1)
    else:
        raise DecodeError("expected a formula node")


def decode_formula(c: HfSet) -> CoreFormula:
    out: list[int] = []
    _decode(c, out, 0)
    return CoreFormula(tuple(out))
