"""Surface syntax trees for the first-order language of set theory.

Terms are variables, named parameters (``$p``) and, in the extended language,
HF literals and epsilon terms. ``Var`` and ``Param`` share one namespace when
binding values; the ``$`` only marks a name that is never quantified.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..hfset import HfSet


@dataclass(frozen=True, slots=True)
class Var:
    name: str


@dataclass(frozen=True, slots=True)
class Param:
    name: str


@dataclass(frozen=True, slots=True)
class HfLiteral:
    value: HfSet


@dataclass(frozen=True, slots=True)
class EpsTerm:
    var: str
    body: "Formula"


Term = Var | Param | HfLiteral | EpsTerm


@dataclass(frozen=True, slots=True)
class Mem:
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class Not:
    body: "Formula"


@dataclass(frozen=True, slots=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class ForAll:
    var: str
    body: "Formula"


@dataclass(frozen=True, slots=True)
class Exists:
    var: str
    body: "Formula"


Formula = Mem | Eq | Not | And | Or | Implies | Iff | ForAll | Exists
ATOMS = (Mem, Eq)
BINARY = (And, Or, Implies, Iff)
QUANTIFIERS = (ForAll, Exists)


def term_names(t) -> set[str]:
    if isinstance(t, (Var, Param)):
        return {t.name}
    if isinstance(t, EpsTerm):
        return free_names(t.body) - {t.var}
    return set()


def free_names(f) -> set[str]:
    """Free variable and parameter names of a formula (through eps bodies too)."""
    out: set[str] = set()
    stack = [(f, frozenset())]
    while stack:
        node, bound = stack.pop()
        if isinstance(node, ATOMS):
            out |= term_names(node.left) - bound
            out |= term_names(node.right) - bound
        elif isinstance(node, Not):
            stack.append((node.body, bound))
        elif isinstance(node, BINARY):
            stack.append((node.left, bound))
            stack.append((node.right, bound))
        elif isinstance(node, QUANTIFIERS):
            stack.append((node.body, bound | {node.var}))
        else:
            raise TypeError(f"not a formula node: {node!r}")
    return out


def is_pure(f) -> bool:
    for node in iter_terms(f):
        if isinstance(node, (EpsTerm, HfLiteral)):
            return False
    return True


def iter_terms(f):
    """Yield the top-level terms of every atom (eps bodies are not entered)."""
    stack = [f]
    while stack:
        node = stack.pop()
        if isinstance(node, ATOMS):
            yield node.left
            yield node.right
        elif isinstance(node, Not):
            stack.append(node.body)
        elif isinstance(node, BINARY):
            stack.append(node.right)
            stack.append(node.left)
        elif isinstance(node, QUANTIFIERS):
            stack.append(node.body)


def contains_eps(f) -> bool:
    return any(isinstance(t, EpsTerm) for t in iter_terms(f))


def node_count(f) -> int:
    """Tree size, counting terms; shared subtrees are counted once per use."""
    memo: dict[int, int] = {}

    def go(node):
        key = id(node)
        if key in memo:
            return memo[key]
        if isinstance(node, ATOMS):
            n = 1 + go(node.left) + go(node.right)
        elif isinstance(node, (Not, ForAll, Exists)):
            n = 1 + go(node.body)
        elif isinstance(node, BINARY):
            n = 1 + go(node.left) + go(node.right)
        elif isinstance(node, EpsTerm):
            n = 1 + go(node.body)
        else:
            n = 1
        memo[key] = n
        return n

    return go(f)


def big_or(parts: list):
    """Left-nested disjunction; the empty disjunction is ``None``."""
    if not parts:
        return None
    acc = parts[0]
    for p in parts[1:]:
        acc = Or(acc, p)
    return acc


def big_and(parts: list):
    if not parts:
        return None
    acc = parts[0]
    for p in parts[1:]:
        acc = And(acc, p)
    return acc
