"""Seeded generators for test and suite corpora."""

from __future__ import annotations

import random

from . import hfset
from .syntax.ast import (
    And, Eq, EpsTerm, Exists, ForAll, HfLiteral, Iff, Implies, Mem, Not, Or, Param, Var,
)
from .syntax.enumeration import prefix

_BOUND_POOL = ("y", "z", "w", "x")


def random_formula(rng: random.Random, free=("x",), params=(), depth: int = 3,
                   quantifiers: int = 2, bound_pool=_BOUND_POOL):
    """A random pure surface formula.

    Free names are drawn from ``free`` (as variables) and ``params`` (as
    ``$name``); bound names come from ``bound_pool`` and may shadow.
    """
    def term(scope):
        choices = [Var(v) for v in scope] + [Param(p) for p in params]
        return rng.choice(choices)

    def go(d, q, scope):
        if d == 0 or rng.random() < 0.25:
            cls = Mem if rng.random() < 0.6 else Eq
            return cls(term(scope), term(scope))
        kinds = ["not", "and", "or", "imp", "iff"]
        if q > 0:
            kinds += ["all", "ex", "ex"]
        kind = rng.choice(kinds)
        if kind == "not":
            return Not(go(d - 1, q, scope))
        if kind in ("all", "ex"):
            v = rng.choice(bound_pool)
            body = go(d - 1, q - 1, scope + (v,) if v not in scope else scope)
            return (ForAll if kind == "all" else Exists)(v, body)
        cls = {"and": And, "or": Or, "imp": Implies, "iff": Iff}[kind]
        return cls(go(d - 1, q, scope), go(d - 1, q, scope))

    return go(depth, quantifiers, tuple(free))


def random_candidate_T(rng: random.Random):
    """A random candidate truth predicate with free variables among y, x."""
    return random_formula(rng, free=("y", "x"), depth=3, quantifiers=2, bound_pool=("u", "v", "w"))


def random_extended(rng: random.Random, params=("p",), max_index_literal: int = 16):
    """A random extended formula over the parameters, with eps terms whose
    bodies mention only their bound variable and the parameters."""
    def body():
        return random_formula(rng, free=("x",), params=params, depth=2, quantifiers=1,
                              bound_pool=("s", "t"))

    def term(scope):
        r = rng.random()
        if r < 0.35:
            return EpsTerm("x", body())
        if r < 0.45:
            return HfLiteral(hfset.from_ackermann_index(rng.randrange(max_index_literal)))
        choices = [Var(v) for v in scope] + [Param(p) for p in params]
        return rng.choice(choices)

    def go(d, q, scope):
        if d == 0 or rng.random() < 0.3:
            cls = Mem if rng.random() < 0.6 else Eq
            return cls(term(scope), term(scope))
        kinds = ["not", "and", "or", "imp"] + (["all", "ex"] if q > 0 else [])
        kind = rng.choice(kinds)
        if kind == "not":
            return Not(go(d - 1, q, scope))
        if kind in ("all", "ex"):
            v = rng.choice(("y", "z"))
            return (ForAll if kind == "all" else Exists)(v, go(d - 1, q - 1, scope + (v,)))
        cls = {"and": And, "or": Or, "imp": Implies}[kind]
        return cls(go(d - 1, q, scope), go(d - 1, q, scope))

    f = go(3, 2, ())
    return f


def extended_corpus(seed: int = 0, count: int = 50, min_eps: int = 1):
    """``count`` extended formulas, each containing at least ``min_eps`` eps terms."""
    from .syntax.ast import iter_terms

    rng = random.Random(seed)
    out = []
    while len(out) < count:
        f = random_extended(rng)
        if sum(isinstance(t, EpsTerm) for t in iter_terms(f)) >= min_eps:
            out.append(f)
    return out


def candidate_corpus(seed: int = 0, count: int = 100):
    rng = random.Random(seed)
    return [random_candidate_T(rng) for _ in range(count)]


def surface_corpus(seed: int = 0, count: int = 1000, extended: bool = True):
    """Formulas for parse/print round trips, some with eps terms and literals."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        if extended and rng.random() < 0.3:
            out.append(random_extended(rng, params=("p", "q")))
        else:
            out.append(random_formula(rng, free=("x", "y"), params=("p",), depth=4, quantifiers=3))
    return out


def blv_presentations(universe, count: int = 30):
    """The first ``count`` core formulas, each with every parameter in the universe."""
    return [(f, {"p": p}) for f in prefix(count) for p in universe.elements]
