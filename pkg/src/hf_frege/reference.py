"""Deliberately naive reference implementations.

Nothing here touches the bitset machinery, the rank/unrank counting, or the
search tables; these exist to cross-check them on small inputs.
"""

from __future__ import annotations

import functools

from . import hfset
from .hfset import HfSet

# token values, restated so a typo in the core module would show up as a mismatch
MEM, EQ, NOT, AND, EXISTS, SLOT_X, SLOT_P, VAR0 = range(8)


@functools.lru_cache(maxsize=None)
def _strings(kind: str, depth: int, length: int) -> tuple:
    """All token tuples of exactly ``length`` deriving a formula ('f') or term ('t')."""
    if length <= 0:
        return ()
    if kind == "t":
        if length != 1:
            return ()
        return tuple((tok,) for tok in [SLOT_X, SLOT_P] + [VAR0 + i for i in range(depth)])
    out = []
    if length == 3:
        for op in (MEM, EQ):
            for a in _strings("t", depth, 1):
                for b in _strings("t", depth, 1):
                    out.append((op,) + a + b)
    out += [(NOT,) + s for s in _strings("f", depth, length - 1)]
    for k in range(1, length - 1):
        for s in _strings("f", depth, k):
            for t in _strings("f", depth, length - 1 - k):
                out.append((AND,) + s + t)
    out += [(EXISTS,) + s for s in _strings("f", depth + 1, length - 1)]
    return tuple(out)


def formulas_of_length(length: int) -> list[tuple]:
    return sorted(_strings("f", 0, length))


def walk():
    """Every core token string in (length, lexicographic) order."""
    length = 3
    while True:
        yield from formulas_of_length(length)
        length += 1


def holds(tokens, x: HfSet, p: HfSet, domain) -> bool:
    """Tarski truth of a core token string, by direct recursion over ``domain``."""
    def term(i, stack):
        t = tokens[i]
        if t == SLOT_X:
            return x, i + 1
        if t == SLOT_P:
            return p, i + 1
        return stack[-1 - (t - VAR0)], i + 1

    def go(i, stack):
        t = tokens[i]
        if t in (MEM, EQ):
            a, i = term(i + 1, stack)
            b, i = term(i, stack)
            if t == MEM:
                return any(m == a for m in b.members), i
            return a == b, i
        if t == NOT:
            v, i = go(i + 1, stack)
            return not v, i
        if t == AND:
            v, j = go(i + 1, stack)
            w, k = go(j, stack)
            return v and w, k
        if t == EXISTS:
            end = None
            found = False
            for d in domain:
                v, end = go(i + 1, stack + [d])
                found = found or v
            if end is None:
                # empty domain: still need the end position
                end = _skip(tokens, i + 1)
            return found, end
        raise ValueError(f"bad token {t} at {i}")

    value, end = go(0, [])
    if end != len(tokens):
        raise ValueError("trailing tokens")
    return value


def _skip(tokens, i):
    need = 1
    while need:
        t = tokens[i]
        need -= 1
        if t in (MEM, EQ, AND):
            need += 2
        elif t in (NOT, EXISTS):
            need += 1
        i += 1
    return i


def extension(tokens, p: HfSet, domain) -> frozenset:
    return frozenset(x for x in domain if holds(tokens, x, p, domain))


def brute_epsilon(domain, target: frozenset, limit: int = 200000):
    """(n, tokens, params) for the least formula defining ``target`` with some
    parameter from ``domain``; params are all minimal-rank witnesses."""
    domain = list(domain)
    for n, tokens in enumerate(walk()):
        if n >= limit:
            raise RuntimeError("reference scan limit reached")
        works = [p for p in domain if extension(tokens, p, domain) == target]
        if works:
            low = min(hfset.rank(p) for p in works)
            return n, tokens, frozenset(p for p in works if hfset.rank(p) == low)
