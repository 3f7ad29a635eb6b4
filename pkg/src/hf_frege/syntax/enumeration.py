"""The fixed enumeration psi_0, psi_1, ... of core formulas.

Order: shorter token strings first, then lexicographic in token order.
Every well-formed string of length L has all de Bruijn indices below L, so
each length class is finite and the order has type omega.

Ranking and unranking count completions of a stack of pending
nonterminals, so ``enumerate_formula(n)`` never materializes the prefix.
Sequential scans should use :func:`iter_formulas`, which walks the same
order depth-first and is much faster per formula.
"""

from __future__ import annotations

import functools
import threading

from ..errors import NonCanonical
from .core import AND, EQ, EXISTS, MEM, NOT, SLOT_P, SLOT_X, VAR0, CoreFormula, is_well_formed

MIN_LENGTH = 3

# pending items: ("F", depth) for a formula, ("T", depth) for a term
_F, _T = 0, 1


def _choices(item):
    """Token choices for a pending item in ascending token order, each with
    the items that replace it."""
    kind, d = item
    if kind == _F:
        term = (_T, d)
        return (
            (MEM, (term, term)),
            (EQ, (term, term)),
            (NOT, ((_F, d),)),
            (AND, ((_F, d), (_F, d))),
            (EXISTS, ((_F, d + 1),)),
        )
    return tuple((t, ()) for t in (SLOT_X, SLOT_P, *range(VAR0, VAR0 + d)))


@functools.lru_cache(maxsize=None)
def count_item(item, length: int) -> int:
    """Number of token strings of exactly ``length`` deriving ``item``."""
    kind, d = item
    if length <= 0:
        return 0
    if kind == _T:
        return 2 + d if length == 1 else 0
    total = 0
    for _, repl in _choices(item):
        total += count_seq(repl, length - 1)
    return total


@functools.lru_cache(maxsize=None)
def count_seq(items: tuple, length: int) -> int:
    if not items:
        return 1 if length == 0 else 0
    # every formula needs >= 3 tokens, every term exactly 1
    if length < sum(3 if k == _F else 1 for k, _ in items):
        return 0
    first, rest = items[0], items[1:]
    if not rest:
        return count_item(first, length)
    total = 0
    for a in range(1, length):
        c = count_item(first, a)
        if c:
            total += c * count_seq(rest, length - a)
    return total


@functools.lru_cache(maxsize=None)
def count_length(length: int) -> int:
    """Number of core formulas with exactly ``length`` tokens."""
    return count_item((_F, 0), length)


def _length_offset(length: int) -> int:
    return sum(count_length(k) for k in range(MIN_LENGTH, length))


def enumerate_formula(n: int) -> CoreFormula:
    """psi_n."""
    with _cache_lock:
        if 0 <= n < len(_cache):
            return _cache[n]
    return unrank(n)


def unrank(n: int) -> CoreFormula:
    """psi_n by counting alone (no cache)."""
    if n < 0:
        raise ValueError("enumeration indices are natural numbers")
    length = MIN_LENGTH
    while n >= count_length(length):
        n -= count_length(length)
        length += 1
    stack: tuple = ((_F, 0),)
    remaining = length
    tokens = []
    while stack:
        head, rest = stack[0], stack[1:]
        for tok, repl in _choices(head):
            new = repl + rest
            c = count_seq(new, remaining - 1)
            if n < c:
                tokens.append(tok)
                stack = new
                remaining -= 1
                break
            n -= c
        else:  # pragma: no cover - counts are exact
            raise AssertionError("unranking fell off the choice list")
    return CoreFormula(tuple(tokens))


def index_of(f: CoreFormula | tuple) -> int:
    tokens = f.tokens if isinstance(f, CoreFormula) else tuple(f)
    if not is_well_formed(tokens):
        raise NonCanonical(f"not a well-formed core token string: {tokens}")
    idx = _length_offset(len(tokens))
    stack: tuple = ((_F, 0),)
    remaining = len(tokens)
    for tok in tokens:
        head, rest = stack[0], stack[1:]
        for choice, repl in _choices(head):
            new = repl + rest
            if choice == tok:
                stack = new
                remaining -= 1
                break
            idx += count_seq(new, remaining - 1)
    return idx


def iter_formulas(start: int = 0):
    """Yield (n, psi_n) for n = start, start+1, ... in enumeration order."""
    n = start
    while True:
        yield n, _extend_cache(n)
        n += 1


def _iter_length(length: int):
    out: list[int] = []

    def walk(stack, remaining):
        if not stack:
            if remaining == 0:
                yield tuple(out)
            return
        head, rest = stack[0], stack[1:]
        for tok, repl in _choices(head):
            new = repl + rest
            if count_seq(new, remaining - 1):
                out.append(tok)
                yield from walk(new, remaining - 1)
                out.pop()

    yield from walk(((_F, 0),), length)


def _all_strings():
    length = MIN_LENGTH
    while True:
        yield from _iter_length(length)
        length += 1


_cache: list[CoreFormula] = []
_cache_lock = threading.Lock()
_source = _all_strings()


def _extend_cache(n: int) -> CoreFormula:
    """Pull from the sequential generator until psi_n is cached."""
    with _cache_lock:
        while len(_cache) <= n:
            _cache.append(CoreFormula(next(_source)))
        return _cache[n]


def prefix(count: int) -> list[CoreFormula]:
    """psi_0 .. psi_{count-1}."""
    if count:
        _extend_cache(count - 1)
    with _cache_lock:
        return _cache[:count]
