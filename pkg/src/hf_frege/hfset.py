"""Hereditarily finite sets.

Sets are interned: two structurally equal sets are the same Python object, so
equality and hashing are identity based. Members are kept in ascending
Ackermann order, where ``a(x) = sum(2 ** a(y) for y in x)``.

Ackermann indices of coding structures grow as towers of exponentials, so
the ordering never needs the number itself: two sets compare like the binary
numbers whose set bits are their members, i.e. by their largest differing
member.
"""

from __future__ import annotations

import functools
import threading
from typing import Iterable

from .errors import HfSyntaxError, IndexOverflow, NotAPair

DEFAULT_BIT_BUDGET = 2**24

# indices are cached eagerly only while they stay this small (in bits)
_EAGER_INDEX_BITS = 4096
_SHORTHAND_LIMIT = 2**16

_intern: dict[tuple, "HfSet"] = {}
_intern_lock = threading.Lock()


class HfSet:
    """An immutable hereditarily finite set. Build with :func:`from_members`."""

    __slots__ = ("members", "_memberset", "rank", "_idx")

    members: tuple["HfSet", ...]
    rank: int

    def __new__(cls, *args, **kwargs):
        raise TypeError("use hfset.from_members or hfset.empty")

    def __contains__(self, item):
        return item in self._memberset

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def __lt__(self, other):
        return compare(self, other) < 0

    def __le__(self, other):
        return compare(self, other) <= 0

    def __gt__(self, other):
        return compare(self, other) > 0

    def __ge__(self, other):
        return compare(self, other) >= 0

    def __reduce__(self):
        return (from_members, (self.members,))

    def __repr__(self):
        return f"HfSet({format_hf(self)})"

    def __str__(self):
        return format_hf(self)

    @property
    def small_index(self) -> int | None:
        """The Ackermann index if it is cheap to hold, else None."""
        return self._idx


def _make(members: tuple[HfSet, ...]) -> HfSet:
    with _intern_lock:
        found = _intern.get(members)
        if found is not None:
            return found
        obj = object.__new__(HfSet)
        obj.members = members
        obj._memberset = frozenset(members)
        obj.rank = 1 + max(m.rank for m in members) if members else 0
        idx = None
        if all(m._idx is not None for m in members):
            top = members[-1]._idx if members else -1
            if top < _EAGER_INDEX_BITS:
                idx = sum(1 << m._idx for m in members)
        obj._idx = idx
        _intern[members] = obj
        return obj


def compare(a: HfSet, b: HfSet) -> int:
    """Three-way comparison in Ackermann order, without building indices."""
    if a is b:
        return 0
    if a._idx is not None and b._idx is not None:
        return -1 if a._idx < b._idx else 1
    ma, mb = a.members, b.members
    i, j = len(ma) - 1, len(mb) - 1
    while i >= 0 and j >= 0:
        c = compare(ma[i], mb[j])
        if c:
            return c
        i -= 1
        j -= 1
    if i < 0 and j < 0:
        return 0
    return -1 if i < 0 else 1


_sort_key = functools.cmp_to_key(compare)


def from_members(ms: Iterable[HfSet]) -> HfSet:
    distinct = set(ms)
    for m in distinct:
        if not isinstance(m, HfSet):
            raise TypeError(f"HF set members must be HfSet, got {type(m).__name__}")
    if all(m._idx is not None for m in distinct):
        ordered = tuple(sorted(distinct, key=lambda m: m._idx))
    else:
        ordered = tuple(sorted(distinct, key=_sort_key))
    return _make(ordered)


EMPTY = _make(())


def empty() -> HfSet:
    return EMPTY


def singleton(a: HfSet) -> HfSet:
    return _make((a,))


def rank(x: HfSet) -> int:
    return x.rank


def cardinality(x: HfSet) -> int:
    return len(x.members)


def ackermann_index(x: HfSet, bit_budget: int = DEFAULT_BIT_BUDGET) -> int:
    """Return ``sum(2 ** a(y) for y in x)``.

    Raises IndexOverflow once the index would need more than ``bit_budget``
    bits.
    """
    if x._idx is not None:
        if x._idx.bit_length() > bit_budget:
            raise IndexOverflow(f"Ackermann index needs {x._idx.bit_length()} bits > budget {bit_budget}")
        return x._idx
    memo: dict[HfSet, int] = {}

    def go(s):
        if s._idx is not None:
            return s._idx
        if s in memo:
            return memo[s]
        exps = [go(m) for m in s.members]
        if exps[-1] >= bit_budget:
            raise IndexOverflow(f"Ackermann index needs more than {bit_budget} bits")
        value = sum(1 << e for e in exps)
        memo[s] = value
        return value

    return go(x)


@functools.lru_cache(maxsize=1 << 17)
def _from_small_index(n: int) -> HfSet:
    members = []
    bit = 0
    while n:
        if n & 1:
            members.append(_from_small_index(bit))
        n >>= 1
        bit += 1
    return _make(tuple(members))


def from_ackermann_index(n: int) -> HfSet:
    if n < 0:
        raise ValueError("Ackermann indices are natural numbers")
    if n < 1 << 20:
        return _from_small_index(n)
    members = []
    bit = 0
    while n:
        if n & 1:
            members.append(from_ackermann_index(bit))
        n >>= 1
        bit += 1
    return from_members(members)


def kuratowski_pair(a: HfSet, b: HfSet) -> HfSet:
    return from_members([singleton(a), from_members([a, b])])


def unpair(p: HfSet) -> tuple[HfSet, HfSet]:
    ms = p.members
    if len(ms) == 1:
        (only,) = ms
        if len(only.members) == 1:
            a = only.members[0]
            return a, a
    elif len(ms) == 2:
        small, big = sorted(ms, key=len)
        if len(small.members) == 1 and len(big.members) == 2:
            a = small.members[0]
            if a in big:
                b = big.members[0] if big.members[1] is a else big.members[1]
                return a, b
    raise NotAPair(f"{format_hf(p)} is not a Kuratowski pair")


def is_pair(p: HfSet) -> bool:
    try:
        unpair(p)
    except NotAPair:
        return False
    return True


@functools.lru_cache(maxsize=None)
def von_neumann(n: int) -> HfSet:
    if n < 0:
        raise ValueError("von Neumann naturals start at 0")
    if n == 0:
        return EMPTY
    prev = von_neumann(n - 1)
    return from_members(prev.members + (prev,))


def as_natural(x: HfSet) -> int | None:
    """Return n if x is the von Neumann natural n, else None."""
    n = len(x.members)
    if n > 64:
        return None
    return n if von_neumann(n) is x else None


def transitive_closure(x: HfSet) -> HfSet:
    """All hereditary members of x (x itself excluded unless it is one)."""
    return from_members(hereditary_members(x))


def hereditary_members(x: HfSet) -> set[HfSet]:
    seen: set[HfSet] = set()
    stack = list(x.members)
    while stack:
        s = stack.pop()
        if s in seen:
            continue
        seen.add(s)
        stack.extend(s.members)
    return seen


def is_transitive(xs: Iterable[HfSet]) -> bool:
    pool = set(xs)
    return all(m in pool for s in pool for m in s.members)


def format_hf(x: HfSet) -> str:
    """Render ``#n`` for indices below 2**16, braces otherwise."""
    if x._idx is not None and x._idx < _SHORTHAND_LIMIT:
        return f"#{x._idx}"
    return "{" + ",".join(format_hf(m) for m in x.members) + "}"


def format_braces(x: HfSet) -> str:
    return "{" + ",".join(format_braces(m) for m in x.members) + "}"


def parse_hf(text: str) -> HfSet:
    value, pos = read_hf(text, 0)
    pos = _skip_ws(text, pos)
    if pos != len(text):
        raise HfSyntaxError(f"trailing input at offset {pos} in HF literal")
    return value


def _skip_ws(text, pos):
    while pos < len(text) and text[pos].isspace():
        pos += 1
    return pos


def read_hf(text: str, pos: int) -> tuple[HfSet, int]:
    """Read one HF literal starting at ``pos``; return it and the end offset."""
    pos = _skip_ws(text, pos)
    if pos >= len(text):
        raise HfSyntaxError(f"expected HF literal at offset {pos}")
    ch = text[pos]
    if ch == "#":
        end = pos + 1
        while end < len(text) and text[end].isdigit():
            end += 1
        if end == pos + 1:
            raise HfSyntaxError(f"expected digits after '#' at offset {pos}")
        return from_ackermann_index(int(text[pos + 1:end])), end
    if ch != "{":
        raise HfSyntaxError(f"expected '{{' or '#' at offset {pos}")
    pos = _skip_ws(text, pos + 1)
    members = []
    if pos < len(text) and text[pos] == "}":
        return EMPTY, pos + 1
    while True:
        m, pos = read_hf(text, pos)
        members.append(m)
        pos = _skip_ws(text, pos)
        if pos < len(text) and text[pos] == ",":
            pos += 1
            continue
        if pos < len(text) and text[pos] == "}":
            return from_members(members), pos + 1
        raise HfSyntaxError(f"expected ',' or '}}' at offset {pos}")


def tuple_encode(values: list[HfSet]) -> HfSet:
    """Right-nested Kuratowski tuple; a single value stands for itself."""
    if not values:
        return EMPTY
    acc = values[-1]
    for v in reversed(values[:-1]):
        acc = kuratowski_pair(v, acc)
    return acc
