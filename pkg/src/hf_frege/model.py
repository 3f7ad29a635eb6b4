"""Finite transitive universes, truth evaluation and the least-formula search.

Quantifiers range over the universe's elements; atoms between concrete sets
are decided in the ambient HF world, so parameters may lie outside the
universe. Class extensions are int bitsets indexed by element position.
"""

from __future__ import annotations

import sys
import threading
from dataclasses import dataclass, field

from . import hfset
from .errors import (
    BudgetExceeded, NotPure, SegmentTooLarge, StageTooLarge, UnboundVariable, UserError,
)
from .hfset import EMPTY, HfSet
from .syntax.ast import (
    ATOMS, BINARY, And, Eq, EpsTerm, Exists, ForAll, HfLiteral, Iff, Implies, Mem, Not, Or,
    Param, Var, QUANTIFIERS,
)
from .syntax.core import CoreFormula
from .syntax.enumeration import enumerate_formula, iter_formulas

MAX_ELEMENTS = 2**20
DEFAULT_BUDGET = 50_000
_STAGE_SIZES = {0: 0, 1: 1, 2: 2, 3: 4, 4: 16, 5: 65536}


class Universe:
    """A finite transitive set of HF sets, in ascending Ackermann order."""

    def __init__(self, elements, label: str):
        elements = tuple(sorted(set(elements), key=hfset._sort_key))
        if not elements:
            raise UserError("a universe needs at least one element")
        if len(elements) > MAX_ELEMENTS:
            raise SegmentTooLarge(f"universe would have {len(elements)} elements > {MAX_ELEMENTS}")
        self.elements = elements
        self.label = label
        self.size = len(elements)
        self.full = (1 << self.size) - 1
        self.position = {e: i for i, e in enumerate(elements)}
        self.ranks = [e.rank for e in elements]
        pos = self.position
        self.members_bits = []
        self.containers_bits = [0] * self.size
        for i, e in enumerate(elements):
            bits = 0
            for m in e.members:
                j = pos.get(m)
                if j is None:
                    raise UserError(f"universe {label} is not transitive: missing member of {e}")
                bits |= 1 << j
                self.containers_bits[j] |= 1 << i
            self.members_bits.append(bits)
        self._lock = threading.RLock()
        self._info: dict[HfSet, "ValueInfo"] = {}
        self._ext_cache: dict[tuple, int] = {}
        self._rows: list[tuple[int, ...]] = []
        self._first_by_bits: dict[int, int] = {}
        self._first_by_pop: dict[int, int] = {}
        self._search_cache: dict[tuple, "SearchResult"] = {}

    def __repr__(self):
        return f"Universe({self.label}, {self.size} elements)"

    def __len__(self):
        return self.size

    def __contains__(self, x):
        return x in self.position

    @property
    def is_v_stage(self) -> bool:
        return self.label.startswith("v") and self.label[1:].isdigit()

    @property
    def stage(self) -> int | None:
        return int(self.label[1:]) if self.is_v_stage else None

    def info(self, value: HfSet) -> "ValueInfo":
        """Bitsets describing how ``value`` relates to the elements."""
        found = self._info.get(value)
        if found is not None:
            return found
        i = self.position.get(value)
        if i is not None:
            vi = ValueInfo(i, self.members_bits[i], self.containers_bits[i], 1 << i)
        else:
            # outside a transitive universe nothing contains value; members may lie inside
            bits = 0
            for m in value.members:
                j = self.position.get(m)
                if j is not None:
                    bits |= 1 << j
            vi = ValueInfo(None, bits, 0, 0)
        with self._lock:
            self._info[value] = vi
        return vi

    def positions(self, bits: int) -> list[int]:
        out = []
        i = 0
        while bits:
            if bits & 1:
                out.append(i)
            bits >>= 1
            i += 1
        return out

    def subset(self, bits: int) -> list[HfSet]:
        return [self.elements[i] for i in self.positions(bits)]

    def check_transitive(self) -> bool:
        return hfset.is_transitive(self.elements)


@dataclass(frozen=True, slots=True)
class ValueInfo:
    pos: int | None
    members_bits: int
    containers_bits: int
    eq_bits: int


@dataclass(frozen=True)
class ClassExtension:
    universe: Universe = field(compare=False, repr=False)
    bits: int

    def __post_init__(self):
        if self.bits < 0 or self.bits > self.universe.full:
            raise ValueError("bitset does not fit the universe")

    @property
    def label(self):
        return self.universe.label

    def __eq__(self, other):
        if not isinstance(other, ClassExtension):
            return NotImplemented
        return self.universe is other.universe and self.bits == other.bits

    def __hash__(self):
        return hash((id(self.universe), self.bits))

    def __contains__(self, x: HfSet):
        i = self.universe.position.get(x)
        return i is not None and bool(self.bits >> i & 1)

    def popcount(self) -> int:
        return bin(self.bits).count("1")

    def members(self) -> list[HfSet]:
        return self.universe.subset(self.bits)

    def as_list(self) -> list[bool]:
        return [bool(self.bits >> i & 1) for i in range(self.universe.size)]


# --- construction -----------------------------------------------------------

def v_stage(r: int, allow_large: bool = False) -> Universe:
    """V_r, the sets of rank below r (r = 5 needs ``allow_large``)."""
    if r < 1:
        raise UserError("V_0 is empty; stages start at 1")
    if r > 5 or (r == 5 and not allow_large):
        raise StageTooLarge(f"V_{r} is too large" + ("" if r > 5 else " without the override flag"))
    n = _STAGE_SIZES[r]
    return Universe([hfset.from_ackermann_index(k) for k in range(n)], f"v{r}")


def ackermann_segment(n: int) -> Universe:
    if n < 1:
        raise UserError("segments need N >= 1")
    if n > MAX_ELEMENTS:
        raise SegmentTooLarge(f"ack:{n} exceeds {MAX_ELEMENTS} elements")
    return Universe([hfset.from_ackermann_index(k) for k in range(n)], f"ack:{n}")


def closure_of(seeds, label: str | None = None) -> Universe:
    seeds = list(seeds)
    pool = {EMPTY}
    for s in seeds:
        pool.add(s)
        pool |= hfset.hereditary_members(s)
        if len(pool) > MAX_ELEMENTS:
            raise SegmentTooLarge(f"closure has more than {MAX_ELEMENTS} elements")
    if label is None:
        label = "closure:" + ",".join(hfset.format_hf(s) for s in sorted(set(seeds), key=hfset._sort_key))
    return Universe(pool, label)


def parse_universe(descriptor: str) -> Universe:
    """``v2`` ... ``v4``, ``v5!``, ``ack:N`` or ``closure:#a,#b,...``."""
    d = descriptor.strip()
    if d.startswith("ack:"):
        try:
            return ackermann_segment(int(d[4:]))
        except ValueError:
            raise UserError(f"bad segment size in {descriptor!r}") from None
    if d.startswith("closure:"):
        rest = d[len("closure:"):]
        seeds = []
        pos = 0
        while pos < len(rest):
            value, pos = hfset.read_hf(rest, pos)
            seeds.append(value)
            while pos < len(rest) and (rest[pos].isspace() or rest[pos] == ","):
                pos += 1
        return closure_of(seeds)
    if d.startswith("v"):
        body = d[1:]
        override = body.endswith("!")
        if override:
            body = body[:-1]
        if body.isdigit():
            return v_stage(int(body), allow_large=override)
    raise UserError(f"unknown universe descriptor {descriptor!r}")


# --- core evaluation --------------------------------------------------------

def _free_indices(node, depth=0, out=None):
    """de Bruijn indices free in ``node`` (relative to its own binding depth)."""
    if out is None:
        out = set()
    kind = node[0]
    if kind in ("mem", "eq"):
        for t in node[1:]:
            if isinstance(t, int) and t >= depth:
                out.add(t - depth)
    elif kind == "exists":
        _free_indices(node[1], depth + 1, out)
    else:
        for child in node[1:]:
            _free_indices(child, depth, out)
    return out


def compile_core(u: Universe, f: CoreFormula):
    """Return ``fn(env, p_info) -> bits`` giving the extension over X.

    ``env`` holds element positions for de Bruijn indices, innermost first.
    """
    full = u.full
    mb, cb = u.members_bits, u.containers_bits
    n = u.size

    def atom(kind, a, b):
        if kind == "mem":
            if a == "X":
                if b == "X":
                    return lambda env, p: 0
                if b == "P":
                    return lambda env, p: p.members_bits
                return lambda env, p: mb[env[b]]
            if b == "X":
                if a == "P":
                    return lambda env, p: p.containers_bits
                return lambda env, p: cb[env[a]]
            if a == "P" and b == "P":
                return lambda env, p: 0
            if a == "P":
                return lambda env, p: full if p.pos is not None and mb[env[b]] >> p.pos & 1 else 0
            if b == "P":
                return lambda env, p: full if p.members_bits >> env[a] & 1 else 0
            return lambda env, p: full if mb[env[b]] >> env[a] & 1 else 0
        if a == "X" and b == "X":
            return lambda env, p: full
        if a == "X" or b == "X":
            other = b if a == "X" else a
            if other == "P":
                return lambda env, p: p.eq_bits
            return lambda env, p: 1 << env[other]
        if a == "P" and b == "P":
            return lambda env, p: full
        if a == "P" or b == "P":
            other = b if a == "P" else a
            return lambda env, p: full if p.pos == env[other] else 0
        return lambda env, p: full if env[a] == env[b] else 0

    def comp(node):
        kind = node[0]
        if kind in ("mem", "eq"):
            return atom(kind, node[1], node[2])
        if kind == "not":
            g = comp(node[1])
            return lambda env, p: full ^ g(env, p)
        if kind == "and":
            g, h = comp(node[1]), comp(node[2])

            def conj(env, p):
                left = g(env, p)
                return left & h(env, p) if left else 0
            return conj
        body = comp(node[1])
        if 0 not in _free_indices(node[1]):
            return lambda env, p: body((0,) + env, p)

        def exists(env, p):
            acc = 0
            for e in range(n):
                acc |= body((e,) + env, p)
                if acc == full:
                    break
            return acc
        return exists

    return comp(f.tree())


def extension(u: Universe, f: CoreFormula, p: HfSet = EMPTY) -> ClassExtension:
    """The class {x in U : f(x, p)}."""
    key = (f.tokens, p)
    bits = u._ext_cache.get(key)
    if bits is None:
        bits = compile_core(u, f)((), u.info(p))
        with u._lock:
            u._ext_cache[key] = bits
    return ClassExtension(u, bits)


def _row(u: Universe, n: int) -> tuple[int, ...]:
    """Extensions of psi_n for every parameter position, built in order."""
    with u._lock:
        while len(u._rows) <= n:
            m = len(u._rows)
            f = enumerate_formula(m)
            fn = compile_core(u, f)
            if f.uses_param():
                row = tuple(fn((), u.info(e)) for e in u.elements)
            else:
                row = (fn((), u.info(EMPTY)),) * u.size
            u._rows.append(row)
            for bits in set(row):
                u._first_by_bits.setdefault(bits, m)
                u._first_by_pop.setdefault(bin(bits).count("1"), m)
        return u._rows[n]


@dataclass(frozen=True)
class SearchResult:
    index: int
    formula: CoreFormula
    params: tuple[HfSet, ...]


def _minimal_rank_params(u: Universe, positions: list[int]) -> tuple[HfSet, ...]:
    best = min(u.ranks[i] for i in positions)
    return tuple(u.elements[i] for i in positions if u.ranks[i] == best)


def first_equivalent_search(u: Universe, target, equiv, budget: int | None = None) -> SearchResult:
    """Least n such that psi_n with some parameter p in U defines a class
    related to ``target`` by ``equiv``; params are all such p of minimal rank.

    ``equiv`` needs a ``kind`` ("extensional", "equinumerous" or anything
    else) and, for other kinds, ``related(u, a_bits, b_bits)``. If it has a
    ``validate(u, target_bits, encountered)`` method, that runs after the
    scan.
    """
    if budget is None:
        budget = DEFAULT_BUDGET
    bits = target.bits if isinstance(target, ClassExtension) else int(target)
    kind = getattr(equiv, "kind", "extensional")
    equiv_key = getattr(equiv, "key", kind)
    cache_key = None if equiv_key is None else (equiv_key, bits)
    cached = None if cache_key is None else u._search_cache.get(cache_key)
    if cached is not None and cached.index < budget:
        return cached

    if kind == "extensional":
        test = bits.__eq__
        n = _scan_first(u, u._first_by_bits, bits, budget)
    elif kind == "equinumerous":
        pop = bin(bits).count("1")
        test = lambda b: bin(b).count("1") == pop
        n = _scan_first(u, u._first_by_pop, pop, budget)
    else:
        seen: dict[int, bool] = {}

        def test(b):
            r = seen.get(b)
            if r is None:
                r = seen[b] = bool(equiv.related(u, bits, b))
            return r
        n = None
        for m in range(budget):
            if any(test(b) for b in set(_row(u, m))):
                n = m
                break
        validate = getattr(equiv, "validate", None)
        if validate is not None:
            validate(u, bits, list(seen))
        if n is None:
            raise BudgetExceeded(budget)

    row = _row(u, n)
    working = [i for i, b in enumerate(row) if test(b)]
    result = SearchResult(n, enumerate_formula(n), _minimal_rank_params(u, working))
    if cache_key is not None:
        with u._lock:
            u._search_cache[cache_key] = result
    return result


def _scan_first(u, first_map, key, budget):
    n = first_map.get(key)
    if n is not None:
        if n >= budget:
            raise BudgetExceeded(budget)
        return n
    while len(u._rows) < budget:
        _row(u, len(u._rows))
        n = first_map.get(key)
        if n is not None:
            return n
    raise BudgetExceeded(budget)


# --- surface evaluation -----------------------------------------------------

class Evaluator:
    """Tarski evaluation of surface formulas over a universe.

    Results of quantified subformulas are memoized on the node's identity and
    the values of its free names, so formulas built with shared subtrees (for
    example literal definitions) are evaluated once per distinct assignment.
    Environment values are HfSets, or ClassExtensions standing for a
    predicate that may appear only on the right of ``in``.
    """

    def __init__(self, universe: Universe):
        self.u = universe
        self._memo: dict = {}
        self._fv: dict[int, tuple] = {}
        self._pin: list = []
        if sys.getrecursionlimit() < 20000:
            sys.setrecursionlimit(20000)

    def free(self, node) -> tuple:
        key = id(node)
        found = self._fv.get(key)
        if found is not None:
            return found
        if isinstance(node, ATOMS):
            names = self._term_free(node.left) | self._term_free(node.right)
        elif isinstance(node, Not):
            names = set(self.free(node.body))
        elif isinstance(node, BINARY):
            names = set(self.free(node.left)) | set(self.free(node.right))
        elif isinstance(node, QUANTIFIERS):
            names = set(self.free(node.body)) - {node.var}
        else:
            raise TypeError(f"not a formula: {node!r}")
        result = tuple(sorted(names))
        self._fv[key] = result
        self._pin.append(node)
        return result

    def _term_free(self, t) -> set:
        if isinstance(t, (Var, Param)):
            return {t.name}
        if isinstance(t, EpsTerm):
            return set(self.free(t.body)) - {t.var}
        return set()

    def term_value(self, t, env):
        if isinstance(t, (Var, Param)):
            try:
                return env[t.name]
            except KeyError:
                raise UnboundVariable(t.name) from None
        if isinstance(t, HfLiteral):
            return t.value
        raise NotPure(f"term {t!r} is not allowed in a pure formula")

    def holds(self, f, env: dict) -> bool:
        if isinstance(f, Mem):
            a = self.term_value(f.left, env)
            b = self.term_value(f.right, env)
            if isinstance(b, ClassExtension):
                return a in b
            if isinstance(a, ClassExtension):
                raise UserError("a class cannot be a member")
            return a in b
        if isinstance(f, Eq):
            a = self.term_value(f.left, env)
            b = self.term_value(f.right, env)
            if isinstance(a, ClassExtension) or isinstance(b, ClassExtension):
                raise UserError("classes can only appear on the right of 'in'")
            return a is b
        if isinstance(f, Not):
            return not self.holds(f.body, env)
        if isinstance(f, And):
            return self.holds(f.left, env) and self.holds(f.right, env)
        if isinstance(f, Or):
            return self.holds(f.left, env) or self.holds(f.right, env)
        if isinstance(f, Implies):
            return (not self.holds(f.left, env)) or self.holds(f.right, env)
        if isinstance(f, Iff):
            return self.holds(f.left, env) == self.holds(f.right, env)
        if isinstance(f, (Exists, ForAll)):
            names = self.free(f)
            try:
                key = (id(f), tuple(env[n] for n in names))
            except KeyError as exc:
                raise UnboundVariable(exc.args[0]) from None
            found = self._memo.get(key)
            if found is not None:
                return found
            result = self._quantify(f, env)
            self._memo[key] = result
            return result
        raise TypeError(f"not a formula: {f!r}")

    def _quantify(self, f, env):
        var = f.var
        had = var in env
        old = env.get(var)
        want = isinstance(f, Exists)
        try:
            for e in self.u.elements:
                env[var] = e
                if self.holds(f.body, env) == want:
                    return want
            return not want
        finally:
            if had:
                env[var] = old
            else:
                del env[var]


def evaluate(u: Universe, f, env: dict | None = None, evaluator: Evaluator | None = None) -> bool:
    """Truth of a pure formula in ``u`` under ``env`` (name -> HfSet)."""
    from .syntax.ast import is_pure

    if not is_pure(f):
        raise NotPure("evaluate needs a pure formula; use eliminate.eval_extended")
    ev = evaluator or Evaluator(u)
    return ev.holds(f, dict(env or {}))


def extension_of_formula(u: Universe, f, object_var: str = "x", env: dict | None = None,
                         evaluator: Evaluator | None = None) -> ClassExtension:
    """Pointwise extension of a surface formula over ``u``."""
    ev = evaluator or Evaluator(u)
    env = dict(env or {})
    bits = 0
    for i, e in enumerate(u.elements):
        env[object_var] = e
        if ev.holds(f, env):
            bits |= 1 << i
    return ClassExtension(u, bits)
