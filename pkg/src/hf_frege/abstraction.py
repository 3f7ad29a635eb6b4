"""Extension objects, number objects and general abstraction objects.

Every class-level operator here works the same way: find the least
enumerated formula that, with some parameter from the universe, defines a
class related to the given one, and pair its code with the set of all
minimal-rank parameters that do so.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable

from . import hfset
from .errors import (
    CardinalTooLarge, CrossUniverse, ElementNotInUniverse, InvariantViolation, NotAPair,
    NotEquivalence, NotPure, UnboundVariable, UserError, DecodeError,
)
from .hfset import EMPTY, HfSet
from .model import (
    ClassExtension, Evaluator, Universe, extension, extension_of_formula,
    first_equivalent_search, _row,
)
from .syntax import ast
from .syntax.coding import code_formula, decode_formula
from .syntax.core import CoreFormula, core_text, normalize
from .syntax.enumeration import index_of
from .syntax.parser import parse, to_text

TRANSITIVITY_CAP = 64


# --- equivalences -----------------------------------------------------------

class ClassEquivalence:
    kind = "custom"

    @property
    def key(self):
        # no stable identity: search results are not cached
        return None

    @property
    def descriptor(self) -> str:
        return self.kind

    def related(self, u: Universe, a: int, b: int) -> bool:
        raise NotImplementedError


class Extensional(ClassEquivalence):
    kind = "extensional"
    key = "extensional"

    def related(self, u, a, b):
        return a == b


class Equinumerous(ClassEquivalence):
    """Finite classes are equinumerous iff they have the same size."""

    kind = "equinumerous"
    key = "equinumerous"

    def related(self, u, a, b):
        return bin(a).count("1") == bin(b).count("1")


class _Validated(ClassEquivalence):
    """Checks reflexivity and symmetry on every pair it meets during a
    search, and transitivity over the first 64 distinct extensions met."""

    def __init__(self):
        self._cache: dict[tuple, bool] = {}

    def _decide(self, u, a, b) -> bool:
        raise NotImplementedError

    def relation(self, u, a, b) -> bool:
        key = (id(u), a, b)
        r = self._cache.get(key)
        if r is None:
            r = self._cache[key] = bool(self._decide(u, a, b))
        return r

    def related(self, u, a, b):
        r = self.relation(u, a, b)
        if self.relation(u, b, a) != r:
            raise NotEquivalence(f"{self.descriptor} is not symmetric", (a, b))
        return r

    def validate(self, u, target, encountered):
        exts = [target] + [b for b in encountered if b != target]
        exts = exts[:TRANSITIVITY_CAP]
        for a in exts:
            if not self.relation(u, a, a):
                raise NotEquivalence(f"{self.descriptor} is not reflexive", (a,))
        rel = [[self.relation(u, a, b) for b in exts] for a in exts]
        k = len(exts)
        for i in range(k):
            for j in range(k):
                if rel[i][j] != rel[j][i]:
                    raise NotEquivalence(f"{self.descriptor} is not symmetric", (exts[i], exts[j]))
                if not rel[i][j]:
                    continue
                for m in range(k):
                    if rel[j][m] and not rel[i][m]:
                        raise NotEquivalence(
                            f"{self.descriptor} is not transitive", (exts[i], exts[j], exts[m])
                        )


class FirstOrderFormula(_Validated):
    """An equivalence given by a formula in which two class names (``F`` and
    ``G`` by default) occur only on the right of ``in``."""

    kind = "first-order"

    def __init__(self, formula, left: str = "F", right: str = "G", env: dict | None = None):
        super().__init__()
        self.formula = parse(formula, extended=False) if isinstance(formula, str) else formula
        self.left, self.right = left, right
        self.env = dict(env or {})

    @property
    def key(self):
        env = tuple(sorted((k, v) for k, v in self.env.items() if isinstance(v, HfSet)))
        if len(env) != len(self.env):
            return None
        return (self.kind, to_text(self.formula), self.left, self.right, env)

    @property
    def descriptor(self):
        return f"first-order[{to_text(self.formula)}]"

    def _decide(self, u, a, b):
        ev = Evaluator(u)
        env = dict(self.env)
        env[self.left] = ClassExtension(u, a)
        env[self.right] = ClassExtension(u, b)
        return ev.holds(self.formula, env)


class ExternalComparator(_Validated):
    """Black-box decision procedure ``fn(F, G) -> bool`` on ClassExtensions."""

    kind = "external"

    def __init__(self, fn: Callable[[ClassExtension, ClassExtension], bool], name: str | None = None):
        super().__init__()
        self.fn = fn
        self.name = name or getattr(fn, "__name__", "comparator")

    @property
    def key(self):
        return None

    @property
    def descriptor(self):
        return f"external[{self.name}]"

    def _decide(self, u, a, b):
        return self.fn(ClassExtension(u, a), ClassExtension(u, b))


# --- abstraction objects ----------------------------------------------------

@dataclass(frozen=True, eq=False)
class AbstractionObject:
    index: int
    formula: CoreFormula
    params: tuple[HfSet, ...]
    kind: str
    universe: str

    def __post_init__(self):
        if not self.params:
            raise InvariantViolation("abstraction objects need a nonempty parameter set")
        if len({p.rank for p in self.params}) != 1:
            raise InvariantViolation("parameters of an abstraction object must share one rank")

    @property
    def as_hfset(self) -> HfSet:
        return hfset.kuratowski_pair(code_formula(self.formula), hfset.from_members(self.params))

    def _key(self):
        return (self.kind, self.index, self.params)

    def __eq__(self, other):
        if not isinstance(other, AbstractionObject):
            return NotImplemented
        if other.universe != self.universe:
            raise CrossUniverse(f"cannot compare objects from {self.universe} and {other.universe}")
        return self._key() == other._key()

    def __hash__(self):
        return hash((self.universe,) + self._key())

    def formula_text(self) -> str:
        return core_text(self.formula)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "universe": self.universe,
            "index": self.index,
            "formula": self.formula_text(),
            "params": [hfset.format_hf(p) for p in self.params],
            "hf": hfset.format_hf(self.as_hfset),
        }


def _package(u: Universe, result, kind: str) -> AbstractionObject:
    return AbstractionObject(result.index, result.formula, result.params, kind, u.label)


# --- presentations ------------------------------------------------------------

def presentation_extension(u: Universe, f, env: dict | None = None, object_var: str = "x",
                           evaluator: Evaluator | None = None) -> ClassExtension:
    """The class defined over ``u`` by formula ``f`` with parameters ``env``.

    A pure formula with at most one parameter goes through its core normal
    form; anything else (several parameters, HF literals) is evaluated
    pointwise.
    """
    if isinstance(f, str):
        f = parse(f)
    env = dict(env or {})
    names = ast.free_names(f) - {object_var}
    missing = names - set(env)
    if missing:
        raise UnboundVariable(sorted(missing)[0])
    if ast.contains_eps(f):
        raise NotPure("eps terms need eliminate.eval_extended semantics")
    if ast.is_pure(f) and len(names) <= 1:
        param = next(iter(names), None)
        core = normalize(f, object_var, param)
        return extension(u, core, env[param] if param else EMPTY)
    return extension_of_formula(u, f, object_var, env, evaluator)


def epsilon(u: Universe, ext: ClassExtension | int, budget: int | None = None) -> AbstractionObject:
    """The extension object of a class given as a bitset over ``u``."""
    return _package(u, first_equivalent_search(u, ext, Extensional(), budget), "extension")


def extension_of(u: Universe, f, env: dict | None = None, *, object_var: str = "x",
                 budget: int | None = None) -> AbstractionObject:
    """epsilon F for the class {x | f(x, env)} over ``u``."""
    return epsilon(u, presentation_extension(u, f, env, object_var), budget)


def blv_check(u: Universe, presentations, budget: int | None = None) -> dict:
    """Check eps_i == eps_j <=> ext_i == ext_j over all pairs.

    ``presentations`` holds (formula, env) pairs; formulas may be core
    formulas (X is the object, P the parameter bound to env["p"]).
    """
    exts, objs = [], []
    for f, env in presentations:
        if isinstance(f, CoreFormula):
            ext = extension(u, f, (env or {}).get("p", EMPTY))
        else:
            ext = presentation_extension(u, f, env)
        exts.append(ext.bits)
        objs.append(epsilon(u, ext, budget))
    violations = []
    equal_pairs = 0
    total = 0
    for i, j in itertools.combinations(range(len(objs)), 2):
        total += 1
        same_obj = objs[i] == objs[j]
        same_ext = exts[i] == exts[j]
        equal_pairs += same_ext
        if same_obj != same_ext:
            violations.append((i, j))
    return {
        "universe": u.label,
        "presentations": len(objs),
        "pairs": total,
        "equal_extension_pairs": equal_pairs,
        "distinct_objects": len({o._key() for o in objs}),
        "violations": violations,
    }


def is_extension(u: Universe, candidate: HfSet, budget: int | None = None):
    """(formula, params, extension) if ``candidate`` is eps F for some class
    F over ``u``, else None."""
    try:
        code, uset = hfset.unpair(candidate)
        formula = decode_formula(code)
    except (NotAPair, DecodeError):
        return None
    params = uset.members
    if not params or any(p not in u for p in params):
        return None
    if len({p.rank for p in params}) != 1:
        return None
    ext = extension(u, formula, params[0])
    if any(extension(u, formula, p).bits != ext.bits for p in params[1:]):
        return None
    n = index_of(formula)
    result = first_equivalent_search(u, ext, Extensional(), budget=max(n + 1, budget or 0))
    if result.index != n or result.params != tuple(params):
        return None
    return formula, params, ext


# --- set level: Scott's trick -------------------------------------------------

def _equivalence_matrix(u: Universe, equiv, env, left, right):
    n = u.size
    if callable(equiv):
        rel = [[bool(equiv(a, b)) for b in u.elements] for a in u.elements]
    else:
        f = parse(equiv, extended=False) if isinstance(equiv, str) else equiv
        extra = ast.free_names(f) - {left, right} - set(env or {})
        if extra:
            raise UnboundVariable(sorted(extra)[0])
        ev = Evaluator(u)
        base = dict(env or {})
        rel = []
        for a in u.elements:
            base[left] = a
            row = []
            for b in u.elements:
                base[right] = b
                row.append(ev.holds(f, base))
            rel.append(row)
    for i in range(n):
        if not rel[i][i]:
            raise NotEquivalence("relation is not reflexive", (u.elements[i],))
        for j in range(n):
            if rel[i][j] != rel[j][i]:
                raise NotEquivalence("relation is not symmetric", (u.elements[i], u.elements[j]))
    for i in range(n):
        for j in range(n):
            if rel[i][j]:
                for k in range(n):
                    if rel[j][k] and not rel[i][k]:
                        raise NotEquivalence(
                            "relation is not transitive", (u.elements[i], u.elements[j], u.elements[k])
                        )
    return rel


def scott_abstraction(u: Universe, equiv, x: HfSet, env: dict | None = None,
                      left: str = "a", right: str = "b") -> HfSet:
    """The set of rank-minimal members of x's equivalence class within ``u``.

    ``equiv`` is a formula (text or tree) in ``left``/``right`` or a
    callable ``(a, b) -> bool`` on HfSets.
    """
    if x not in u:
        raise ElementNotInUniverse(f"{hfset.format_hf(x)} is not an element of {u.label}")
    return scott_abstractions(u, equiv, env, left, right)[x]


def scott_abstractions(u: Universe, equiv, env: dict | None = None,
                       left: str = "a", right: str = "b") -> dict[HfSet, HfSet]:
    """alpha x for every x in ``u`` (one validation pass for all of them)."""
    rel = _equivalence_matrix(u, equiv, env, left, right)
    out = {}
    for i, x in enumerate(u.elements):
        cls = [j for j in range(u.size) if rel[i][j]]
        best = min(u.ranks[j] for j in cls)
        out[x] = hfset.from_members(u.elements[j] for j in cls if u.ranks[j] == best)
    return out


MAX_SCOTT_CARDINALITY = 16


def stage_size(r: int) -> int:
    """|V_r|."""
    size = 0
    for _ in range(r):
        size = 2**size
    return size


def minimal_stage(k: int) -> int:
    """Least rank of a k-element set: the least r with |V_r| >= k."""
    r = 0
    while stage_size(r) < k:
        r += 1
    return r


def scott_cardinal(x: HfSet) -> HfSet:
    """The set of all minimal-rank sets equinumerous with x."""
    k = hfset.cardinality(x)
    if k == 0:
        return hfset.singleton(EMPTY)
    r = minimal_stage(k)
    if k > MAX_SCOTT_CARDINALITY:
        raise CardinalTooLarge(k, r)
    # every k-subset of V_r has rank r because |V_(r-1)| < k
    stage = [hfset.from_ackermann_index(i) for i in range(stage_size(r))]
    return hfset.from_members(hfset.from_members(c) for c in itertools.combinations(stage, k))


def scott_cardinal_size(k: int) -> int:
    """Number of members of scott_cardinal of a k-element set."""
    if k == 0:
        return 1
    return math.comb(stage_size(minimal_stage(k)), k)


# --- class level --------------------------------------------------------------

def class_number(u: Universe, f, env: dict | None = None, *, object_var: str = "x",
                 budget: int | None = None) -> AbstractionObject:
    """#F: Cantor-Hume number object of a class over ``u``."""
    ext = f if isinstance(f, ClassExtension) else presentation_extension(u, f, env, object_var)
    return _package(u, first_equivalent_search(u, ext, Equinumerous(), budget), "number")


def class_abstraction(u: Universe, equiv: ClassEquivalence, f, env: dict | None = None, *,
                      object_var: str = "x", budget: int | None = None) -> AbstractionObject:
    """alpha F for an arbitrary class equivalence."""
    ext = f if isinstance(f, ClassExtension) else presentation_extension(u, f, env, object_var)
    result = first_equivalent_search(u, ext, equiv, budget)
    if isinstance(equiv, Extensional):
        kind = "extension"
    elif isinstance(equiv, Equinumerous):
        kind = "number"
    else:
        kind = f"abstraction:{equiv.descriptor}"
    return _package(u, result, kind)


def subclass_presentations(u: Universe) -> dict[int, str]:
    """A formula presentation for every subclass of a small universe.

    Each class is written as a disjunction of literal definitions of its
    members, so it needs no parameters.
    """
    from .eliminate import literal_definition

    if u.size > 8:
        raise UserError("presentations for every subclass are only built for universes of size <= 8")
    out = {}
    for bits in range(u.full + 1):
        parts = [literal_definition(e, "x") for e in u.subset(bits)]
        f = ast.big_or(parts) if parts else ast.Not(ast.Eq(ast.Var("x"), ast.Var("x")))
        out[bits] = to_text(f)
    return out
