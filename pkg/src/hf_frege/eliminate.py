"""Eps terms and their elimination.

``eval_extended`` gives eps terms their meaning: ``eps[x | phi]`` denotes
the extension object of the class phi defines over the universe. The two
translators turn an extended formula into a pure one that is true in an
enlarged universe U' exactly when the original is true in U:

* literal mode replaces each eps term by a parameter-free definition of its
  denotation;
* uniform mode replaces it by the identity criterion for extension objects,
  a disjunction over the formulas that precede the body in the enumeration,
  which works for every parameter value at once.

Both relativize the original quantifiers to U with a rank guard, so U must
be a V-stage.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import hfset
from .abstraction import epsilon
from .errors import IndexTooLarge, LiteralTooLarge, NotPure, NotVStage, UnboundVariable, UserError
from .hfset import HfSet
from .model import ClassExtension, Evaluator, Universe, closure_of, evaluate
from .syntax import ast
from .syntax.ast import (
    And, Eq, EpsTerm, Exists, ForAll, HfLiteral, Iff, Implies, Mem, Not, Or, Param, Var,
)
from .syntax.coding import code_formula
from .syntax.core import normalize, to_surface
from .syntax.enumeration import enumerate_formula, index_of
from .syntax.parser import parse, term_text, to_text

DEFAULT_NODE_BUDGET = 10**6
MAX_UNIFORM_INDEX = 32


# --- extended semantics -----------------------------------------------------

class ExtendedEvaluator(Evaluator):
    """Evaluator that also gives eps terms and HF literals their values.

    An eps term is evaluated per assignment of its free names, innermost
    first: outer variables act as parameters of the body.
    """

    def __init__(self, universe: Universe, budget: int | None = None):
        super().__init__(universe)
        self.budget = budget
        self._eps_memo: dict = {}

    def term_value(self, t, env):
        if isinstance(t, HfLiteral):
            return t.value
        if isinstance(t, EpsTerm):
            names = tuple(sorted(self._term_free(t)))
            self._pin.append(t)
            try:
                values = tuple(env[n] for n in names)
            except KeyError as exc:
                raise UnboundVariable(exc.args[0]) from None
            key = (id(t), values)
            found = self._eps_memo.get(key)
            if found is None:
                found = self.denote(t, dict(zip(names, values)))
                self._eps_memo[key] = found
            return found
        return super().term_value(t, env)

    def body_extension(self, t: EpsTerm, env: dict) -> ClassExtension:
        local = dict(env)
        bits = 0
        for i, x in enumerate(self.u.elements):
            local[t.var] = x
            if self.holds(t.body, local):
                bits |= 1 << i
        return ClassExtension(self.u, bits)

    def denote(self, t: EpsTerm, env: dict) -> HfSet:
        return epsilon(self.u, self.body_extension(t, env), self.budget).as_hfset


def eval_extended(u: Universe, e, env: dict | None = None, budget: int | None = None,
                  evaluator: ExtendedEvaluator | None = None) -> bool:
    if isinstance(e, str):
        e = parse(e)
    ev = evaluator or ExtendedEvaluator(u, budget)
    return ev.holds(e, dict(env or {}))


# --- macros -------------------------------------------------------------------

def literal_size(d: HfSet, _memo=None) -> int:
    """Node count of ``literal_definition(d)`` without building it."""
    memo = {} if _memo is None else _memo
    found = memo.get(d)
    if found is not None:
        return found
    if not d.members:
        size = 5  # all t not t in v
    else:
        size = 5 + sum(literal_size(m, memo) for m in d.members) + len(d.members) - 1
    memo[d] = size
    return size


def literal_definition(d: HfSet, var: str = "v", prefix: str = "t",
                       node_budget: int = DEFAULT_NODE_BUDGET):
    """A pure formula in ``var`` true exactly of ``d`` in any transitive
    universe containing ``d``.

    The bound variable of the clause for a set of rank k is ``prefix`` with
    suffix k (no suffix for rank 0), so nested clauses never capture.
    Identical subsets share one subtree.
    """
    size = literal_size(d)
    if size > node_budget:
        raise LiteralTooLarge(f"literal definition needs {size} nodes > budget {node_budget}")
    memo: dict = {}

    def name(s):
        return prefix if s.rank == 0 else f"{prefix}{s.rank}"

    def build(s, v):
        key = (s, v)
        found = memo.get(key)
        if found is not None:
            return found
        t = name(s)
        inside = Mem(Var(t), Var(v))
        if not s.members:
            f = ForAll(t, Not(inside))
        else:
            f = ForAll(t, Iff(inside, ast.big_or([build(m, t) for m in s.members])))
        memo[key] = f
        return f

    return build(d, var)


def rank_below(var: str, r: int, prefix: str = "_g", _memo=None):
    """Pure formula: ``var`` has rank < r (correct over transitive universes)."""
    memo = {} if _memo is None else _memo
    key = (var, r)
    if key in memo:
        return memo[key]
    if r == 0:
        f = Not(Eq(Var(var), Var(var)))
    else:
        t = f"{prefix}{r}"
        f = ForAll(t, Implies(Mem(Var(t), Var(var)), rank_below(t, r - 1, prefix, memo)))
    memo[key] = f
    return f


def rank_at_most(a: str, b: str, r: int, guards):
    """rank(a) <= rank(b) for a, b of rank < r: every bound b meets, a meets."""
    parts = [Implies(guards(b, k), guards(a, k)) for k in range(1, r)]
    return ast.big_and(parts) or Eq(Var(a), Var(a))


def kuratowski_pair_formula(w: str, a: str, b: str, prefix: str):
    """w = {{a}, {a, b}} over a transitive universe."""
    m, t = f"{prefix}m", f"{prefix}t"
    single = ForAll(t, Iff(Mem(Var(t), Var(m)), Eq(Var(t), Var(a))))
    double = ForAll(t, Iff(Mem(Var(t), Var(m)), Or(Eq(Var(t), Var(a)), Eq(Var(t), Var(b)))))
    return ForAll(m, Iff(Mem(Var(m), Var(w)), Or(single, double)))


class _Relativizer:
    """Guards every quantifier of a formula with ``rank < r``."""

    def __init__(self, r: int, prefix: str = "_g"):
        self.r = r
        self.prefix = prefix
        self._memo: dict = {}
        self.count = 0

    def guard(self, var: str, k: int | None = None):
        return rank_below(var, self.r if k is None else k, self.prefix, self._memo)

    def __call__(self, f, atom_hook=None):
        if isinstance(f, (Mem, Eq)):
            return atom_hook(f) if atom_hook else f
        if isinstance(f, Not):
            return Not(self(f.body, atom_hook))
        if isinstance(f, (And, Or, Implies, Iff)):
            return type(f)(self(f.left, atom_hook), self(f.right, atom_hook))
        if isinstance(f, Exists):
            self.count += 1
            return Exists(f.var, And(self.guard(f.var), self(f.body, atom_hook)))
        if isinstance(f, ForAll):
            self.count += 1
            return ForAll(f.var, Implies(self.guard(f.var), self(f.body, atom_hook)))
        raise TypeError(f"not a formula: {f!r}")


# --- translation ----------------------------------------------------------------

@dataclass
class TranslationResult:
    formula: object
    universe: Universe
    guard: dict
    denotations: list = field(default_factory=list)

    @property
    def text(self) -> str:
        return to_text(self.formula)

    def audit(self) -> dict:
        return {
            "universe": self.universe.label,
            "universe_size": self.universe.size,
            "guard": self.guard,
            "denotations": [{"term": t, "hf": None if d is None else hfset.format_hf(d), **extra} for t, d, extra in self.denotations],
            "nodes": ast.node_count(self.formula),
        }


def _require_stage(u: Universe) -> int:
    if not u.is_v_stage:
        raise NotVStage(f"translation needs a V-stage universe, got {u.label}")
    return u.stage


def _bound_names(f) -> set:
    out = set()
    stack = [f]
    while stack:
        n = stack.pop()
        if isinstance(n, (ForAll, Exists)):
            out.add(n.var)
            stack.append(n.body)
        elif isinstance(n, Not):
            stack.append(n.body)
        elif isinstance(n, (And, Or, Implies, Iff)):
            stack.extend((n.left, n.right))
    return out


def _replace_terms(atom, replacements: dict):
    def sub(t):
        return Var(replacements[id(t)]) if id(t) in replacements else t
    return type(atom)(sub(atom.left), sub(atom.right))


def translate_literal(u: Universe, e, env: dict | None = None, budget: int | None = None,
                      node_budget: int = DEFAULT_NODE_BUDGET) -> TranslationResult:
    """Pure equivalent of ``e`` whose eps terms are replaced by literal
    definitions of their denotations under ``env``."""
    r = _require_stage(u)
    if isinstance(e, str):
        e = parse(e)
    env = dict(env or {})
    quantified = _bound_names(e)
    ev = ExtendedEvaluator(u, budget)
    denotations = []
    rel = _Relativizer(r)
    counter = [0]
    total = [0]

    def hook(atom):
        replacements = {}
        defs = []
        for t in (atom.left, atom.right):
            if not isinstance(t, (EpsTerm, HfLiteral)):
                continue
            if isinstance(t, EpsTerm):
                deps = ev._term_free(t) & quantified
                if deps:
                    raise UserError(
                        f"literal mode cannot translate eps terms that depend on quantified "
                        f"variables ({', '.join(sorted(deps))}); use uniform mode"
                    )
            d = ev.term_value(t, env)
            y = f"_y{counter[0]}"
            counter[0] += 1
            total[0] += literal_size(d)
            if total[0] > node_budget:
                raise LiteralTooLarge(f"literal definitions need more than {node_budget} nodes")
            replacements[id(t)] = y
            defs.append((y, literal_definition(d, y, prefix=f"_t{y[2:]}_", node_budget=node_budget)))
            denotations.append((term_text(t), d, {}))
        if not defs:
            return atom
        body = _replace_terms(atom, replacements)
        for y, lam in reversed(defs):
            body = Exists(y, And(lam, body))
        return body

    out = rel(e, hook)
    extended = closure_of(list(u.elements) + [d for _, d, _ in denotations],
                          label=f"{u.label}+{len(denotations)}")
    guard = {"base": u.label, "stage": r, "relativized_quantifiers": rel.count, "mode": "literal"}
    return TranslationResult(out, extended, guard, denotations)


def _assignments(u: Universe, names):
    names = list(names)
    if not names:
        yield {}
        return
    first, rest = names[0], names[1:]
    for x in u.elements:
        for tail in _assignments(u, rest):
            yield {first: x, **tail}


def translate_uniform(u: Universe, e, budget: int | None = None,
                      max_index: int = MAX_UNIFORM_INDEX,
                      node_budget: int = DEFAULT_NODE_BUDGET,
                      env: dict | None = None) -> TranslationResult:
    """Parameter-uniform pure equivalent of ``e``.

    Each eps term with a pure body phi(x, z) (at most one name besides its
    bound variable) becomes the criterion Theta(w, z): some psi_i with i <= n
    is the least formula that, with a parameter of rank < r, defines the same
    class as phi(., z), and w is the pair of its code with the set of all
    minimal-rank such parameters. n is the body's own enumeration index, so
    the disjunction is finite.

    U' contains the denotations for every assignment of the bodies' free
    names from U (plus ``env`` if given), which is where the criterion is
    guaranteed to find its witness.
    """
    r = _require_stage(u)
    if isinstance(e, str):
        e = parse(e)
    ev = ExtendedEvaluator(u, budget)
    rel = _Relativizer(r)
    denotations = []
    seeds: list[HfSet] = []
    counter = [0]
    total = [0]

    def theta(t: EpsTerm, w: str, k: int):
        if not ast.is_pure(t.body):
            raise NotPure("uniform mode needs eps bodies without nested eps terms or literals")
        names = sorted(ast.free_names(t.body) - {t.var})
        if len(names) > 1:
            raise UserError("uniform mode supports eps bodies with at most one parameter")
        z = names[0] if names else None
        n = index_of(normalize(t.body, t.var, z))
        if n > max_index:
            raise IndexTooLarge(f"eps body has enumeration index {n} > {max_index}")
        for a in _assignments(u, names):
            seeds.append(ev.term_value(t, a))
        if env and z in env:
            seeds.append(ev.term_value(t, {z: env[z]}))
        denotations.append((term_text(t), None, {"index": n, "disjuncts": n + 1}))

        pre = f"_{k}"
        q, s, c, uu, xx = f"{pre}q", f"{pre}s", f"{pre}c", f"{pre}u", f"{pre}x"
        mm = f"{pre}m"
        guard = rel.guard
        phi = rel(_rename_free(t.body, t.var, xx))

        works_memo = {}

        def works(i, p):
            # shared nodes let the evaluator memoize across disjuncts
            if (i, p) not in works_memo:
                psi = rel(to_surface(enumerate_formula(i), xx, p, prefix=f"{pre}v{i}_", param_is_var=True))
                works_memo[i, p] = ForAll(xx, Implies(guard(xx), Iff(phi, psi)))
            return works_memo[i, p]

        def minimal(i, p):
            return And(And(guard(p), works(i, p)),
                       ForAll(s, Implies(And(guard(s), works(i, s)),
                                         rank_at_most(p, s, r, lambda v, kk: guard(v, kk)))))

        disjuncts = []
        earlier = []
        for i in range(n + 1):
            code = code_formula(enumerate_formula(i))
            total[0] += literal_size(code)
            if total[0] > node_budget:
                raise LiteralTooLarge(f"criterion needs more than {node_budget} nodes")
            # closed conjuncts first; uu is reached through a member of w,
            # which the pair condition implies, so only a few uu are tried
            second = ast.big_and([
                Mem(Var(uu), Var(mm)),
                kuratowski_pair_formula(w, c, uu, f"{pre}p"),
                Exists(q, Mem(Var(q), Var(uu))),
                ForAll(q, Iff(Mem(Var(q), Var(uu)), minimal(i, q))),
            ])
            located = Exists(c, And(
                literal_definition(code, c, prefix=f"{pre}k{i}_", node_budget=node_budget),
                Exists(mm, And(Mem(Var(mm), Var(w)), Exists(uu, second))),
            ))
            disjuncts.append(ast.big_and([*earlier, located]))
            earlier.append(Not(Exists(q, And(guard(q), works(i, q)))))
        return ast.big_or(disjuncts)

    def hook(atom):
        replacements = {}
        defs = []
        for t in (atom.left, atom.right):
            if isinstance(t, HfLiteral):
                w = f"_w{counter[0]}"
                counter[0] += 1
                seeds.append(t.value)
                replacements[id(t)] = w
                defs.append((w, literal_definition(t.value, w, prefix=f"_l{w[2:]}_", node_budget=node_budget)))
                denotations.append((term_text(t), t.value, {}))
            elif isinstance(t, EpsTerm):
                k = counter[0]
                w = f"_w{k}"
                counter[0] += 1
                replacements[id(t)] = w
                defs.append((w, theta(t, w, k)))
        if not defs:
            return atom
        body = _replace_terms(atom, replacements)
        for w, crit in reversed(defs):
            body = Exists(w, And(crit, body))
        return body

    out = rel(e, hook)
    size = ast.node_count(out)
    if size > node_budget:
        raise LiteralTooLarge(f"translation has {size} nodes > budget {node_budget}")
    extended = closure_of(list(u.elements) + seeds, label=f"{u.label}+uniform{len(seeds)}")
    guard = {"base": u.label, "stage": r, "relativized_quantifiers": rel.count, "mode": "uniform"}
    return TranslationResult(out, extended, guard, denotations)


def _rename_free(f, old: str, new: str):
    """Rename free occurrences of variable ``old`` to ``new``."""
    def term(t, bound):
        if isinstance(t, Var) and t.name == old and old not in bound:
            return Var(new)
        return t

    def go(n, bound):
        if isinstance(n, (Mem, Eq)):
            return type(n)(term(n.left, bound), term(n.right, bound))
        if isinstance(n, Not):
            return Not(go(n.body, bound))
        if isinstance(n, (And, Or, Implies, Iff)):
            return type(n)(go(n.left, bound), go(n.right, bound))
        if isinstance(n, (ForAll, Exists)):
            if n.var == new:
                raise UserError(f"variable {new!r} would be captured")
            return type(n)(n.var, go(n.body, bound | {n.var}))
        raise TypeError(f"not a formula: {n!r}")

    return go(f, frozenset())


def check_translation(result: TranslationResult, u: Universe, e, env: dict | None = None,
                      budget: int | None = None, evaluators=None) -> tuple[bool, bool]:
    """(value of the translation in U', value of ``e`` in U).

    ``evaluators`` is an optional (pure, extended) pair reused across calls
    on the same translation, so memoized subformulas carry over.
    """
    if isinstance(e, str):
        e = parse(e)
    pure_ev, ext_ev = evaluators or (None, None)
    lhs = evaluate(result.universe, result.formula, env, pure_ev)
    rhs = eval_extended(u, e, env, budget, ext_ev)
    return lhs, rhs
