"""Independent oracles for the test suite.

HF sets are modelled as nested frozensets and formulas are evaluated by
plain recursion, with no memoization, bitsets or interning.
"""

from itertools import combinations

from hf_frege.syntax import ast


def fs_from_index(n):
    return frozenset(fs_from_index(i) for i in range(n.bit_length()) if n >> i & 1)


def fs_index(s):
    return sum(2 ** fs_index(m) for m in s)


def to_fs(x):
    return frozenset(to_fs(m) for m in x.members)


def fs_rank(s):
    return max((fs_rank(m) + 1 for m in s), default=0)


def stage(r):
    """V_r as a set of frozensets."""
    level = set()
    for _ in range(r):
        level = {frozenset(c) for k in range(len(level) + 1) for c in combinations(level, k)}
    return level


def naive_holds(f, domain, env):
    """Truth of a surface formula; ``domain`` and ``env`` values are frozensets."""
    def term(t):
        if isinstance(t, (ast.Var, ast.Param)):
            return env[t.name]
        if isinstance(t, ast.HfLiteral):
            return to_fs(t.value)
        raise TypeError(t)

    if isinstance(f, ast.Mem):
        return term(f.left) in term(f.right)
    if isinstance(f, ast.Eq):
        return term(f.left) == term(f.right)
    if isinstance(f, ast.Not):
        return not naive_holds(f.body, domain, env)
    if isinstance(f, ast.And):
        return naive_holds(f.left, domain, env) and naive_holds(f.right, domain, env)
    if isinstance(f, ast.Or):
        return naive_holds(f.left, domain, env) or naive_holds(f.right, domain, env)
    if isinstance(f, ast.Implies):
        return not naive_holds(f.left, domain, env) or naive_holds(f.right, domain, env)
    if isinstance(f, ast.Iff):
        return naive_holds(f.left, domain, env) == naive_holds(f.right, domain, env)
    if isinstance(f, (ast.Exists, ast.ForAll)):
        results = (naive_holds(f.body, domain, {**env, f.var: d}) for d in domain)
        return any(results) if isinstance(f, ast.Exists) else all(results)
    raise TypeError(f)


def naive_transitive_closure(s):
    out = set()
    frontier = set(s)
    while frontier:
        m = frontier.pop()
        if m not in out:
            out.add(m)
            frontier |= m
    return frozenset(out)
