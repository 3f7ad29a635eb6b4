"""The acceptance battery: nine checks, each with a runtime limit."""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass

from . import abstraction, corpus, diagonal, eliminate, hfset, model, reference
from .errors import InvariantViolation
from .syntax import ast
from .syntax.coding import code_formula, decode_formula
from .hfset import EMPTY
from .syntax.core import normalize, to_surface
from .syntax.enumeration import enumerate_formula, index_of, prefix
from .syntax.parser import parse, to_text


@dataclass
class CaseResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float
    limit: float

    @property
    def ok(self) -> bool:
        return self.passed and self.seconds <= self.limit

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        timing = f"{self.seconds:.1f}s/{self.limit:.0f}s"
        return f"[{status}] {self.number}. {self.name} ({timing}): {self.detail}"

    def to_json(self) -> dict:
        return {"criterion": self.number, "name": self.name, "passed": self.ok,
                "detail": self.detail, "seconds": round(self.seconds, 3), "limit": self.limit}


def blv(seed: int):
    u = model.v_stage(3)
    report = abstraction.blv_check(u, corpus.blv_presentations(u, 30))
    ok = report["pairs"] == 7140 and not report["violations"]
    return ok, (f"{report['pairs']} pairs, {report['equal_extension_pairs']} with equal extensions, "
                f"{len(report['violations'])} violations")


def epsilon_oracle(seed: int):
    """One presentation of each of the 16 classes of V_3, then 9 random ones."""
    u = model.v_stage(3)
    rng = random.Random(seed)
    cores = [normalize(text, "x", None) for text in abstraction.subclass_presentations(u).values()]
    presentations = [(f, EMPTY) for f in cores]
    while len(presentations) < 25:
        presentations.append((enumerate_formula(rng.randrange(3000)), rng.choice(u.elements)))
    mismatches = 0
    deepest = 0
    for f, p in presentations:
        obj = abstraction.epsilon(u, model.extension(u, f, p))
        target = reference.extension(f.tokens, p, u.elements)
        n, tokens, params = reference.brute_epsilon(u.elements, target)
        deepest = max(deepest, n)
        if (obj.index, obj.formula.tokens, frozenset(obj.params)) != (n, tokens, params):
            mismatches += 1
    return mismatches == 0, f"25 presentations, {mismatches} mismatches, largest index {deepest}"


def scott_cardinals(seed: int):
    elems = model.v_stage(4).elements
    cards = {x: abstraction.scott_cardinal(x) for x in elems}
    bad = sum((cards[x] is cards[y]) != (hfset.cardinality(x) == hfset.cardinality(y))
              for x in elems for y in elems)
    two = hfset.parse_hf("{{{}, {{}}}}")
    bad_two = sum(cards[x] is not two for x in elems if hfset.cardinality(x) == 2)
    return bad == 0 and bad_two == 0, f"256 pairs, {bad} grid errors, {bad_two} two-element errors"


_EMPTY_IN = "ex c (c in {0} and all d not d in c)"
SET_EQUIVALENCES = {
    "equality": "a = b",
    "rank-0 members": f"({_EMPTY_IN.format('a')}) <-> ({_EMPTY_IN.format('b')})",
    "total": "a = a",
}


def scott_sets(seed: int):
    u = model.v_stage(4)
    errors = []
    for name, text in SET_EQUIVALENCES.items():
        alpha = abstraction.scott_abstractions(u, text)
        f = parse(text, extended=False)
        for x, y in itertools.product(u.elements, repeat=2):
            related = model.evaluate(u, f, {"a": x, "b": y})
            if (alpha[x] is alpha[y]) != related:
                errors.append(name)
                break
    return not errors, f"{len(SET_EQUIVALENCES)} relations, failing: {errors or 'none'}"


def cantor_hume(seed: int):
    u = model.v_stage(3)
    numbers = {}
    for bits, text in abstraction.subclass_presentations(u).items():
        if abstraction.presentation_extension(u, text).bits != bits:
            return False, f"presentation of class {bits} defines the wrong class"
        numbers[bits] = abstraction.class_number(u, text)
    bad = sum((numbers[a] == numbers[b]) != (bin(a).count("1") == bin(b).count("1"))
              for a in numbers for b in numbers)
    distinct = len({n._key() for n in numbers.values()})
    return bad == 0, f"16 classes, {distinct} distinct numbers, {bad} errors"


UNIFORM_BODY_INDICES = (1, 2, 4, 5, 8)


def uniform_cases():
    """(body index, extended formula) pairs for the uniform check."""
    out = []
    for i in UNIFORM_BODY_INDICES:
        body = to_text(to_surface(enumerate_formula(i), "x", "p", param_is_var=False))
        out.append((i, parse(f"eps[x | {body}] = eps[x | x in y] or eps[x | {body}] = eps[x | not x in y]")))
    return out


def elimination(seed: int):
    u = model.v_stage(3)
    formulas = corpus.extended_corpus(seed, 50)
    bad_literal = impure = 0
    for f in formulas:
        for p in u.elements:
            env = {"p": p}
            res = eliminate.translate_literal(u, f, env)
            if not ast.is_pure(res.formula):
                impure += 1
            lhs, rhs = eliminate.check_translation(res, u, f, env)
            bad_literal += lhs != rhs
    bad_uniform = 0
    for _, f in uniform_cases():
        res = eliminate.translate_uniform(u, f)
        if not ast.is_pure(res.formula):
            impure += 1
        shared = (model.Evaluator(res.universe), eliminate.ExtendedEvaluator(u))
        for p in u.elements:
            for y in u.elements:
                env = {"p": p, "y": y}
                lhs, rhs = eliminate.check_translation(res, u, f, env, evaluators=shared)
                bad_uniform += lhs != rhs
    ok = bad_literal == 0 and bad_uniform == 0 and impure == 0
    return ok, (f"literal: 200 cases, {bad_literal} disagreements; uniform: 80 cases, "
                f"{bad_uniform} disagreements; {impure} impure outputs")


def diagonal_witnesses(seed: int):
    failures = 0
    for T in corpus.candidate_corpus(seed, 100):
        try:
            w = diagonal.russell_witness(T)
        except InvariantViolation:
            failures += 1
            continue
        failures += w.value_T == w.value_R
    return failures == 0, f"100 candidates, {failures} failures"


ESCAPE_UNIVERSES = ("v2", "v3", "ack:4", "ack:8", "ack:16", "closure:#5,#11")


def escapes(seed: int):
    inside = []
    for d in ESCAPE_UNIVERSES:
        u = model.parse_universe(d)
        try:
            e = diagonal.russell_escape(u)
        except InvariantViolation:
            inside.append(d)
            continue
        if e.hf in u:
            inside.append(d)
    return not inside, f"{len(ESCAPE_UNIVERSES)} universes, inside: {inside or 'none'}"


def round_trips(seed: int):
    errors = []
    seen = set()
    for n in range(2**16):
        x = hfset.from_ackermann_index(n)
        if hfset.ackermann_index(x) != n:
            errors.append(f"ackermann {n}")
            break
        seen.add(id(x))
    if len(seen) != 2**16:
        errors.append("ackermann not injective")
    for f in corpus.surface_corpus(seed, 1000):
        text = to_text(f)
        if parse(text) != f or to_text(parse(text)) != text:
            errors.append(f"parse/print {text}")
            break
    for f in prefix(500):
        if decode_formula(code_formula(f)) != f:
            errors.append(f"code/decode {f}")
            break
    for i in range(10000):
        if index_of(enumerate_formula(i)) != i:
            errors.append(f"enumerate/index_of {i}")
            break
    return not errors, "65536 + 1000 + 500 + 10000 round trips, " + (
        f"errors: {errors}" if errors else "no errors")


CRITERIA = (
    (1, "Basic Law V over V_3", 60, blv),
    (2, "epsilon matches brute-force scanner", 60, epsilon_oracle),
    (3, "Scott cardinals over V_4", 5, scott_cardinals),
    (4, "set-level abstraction over V_4", 30, scott_sets),
    (5, "Cantor-Hume for classes of V_3", 120, cantor_hume),
    (6, "eps elimination", 120, elimination),
    (7, "diagonal witnesses", 60, diagonal_witnesses),
    (8, "Russell escape", 120, escapes),
    (9, "infrastructure round trips", 60, round_trips),
)


def run_case(number: int, seed: int = 0) -> CaseResult:
    for num, name, limit, fn in CRITERIA:
        if num == number:
            start = time.perf_counter()
            passed, detail = fn(seed)
            return CaseResult(num, name, passed, detail, time.perf_counter() - start, limit)
    raise KeyError(number)


def run_suite(seed: int = 0, only=None) -> list[CaseResult]:
    numbers = [c[0] for c in CRITERIA if only is None or c[0] in only]
    return [run_case(n, seed) for n in numbers]
