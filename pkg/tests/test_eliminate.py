import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hf_frege import corpus, hfset, model
from hf_frege.eliminate import (
    ExtendedEvaluator, check_translation, eval_extended, literal_definition, rank_below,
    translate_literal, translate_uniform,
)
from hf_frege.errors import IndexTooLarge, NotVStage, UserError
from hf_frege.hfset import EMPTY, from_ackermann_index as A
from hf_frege.model import evaluate
from hf_frege.syntax import ast
from hf_frege.syntax.parser import parse, to_text


@pytest.fixture(scope="module")
def v3():
    return model.v_stage(3)


def test_eval_extended_examples(v3):
    assert eval_extended(v3, "eps[x | x = x] = eps[x | not not x = x]")
    assert not eval_extended(v3, "eps[x | x = x] = eps[x | x in $p]", {"p": EMPTY})
    assert eval_extended(v3, "ex y (y in eps[x | x = x] or y = y)")


def test_eps_denotation(v3):
    ev = ExtendedEvaluator(v3)
    t = parse("eps[x | x in $p] = y").left
    d = ev.denote(t, {"p": A(3)})
    code, params = hfset.unpair(d)
    assert params is hfset.singleton(A(3))


def test_literal_definition_of_empty():
    assert to_text(literal_definition(EMPTY)) == "all t not t in v"


@pytest.mark.parametrize("n", [0, 1, 2, 3, 5, 11, 100, 2059, 40000])
def test_literal_definition_defines_exactly(n):
    d = A(n)
    u = model.closure_of([d, A(7), A(300)])
    f = literal_definition(d, "v")
    holders = [e for e in u.elements if evaluate(u, f, {"v": e})]
    assert holders == [d]


def test_rank_guard():
    u = model.v_stage(4)
    for r in range(5):
        f = rank_below("v", r)
        for e in u.elements:
            assert evaluate(u, f, {"v": e}) == (hfset.rank(e) < r)


def test_literal_translation_examples(v3):
    e = parse("eps[x | x = x] = eps[x | not not x = x]")
    res = translate_literal(v3, e)
    assert ast.is_pure(res.formula)
    assert evaluate(res.universe, res.formula) is True

    pure = parse("all y (y in $p -> ex z z in y)")
    res = translate_literal(v3, pure, {"p": A(2)})
    assert ast.is_pure(res.formula)
    for p in v3.elements:
        r = translate_literal(v3, pure, {"p": p})
        assert evaluate(r.universe, r.formula, {"p": p}) == evaluate(v3, pure, {"p": p})


def test_literal_translation_audit(v3):
    res = translate_literal(v3, parse("y in eps[x | x in $p]"), {"p": A(3)})
    audit = res.audit()
    assert audit["guard"]["stage"] == 3
    assert len(audit["denotations"]) == 1
    assert audit["universe_size"] == res.universe.size
    assert res.universe.check_transitive()


@given(st.integers(min_value=0, max_value=10**9))
@settings(max_examples=25, deadline=None)
def test_literal_translation_agrees(seed):
    u = model.v_stage(3)
    f = corpus.extended_corpus(seed, 1)[0]
    p = random.Random(seed).choice(u.elements)
    res = translate_literal(u, f, {"p": p})
    assert ast.is_pure(res.formula)
    lhs, rhs = check_translation(res, u, f, {"p": p})
    assert lhs == rhs


def test_literal_rejects_bound_dependency(v3):
    with pytest.raises(UserError):
        translate_literal(v3, parse("ex y y = eps[x | x in y]"))


def test_needs_v_stage():
    with pytest.raises(NotVStage):
        translate_literal(model.ackermann_segment(5), parse("x = x"), {"x": EMPTY})


def test_uniform_grid_extends_to_enlarged_universe(v3):
    e = parse("y = eps[x | x in $p]")
    res = translate_uniform(v3, e)
    assert ast.is_pure(res.formula)
    shared = (model.Evaluator(res.universe), ExtendedEvaluator(v3))
    hits = 0
    for p in v3.elements:
        for y in res.universe.elements:
            lhs, rhs = check_translation(res, v3, e, {"p": p, "y": y}, evaluators=shared)
            assert lhs == rhs
            hits += rhs
    # each p has exactly one y, its own extension object
    assert hits == 4


def test_uniform_single_disjunct_for_index_zero(v3):
    res = translate_uniform(v3, parse("y = eps[x | x in x]"))
    (entry,) = res.audit()["denotations"]
    assert entry["index"] == 0 and entry["disjuncts"] == 1


def test_uniform_index_guard(v3):
    with pytest.raises(IndexTooLarge):
        translate_uniform(v3, parse("y = eps[x | ex z (z in x and z in $p)]"))


def test_uniform_handles_quantified_dependency(v3):
    # the body of the first eps term depends on the bound y
    e = parse("ex y eps[x | x in y] = eps[x | x = $p]")
    res = translate_uniform(v3, e)
    assert ast.is_pure(res.formula)
    values = []
    for p in v3.elements:
        lhs, rhs = check_translation(res, v3, e, {"p": p})
        assert lhs == rhs
        values.append(rhs)
    # {p} is in V_3 only for p = {} and p = {{}}
    assert values == [True, True, False, False]
