import pytest

from hf_frege import abstraction, corpus, hfset, model
from hf_frege.diagonal import russell_escape, russell_witness
from hf_frege.errors import UniverseTooLarge, UserError
from hf_frege.syntax.parser import parse

from oracles import naive_holds, to_fs


def test_russell_class_instance():
    w = russell_witness("x in y")
    assert w.to_json()["R"] == "not x in x"
    assert (w.value_T, w.value_R) == (False, True)
    assert w.r in w.universe


def test_constant_true_candidate():
    w = russell_witness("y = y")
    assert (w.value_T, w.value_R) == (True, False)


def test_other_variable_names():
    # two free names other than y, x are taken in sorted order
    w = russell_witness("a in b")
    assert (w.value_T, w.value_R) == (False, True)
    with pytest.raises(UserError):
        russell_witness("a in b and c = c")


def test_bound_x_is_not_captured():
    w = russell_witness("ex x (x in y and x = x)")
    assert w.value_T != w.value_R


def test_witness_on_base_universe():
    base = model.v_stage(3)
    w = russell_witness("ex z (z in y and z = x)", base)
    assert set(base.elements) <= set(w.universe.elements)
    assert w.value_T != w.value_R


def test_random_candidates_against_naive_evaluator():
    for T in corpus.candidate_corpus(7, 30):
        w = russell_witness(T)
        domain = [to_fs(e) for e in w.universe.elements]
        r = to_fs(w.r)
        assert naive_holds(T, domain, {"y": r, "x": r}) == w.value_T
        assert naive_holds(w.R, domain, {"x": r}) == w.value_R
        assert w.value_T != w.value_R


@pytest.mark.parametrize("desc", ["v2", "v3", "ack:8", "closure:#5,#11"])
def test_escape(desc):
    u = model.parse_universe(desc)
    e = russell_escape(u)
    assert e.escaped
    assert e.hf not in u
    assert e.eps_R.as_hfset is e.hf


def test_escape_rank_above_v2():
    e = russell_escape(model.v_stage(2))
    assert hfset.rank(e.hf) >= 3


def test_escape_with_extension_object_inside():
    v2 = model.v_stage(2)
    inside = abstraction.extension_of(v2, "x = x").as_hfset
    u = model.closure_of(list(v2.elements) + [inside])
    e = russell_escape(u)
    assert e.extension_elements == 1
    # that object falls under its own class, so it is not in R
    assert inside not in e.russell_class
    assert e.hf not in u


def test_escape_size_cap():
    with pytest.raises(UniverseTooLarge):
        russell_escape(model.ackermann_segment(5000))
