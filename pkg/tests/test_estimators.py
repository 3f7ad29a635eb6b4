import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from hf_frege import abstraction, hfset, model
from hf_frege.estimators import AbstractionTransformer, ScottAbstractor
from hf_frege.hfset import EMPTY


def test_params_and_clone():
    t = AbstractionTransformer(universe="v3", kind="number", budget=1000)
    assert t.get_params() == {"universe": "v3", "kind": "number", "budget": 1000, "object_var": "x"}
    c = clone(t)
    assert c.get_params() == t.get_params()
    assert not hasattr(c, "universe_")


def test_extension_transform_matches_library():
    t = AbstractionTransformer("v3")
    out = t.fit_transform(["x = x", ("x in $p", {"p": EMPTY})])
    u = model.v_stage(3)
    assert out[0] == abstraction.extension_of(u, "x = x")
    assert out[1].index == 0


def test_number_transform():
    out = AbstractionTransformer("v3", kind="number").fit_transform(["x = x", "not x in x"])
    assert out[0] == out[1]


def test_not_fitted():
    with pytest.raises(NotFittedError):
        AbstractionTransformer().transform(["x = x"])
    with pytest.raises(NotFittedError):
        ScottAbstractor().transform([EMPTY])


def test_bad_kind():
    with pytest.raises(Exception):
        AbstractionTransformer(kind="colour").fit()


def test_scott_abstractor():
    s = ScottAbstractor("v4", "a = a").fit()
    assert s.n_classes_ == 1
    assert set(s.transform(s.universe_.elements)) == {hfset.singleton(EMPTY)}
    s = clone(s).set_params(relation="a = b").fit()
    assert s.n_classes_ == 16
