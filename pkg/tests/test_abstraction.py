import functools
import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hf_frege import abstraction, corpus, hfset, model
from hf_frege.abstraction import (
    AbstractionObject, Equinumerous, Extensional, ExternalComparator, FirstOrderFormula,
    class_abstraction, class_number, epsilon, extension_of, is_extension, presentation_extension,
    scott_abstraction, scott_abstractions, scott_cardinal,
)
from hf_frege.errors import (
    CardinalTooLarge, CrossUniverse, ElementNotInUniverse, NotEquivalence, UnboundVariable,
)
from hf_frege.hfset import EMPTY, from_ackermann_index as A
from hf_frege.model import ClassExtension
from hf_frege.syntax.coding import code_formula
from hf_frege.syntax.enumeration import enumerate_formula
from hf_frege.syntax.parser import parse

from oracles import naive_holds, to_fs


@pytest.fixture(scope="module")
def v3():
    return model.v_stage(3)


# --- extension objects --------------------------------------------------------

def test_universal_class(v3):
    a = extension_of(v3, "x = x")
    b = extension_of(v3, "not x in $p", {"p": EMPTY})
    assert a == b
    assert (a.index, a.formula_text(), a.params) == (4, "x = x", (EMPTY,))
    assert extension_of(v3, "not not x = x") == a


def test_empty_class(v3):
    e = extension_of(v3, "x in $p", {"p": EMPTY})
    assert e.index == 0 and e.params == (EMPTY,)
    assert e != extension_of(v3, "x = x")


def test_deterministic(v3):
    a = extension_of(v3, "ex y (y in x and y = $p)", {"p": A(1)})
    b = extension_of(v3, "ex y (y in x and y = $p)", {"p": A(1)})
    assert a.to_json() == b.to_json()
    assert a.as_hfset is b.as_hfset


def test_params_share_minimal_rank(v3):
    for bits in range(16):
        obj = epsilon(v3, ClassExtension(v3, bits))
        ranks = {hfset.rank(p) for p in obj.params}
        assert len(ranks) == 1
        # no parameter of smaller rank works with the same formula
        low = min(ranks)
        for p in v3.elements:
            if hfset.rank(p) < low:
                assert model.extension(v3, obj.formula, p).bits != bits


def test_cross_universe_comparison(v3):
    with pytest.raises(CrossUniverse):
        extension_of(v3, "x = x") == extension_of(model.v_stage(4), "x = x")


def test_abstraction_object_validation():
    f = enumerate_formula(1)
    with pytest.raises(Exception):
        AbstractionObject(1, f, (), "extension", "v3")
    with pytest.raises(Exception):
        AbstractionObject(1, f, (EMPTY, A(1)), "extension", "v3")


@given(st.integers(min_value=0, max_value=10**9))
@settings(max_examples=40, deadline=None)
def test_basic_law_v_random_presentations(seed):
    rng = random.Random(seed)
    u = model.parse_universe(rng.choice(["v3", "ack:5", "closure:#5,#11"]))
    domain = [to_fs(e) for e in u.elements]
    pres = []
    for _ in range(4):
        f = corpus.random_formula(rng, free=("x",), params=("p", "q"), depth=3, quantifiers=1)
        env = {"p": rng.choice(u.elements), "q": rng.choice(u.elements)}
        pres.append((f, env))
    objs, exts = [], []
    for f, env in pres:
        ext = presentation_extension(u, f, env)
        fenv = {k: to_fs(v) for k, v in env.items()}
        assert set(map(to_fs, ext.members())) == {
            d for d in domain if naive_holds(f, domain, {**fenv, "x": d})}
        exts.append(ext.bits)
        objs.append(epsilon(u, ext))
    for i, j in itertools.combinations(range(4), 2):
        assert (objs[i] == objs[j]) == (exts[i] == exts[j])


def test_blv_check_report(v3):
    report = abstraction.blv_check(v3, corpus.blv_presentations(v3, 10))
    assert report["pairs"] == 40 * 39 // 2
    assert report["violations"] == []
    assert report["distinct_objects"] <= 16


def test_presentation_needs_bindings(v3):
    with pytest.raises(UnboundVariable):
        presentation_extension(v3, "x in $p")


# --- recognizing extension objects ----------------------------------------------

def test_is_extension_round_trip(v3):
    for bits in range(16):
        obj = epsilon(v3, bits)
        found = is_extension(v3, obj.as_hfset)
        assert found is not None
        formula, params, ext = found
        assert formula == obj.formula and tuple(params) == obj.params and ext.bits == bits


def test_is_extension_negatives(v3):
    assert is_extension(v3, EMPTY) is None
    # psi_1 with p = {} defines the empty class, which psi_0 already defines
    fake = hfset.kuratowski_pair(code_formula(enumerate_formula(1)), hfset.singleton(EMPTY))
    assert is_extension(v3, fake) is None
    # right formula, non-minimal parameter set
    obj = extension_of(v3, "x = x")
    wrong = hfset.kuratowski_pair(code_formula(obj.formula), hfset.singleton(A(1)))
    assert is_extension(v3, wrong) is None


# --- set level ----------------------------------------------------------------

def test_scott_equality_and_total(v3):
    for x in v3.elements:
        assert scott_abstraction(v3, "a = b", x) is hfset.singleton(x)
        assert scott_abstraction(v3, "a = a", x) is hfset.singleton(EMPTY)


def test_scott_callable_relation():
    u = model.v_stage(4)
    alpha = scott_abstractions(u, lambda a, b: hfset.rank(a) == hfset.rank(b))
    assert len(set(alpha.values())) == 4
    for x in u.elements:
        same_rank = [e for e in u.elements if hfset.rank(e) == hfset.rank(x)]
        assert alpha[x] is hfset.from_members(same_rank)


def test_scott_rejects_non_equivalence(v3):
    with pytest.raises(NotEquivalence):
        scott_abstraction(v3, "a in b", EMPTY)
    with pytest.raises(NotEquivalence):
        scott_abstraction(v3, "a = b or a in b", EMPTY)
    with pytest.raises(ElementNotInUniverse):
        scott_abstraction(v3, "a = b", A(100))


@functools.lru_cache(maxsize=None)
def _rank_of_index(n):
    return 0 if n == 0 else 1 + max(_rank_of_index(i) for i in range(n.bit_length()) if n >> i & 1)


def test_scott_cardinal_brute_force():
    # all sets of rank <= 4 are the indices below 2^16
    by_size = {}
    for n in range(2**16):
        by_size.setdefault(bin(n).count("1"), []).append(n)
    for k in range(17):
        low = min(_rank_of_index(n) for n in by_size[k])
        expected = {n for n in by_size[k] if _rank_of_index(n) == low}
        x = hfset.from_members(A(i) for i in range(100, 100 + k))
        card = scott_cardinal(x)
        assert {hfset.ackermann_index(m) for m in card.members} == expected
        assert hfset.cardinality(card) == abstraction.scott_cardinal_size(k)


def test_scott_cardinal_examples():
    assert scott_cardinal(EMPTY) is hfset.singleton(EMPTY)
    for n in (1, 2, 7, 300):
        assert scott_cardinal(hfset.singleton(A(n))) is hfset.parse_hf("{{{}}}")
    assert scott_cardinal(hfset.parse_hf("{#5, #9}")) is hfset.parse_hf("{{{}, {{}}}}")


def test_scott_cardinal_cap():
    with pytest.raises(CardinalTooLarge):
        scott_cardinal(hfset.from_members(A(i) for i in range(17)))


# --- class level ----------------------------------------------------------------

def test_number_of_universal_class(v3):
    a = class_number(v3, "x = x")
    b = class_number(v3, "not x in x")
    assert a == b
    assert a.kind == "number"


def test_numbers_track_popcount(v3):
    nums = {bits: class_number(v3, ClassExtension(v3, bits)) for bits in range(16)}
    for a, b in itertools.product(range(16), repeat=2):
        assert (nums[a] == nums[b]) == (bin(a).count("1") == bin(b).count("1"))


def test_class_abstraction_specializations(v3):
    for bits in range(16):
        ext = ClassExtension(v3, bits)
        assert class_abstraction(v3, Extensional(), ext) == epsilon(v3, ext)
        assert class_abstraction(v3, Equinumerous(), ext) == class_number(v3, ext)


def test_first_order_equivalence_two_classes(v3):
    eq = FirstOrderFormula("all x ((all y not y in x) -> (x in F <-> x in G))")
    alphas = {bits: class_abstraction(v3, eq, ClassExtension(v3, bits)) for bits in range(16)}
    assert len({a._key() for a in alphas.values()}) == 2
    for a, b in itertools.product(range(16), repeat=2):
        assert (alphas[a] == alphas[b]) == ((a & 1) == (b & 1))


def test_external_comparator(v3):
    same_size = ExternalComparator(lambda F, G: F.popcount() == G.popcount(), "same-size")
    for bits in range(16):
        ext = ClassExtension(v3, bits)
        a = class_abstraction(v3, same_size, ext)
        assert (a.index, a.params) == (class_number(v3, ext).index, class_number(v3, ext).params)


def test_non_equivalences_are_reported(v3):
    smaller = ExternalComparator(lambda F, G: F.popcount() <= G.popcount())
    with pytest.raises(NotEquivalence):
        class_abstraction(v3, smaller, ClassExtension(v3, 0b0011))
    irreflexive = FirstOrderFormula("ex x (x in F and not x in G)")
    with pytest.raises(NotEquivalence):
        class_abstraction(v3, irreflexive, ClassExtension(v3, 0b0011))


def test_subclass_presentations(v3):
    pres = abstraction.subclass_presentations(v3)
    assert len(pres) == 16
    for bits, text in pres.items():
        assert presentation_extension(v3, parse(text)).bits == bits


def test_formula_equivalence_bindings_are_part_of_identity(v3):
    target = ClassExtension(v3, 0b0001)
    relation = "(q in F) <-> (q in G)"
    a = class_abstraction(v3, FirstOrderFormula(relation, env={"q": A(0)}), target)
    b = class_abstraction(v3, FirstOrderFormula(relation, env={"q": A(1)}), target)
    # with q = {} the empty class (index 0) is not related to {{}}'s class; with q = {{}} it is
    assert (a.index, b.index) == (1, 0)
