import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hf_frege import hfset
from hf_frege.errors import HfSyntaxError, IndexOverflow, NotAPair
from hf_frege.hfset import EMPTY, from_ackermann_index as A

from oracles import fs_from_index, fs_index, fs_rank, naive_transitive_closure, to_fs

indices = st.integers(min_value=0, max_value=2**16 - 1)


def test_empty():
    assert hfset.empty() is EMPTY
    assert EMPTY.members == ()
    assert hfset.rank(EMPTY) == 0
    assert hfset.ackermann_index(EMPTY) == 0


def test_from_members_dedupes_and_orders():
    e = EMPTY
    one = hfset.singleton(e)
    assert hfset.from_members([e]) is one
    assert hfset.from_members([e, e]) is one
    two = hfset.from_members([one, e])
    assert two.members == (e, one)
    assert hfset.ackermann_index(two) == 3


@pytest.mark.parametrize("text, n", [("{}", 0), ("{{}}", 1), ("{{{}}}", 2), ("{{},{{}}}", 3)])
def test_small_indices(text, n):
    assert hfset.ackermann_index(hfset.parse_hf(text)) == n
    assert A(n) is hfset.parse_hf(text)


def test_eleven_is_three():
    assert A(11) is hfset.von_neumann(3)
    assert hfset.as_natural(A(11)) == 3
    assert hfset.as_natural(A(5)) is None


@given(indices)
def test_index_matches_frozenset_model(n):
    x = A(n)
    assert to_fs(x) == fs_from_index(n)
    assert hfset.ackermann_index(x) == n
    assert hfset.rank(x) == fs_rank(fs_from_index(n))


def test_round_trip_first_segment():
    seen = set()
    for n in range(2**12):
        x = A(n)
        assert hfset.ackermann_index(x) == n
        seen.add(id(x))
    assert len(seen) == 2**12


@given(indices, indices)
def test_interning_and_order(a, b):
    x, y = A(a), A(b)
    assert (x is y) == (a == b)
    assert (x == y) == (a == b)
    cmp = hfset.compare(x, y)
    assert (cmp > 0) - (cmp < 0) == (a > b) - (a < b)


def test_compare_without_indices():
    # ordering must not need the (huge) index of deep sets
    big = hfset.von_neumann(40)
    bigger = hfset.from_members([*big.members, big])
    assert hfset.compare(big, bigger) < 0
    assert hfset.von_neumann(41) is bigger


def test_index_budget():
    deep = hfset.von_neumann(30)
    with pytest.raises(IndexOverflow):
        hfset.ackermann_index(deep, bit_budget=64)


def test_ranks():
    assert hfset.rank(hfset.parse_hf("{{},{{}}}")) == 2
    v3 = [A(i) for i in range(4)]
    for a in v3:
        for b in v3:
            p = hfset.kuratowski_pair(a, b)
            assert hfset.rank(p) == max(hfset.rank(a), hfset.rank(b)) + 2
            assert hfset.unpair(p) == (a, b)


def test_pairs():
    assert hfset.kuratowski_pair(EMPTY, EMPTY) is hfset.parse_hf("{{{}}}")
    with pytest.raises(NotAPair):
        hfset.unpair(hfset.parse_hf("{{}}"))
    with pytest.raises(NotAPair):
        hfset.unpair(EMPTY)
    assert not hfset.is_pair(A(3))
    assert hfset.is_pair(hfset.kuratowski_pair(A(1), A(2)))


@given(indices, indices)
@settings(max_examples=200)
def test_pair_round_trip(a, b):
    assert hfset.unpair(hfset.kuratowski_pair(A(a), A(b))) == (A(a), A(b))


def test_von_neumann():
    assert hfset.von_neumann(2) is hfset.parse_hf("{{},{{}}}")
    assert hfset.cardinality(hfset.von_neumann(5)) == 5
    for n in range(8):
        assert hfset.as_natural(hfset.von_neumann(n)) == n


def test_transitive_closure_example():
    tc = hfset.transitive_closure(hfset.parse_hf("{{{}}}"))
    assert set(tc.members) == {EMPTY, A(1)}


@given(st.integers(min_value=0, max_value=2**20))
def test_transitive_closure(n):
    x = A(n)
    tc = hfset.transitive_closure(x)
    assert to_fs(tc) == naive_transitive_closure(fs_from_index(n))
    assert hfset.is_transitive(tc.members)
    assert set(x.members) <= set(tc.members)


@given(indices)
def test_format_parse_round_trip(n):
    x = A(n)
    assert hfset.parse_hf(hfset.format_hf(x)) is x
    assert hfset.parse_hf(hfset.format_braces(x)) is x


def test_format_uses_braces_for_large():
    x = A(2**16)
    assert hfset.format_hf(x) == "{#16}"
    assert hfset.format_hf(A(5)) == "#5"


@pytest.mark.parametrize("bad", ["", "{", "{}}", "#", "#x", "{#1,,#2}", "{} {}"])
def test_parse_errors(bad):
    with pytest.raises(HfSyntaxError):
        hfset.parse_hf(bad)


def test_from_index_negative():
    with pytest.raises(ValueError):
        A(-1)


@given(st.lists(indices, max_size=6))
def test_from_members_is_extensional(ns):
    x = hfset.from_members(A(n) for n in ns)
    assert fs_index(to_fs(x)) == sum(2**n for n in set(ns))
