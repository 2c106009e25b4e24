"""Unit tests for the effective Boolean algebras."""

import pytest
from hypothesis import given, settings, strategies as st

from rsfalearn.algebra import (
    INT32,
    Domain,
    FiniteSetAlgebra,
    IntervalAlgebra,
)

D10 = Domain(0, 9)
A10 = IntervalAlgebra(D10)
A64 = IntervalAlgebra(Domain(0, 63))
A32 = IntervalAlgebra(INT32)


def ivs(*pairs):
    return tuple(pairs)


class TestDomain:
    def test_size(self):
        assert D10.size == 10
        assert INT32.size == 2 ** 32

    def test_contains(self):
        assert D10.contains(0) and D10.contains(9)
        assert not D10.contains(-1) and not D10.contains(10)

    def test_empty_domain_rejected(self):
        with pytest.raises(ValueError):
            Domain(5, 4)

    def test_json_round_trip(self):
        assert Domain.from_json(D10.to_json()) == D10


class TestNormalize:
    def test_overlapping_union(self):
        assert A10.normalize([(0, 3), (2, 5)]) == ivs((0, 5))

    def test_empty_is_bot(self):
        assert A10.normalize([]) == () == A10.bot()

    def test_touching_intervals_merge(self):
        assert A10.normalize([(0, 2), (3, 5)]) == ivs((0, 5))

    def test_gap_preserved(self):
        assert A10.normalize([(0, 2), (4, 5)]) == ivs((0, 2), (4, 5))

    def test_order_irrelevant(self):
        assert A10.normalize([(4, 5), (0, 2)]) == ivs((0, 2), (4, 5))

    def test_bad_interval_rejected(self):
        with pytest.raises(ValueError):
            A10.normalize([(5, 4)])
        with pytest.raises(ValueError):
            A10.normalize([(0, 10)])


class TestOps:
    def test_and_overlap(self):
        assert A10.and_(ivs((0, 5)), ivs((3, 9))) == ivs((3, 5))

    def test_or_identity(self):
        for p in [(), ivs((0, 5)), ivs((1, 2), (4, 6)), A10.top()]:
            assert A10.or_(A10.bot(), p) == p

    def test_not_top_is_bot(self):
        assert A10.not_(A10.top()) == A10.bot()
        assert A10.not_(A10.bot()) == A10.top()

    def test_combine_dispatch(self):
        p, q = ivs((0, 3)), ivs((2, 6))
        assert A10.combine("and", p, q) == A10.and_(p, q)
        assert A10.combine("or", p, q) == A10.or_(p, q)
        assert A10.combine("not", p) == A10.not_(p)
        with pytest.raises(ValueError):
            A10.combine("xor", p, q)
        with pytest.raises(ValueError):
            A10.combine("not", p, q)
        with pytest.raises(ValueError):
            A10.combine("and", p)


class TestWitness:
    def test_bot_none(self):
        assert A10.witness(A10.bot()) is None

    def test_smallest_element(self):
        assert A10.witness(ivs((6, 9))) == 6
        assert A10.witness(ivs((2, 3), (6, 9))) == 2

    def test_top_int32(self):
        assert A32.witness(A32.top()) == -(2 ** 31)


class TestMember:
    def test_basic(self):
        assert A10.member(ivs((6, 9)), 7)
        assert not A10.member(A10.bot(), 0)
        assert not A10.member(ivs((0, 2), (8, 9)), 5)

    def test_outside_domain_rejected(self):
        with pytest.raises(ValueError):
            A10.member(A10.top(), 10)


# -- semantic oracle: predicates as explicit character sets --------------


def denote(alg, p):
    return {c for c in alg.chars() if alg.member(p, c)}


pred64 = st.lists(
    st.tuples(st.integers(0, 63), st.integers(0, 63)).map(
        lambda t: (min(t), max(t))
    ),
    max_size=4,
).map(A64.normalize)


@settings(max_examples=300)
@given(pred64, pred64)
def test_and_matches_set_intersection(p, q):
    assert denote(A64, A64.and_(p, q)) == denote(A64, p) & denote(A64, q)


@settings(max_examples=300)
@given(pred64, pred64)
def test_or_matches_set_union(p, q):
    assert denote(A64, A64.or_(p, q)) == denote(A64, p) | denote(A64, q)


@settings(max_examples=300)
@given(pred64)
def test_not_matches_set_complement(p):
    assert denote(A64, A64.not_(p)) == set(A64.chars()) - denote(A64, p)


@settings(max_examples=300)
@given(pred64)
def test_normal_form_invariants(p):
    # sorted, lo <= hi, gap of at least 2 between consecutive intervals
    for lo, hi in p:
        assert lo <= hi
    for (l1, h1), (l2, h2) in zip(p, p[1:]):
        assert l2 > h1 + 1


@settings(max_examples=300)
@given(pred64)
def test_witness_in_denotation_and_minimal(p):
    w = A64.witness(p)
    if A64.is_empty(p):
        assert w is None
    else:
        d = denote(A64, p)
        assert w == min(d)


class TestFiniteSetAlgebra:
    ALG = FiniteSetAlgebra(range(6))

    def test_basics(self):
        alg = self.ALG
        assert alg.top() == frozenset(range(6))
        assert alg.bot() == frozenset()
        assert alg.and_(frozenset({1, 2}), frozenset({2, 3})) == {2}
        assert alg.or_(frozenset({1}), frozenset({3})) == {1, 3}
        assert alg.not_(frozenset({0, 1})) == {2, 3, 4, 5}
        assert alg.witness(frozenset({4, 2})) == 2
        assert alg.witness(alg.bot()) is None
        assert alg.member(frozenset({5}), 5)
        assert not alg.member(frozenset({5}), 4)
        assert alg.is_empty(alg.bot()) and not alg.is_empty(alg.top())

    def test_outside_alphabet_rejected(self):
        with pytest.raises(ValueError):
            self.ALG.member(self.ALG.top(), 6)

    def test_empty_alphabet_rejected(self):
        with pytest.raises(ValueError):
            FiniteSetAlgebra([])


class TestJson:
    def test_pred_round_trip(self):
        p = ivs((0, 2), (5, 9))
        assert A10.pred_from_json(IntervalAlgebra.pred_to_json(p)) == p


def test_chars_refuses_huge_domain():
    with pytest.raises(ValueError):
        A32.chars()
