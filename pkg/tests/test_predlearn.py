"""Unit tests for the per-transition predicate-learning sessions."""

import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from rsfalearn.algebra import Domain, FiniteSetAlgebra, IntervalAlgebra
from rsfalearn.predlearn import (
    EnumerationSession,
    Eq,
    IntervalSession,
    Mq,
    ProtocolError,
)

D10 = Domain(0, 9)
A10 = IntervalAlgebra(D10)


def drive(session, alg, target_pred, max_rounds=10_000):
    """Answer a session from a ground-truth predicate until it converges
    (an Eq whose hypothesis cannot be refuted by any domain character)."""
    for _ in range(max_rounds):
        act = session.next_action()
        if isinstance(act, Mq):
            session.answer_mq(alg.member(target_pred, act.char))
        else:
            bad = next(
                (c for c in alg.chars()
                 if alg.member(act.predicate, c) != alg.member(target_pred, c)),
                None,
            )
            if bad is None:
                return act.predicate
            session.provide_counterexample(bad, alg.member(target_pred, bad))
    raise AssertionError("session did not converge")


class TestIntervalSessionProtocol:
    def test_first_probes_are_endpoints(self):
        s = IntervalSession(A10)
        a1 = s.next_action()
        assert a1 == Mq(0)
        s.answer_mq(False)
        a2 = s.next_action()
        assert a2 == Mq(9)

    def test_next_action_idempotent(self):
        s = IntervalSession(A10)
        assert s.next_action() == s.next_action()

    def test_answer_without_pending_rejected(self):
        s = IntervalSession(A10)
        with pytest.raises(ProtocolError):
            s.answer_mq(True)

    def test_counterexample_without_eq_rejected(self):
        s = IntervalSession(A10)
        with pytest.raises(ProtocolError):
            s.provide_counterexample(5, True)

    def test_uniform_samples_give_constant_hypothesis(self):
        for value, expect in [(True, A10.top()), (False, A10.bot())]:
            s = IntervalSession(A10)
            for _ in range(2):
                act = s.next_action()
                assert isinstance(act, Mq)
                s.answer_mq(value)
            act = s.next_action()
            assert act == Eq(expect)

    def test_adjacent_differing_samples_need_no_probe(self):
        # samples (3,+), (4,-) leave no gap: border is already exact
        s = IntervalSession(A10)
        s.samples = {0: False, 3: True, 4: False, 9: False}
        assert s._gaps() == [(0, 3)]  # only the non-adjacent flip remains

    def test_midpoint_halves_gap(self):
        s = IntervalSession(A10)
        s.samples = {0: False, 9: True}
        act = s.next_action()
        assert act == Mq(4)
        s.answer_mq(False)
        (lo, hi) = s._gaps()[0]
        assert (hi - lo) <= (9 - 0 + 1) // 2

    def test_gap_width_one_resolves(self):
        s = IntervalSession(A10)
        s.samples = {4: True, 5: False}
        assert s._gaps() == []

    def test_eq_repeats_until_counterexample(self):
        s = IntervalSession(A10)
        s.next_action(); s.answer_mq(False)
        s.next_action(); s.answer_mq(False)
        e1 = s.next_action()
        e2 = s.next_action()
        assert e1 == e2 == Eq(A10.bot())
        assert s.n_eqs == 1  # repeated polling does not recount

    def test_counterexample_consistent_with_hypothesis_rejected(self):
        s = IntervalSession(A10)
        s.next_action(); s.answer_mq(False)
        s.next_action(); s.answer_mq(False)
        s.next_action()  # Eq(bot)
        with pytest.raises(ProtocolError):
            s.provide_counterexample(5, False)  # bot already rejects 5

    def test_counterexample_already_sampled_rejected(self):
        s = IntervalSession(A10)
        s.next_action(); s.answer_mq(False)
        s.next_action(); s.answer_mq(False)
        s.next_action()
        with pytest.raises(ProtocolError):
            s.provide_counterexample(0, True)

    def test_counterexample_in_gap_adds_bounded_searches(self):
        s = IntervalSession(A10)
        s.next_action(); s.answer_mq(False)
        s.next_action(); s.answer_mq(False)
        s.next_action()
        before = len(s._gaps())
        s.provide_counterexample(5, True)
        # the new sample has at most two neighbors, hence at most two
        # new pending searches
        assert len(s._gaps()) <= before + 2

    def test_full_session_small_budget(self):
        target = A10.normalize([(6, 9)])
        s = IntervalSession(A10)
        got = drive(s, A10, target)
        assert got == target
        assert s.n_eqs <= 2 and s.n_mqs <= 8

    def test_hypothesis_matches_samples(self):
        s = IntervalSession(A10)
        got = drive(s, A10, A10.normalize([(2, 3), (7, 8)]))
        for c, v in s.samples.items():
            assert A10.member(got, c) == v

    def test_current_hypothesis_before_eq_rejected(self):
        s = IntervalSession(A10)
        with pytest.raises(ProtocolError):
            s.current_hypothesis()

    def test_single_point_domain(self):
        alg = IntervalAlgebra(Domain(5, 5))
        s = IntervalSession(alg)
        act = s.next_action()
        assert act == Mq(5)
        s.answer_mq(True)
        assert s.next_action() == Eq(alg.top())


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 255), st.integers(0, 255)),
                max_size=4),
       st.integers(0, 2 ** 31))
def test_session_converges_exactly(pairs, _salt):
    alg = IntervalAlgebra(Domain(0, 255))
    target = alg.normalize([(min(a, b), max(a, b)) for a, b in pairs])
    s = IntervalSession(alg)
    got = drive(s, alg, target)
    assert got == target


def test_query_bounds_on_random_sets():
    # borders K of the target; session must stay within K+1 Eqs and
    # 2(K+1)*ceil(log2 |domain|) + 2 Mqs
    dom = Domain(0, 2 ** 16 - 1)
    alg = IntervalAlgebra(dom)
    log = math.ceil(math.log2(dom.size))
    rng = random.Random(42)
    for _ in range(200):
        k = rng.randint(0, 4)
        cuts = sorted(rng.sample(range(1, dom.size), k)) if k else []
        borders = len(cuts)
        raw, lo, inside = [], dom.min, rng.choice([True, False])
        phase = inside
        for c in cuts + [dom.max + 1]:
            if phase:
                raw.append((lo, c - 1))
            lo, phase = c, not phase
        target = alg.normalize(raw)
        s = IntervalSession(alg)
        got = drive(s, alg, target)
        assert got == target
        assert s.n_eqs <= borders + 1
        assert s.n_mqs <= 2 * (borders + 1) * log + 2


class TestEnumerationSession:
    ALG = FiniteSetAlgebra(range(6))

    def test_probes_every_char_then_exact(self):
        target = frozenset({1, 4})
        s = EnumerationSession(self.ALG)
        seen = []
        while True:
            act = s.next_action()
            if isinstance(act, Mq):
                seen.append(act.char)
                s.answer_mq(act.char in target)
            else:
                assert act.predicate == target
                break
        assert sorted(seen) == list(range(6))

    def test_counterexample_always_protocol_error(self):
        s = EnumerationSession(self.ALG)
        while isinstance(s.next_action(), Mq):
            s.answer_mq(False)
        with pytest.raises(ProtocolError):
            s.provide_counterexample(0, True)

    def test_answer_without_pending_rejected(self):
        s = EnumerationSession(self.ALG)
        with pytest.raises(ProtocolError):
            s.answer_mq(True)
