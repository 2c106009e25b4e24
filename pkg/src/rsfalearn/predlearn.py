"""MAT-style learning sessions for underlying-algebra predicates.

A session is a suspended state machine that emits membership probes
(:class:`Mq`) until it can commit to a hypothesis predicate (:class:`Eq`).
After an Eq the session sleeps until `provide_counterexample` wakes it.

:class:`IntervalSession` learns interval unions over an ordered bounded
domain by binary-searching borders between samples of differing
membership.  For a target with K borders it needs at most K + 1 Eqs and
2*(K+1)*ceil(log2 |domain|) + 2 Mqs.

:class:`EnumerationSession` is the trivial learner for a small finite
alphabet: it probes every character once and commits to the exact set.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import FiniteSetAlgebra, IntervalAlgebra


@dataclass(frozen=True)
class Mq:
    char: int


@dataclass(frozen=True)
class Eq:
    predicate: object


class ProtocolError(RuntimeError):
    """The caller and session stepped out of lockstep, or an answer
    contradicts something already recorded."""


class IntervalSession:
    def __init__(self, algebra: IntervalAlgebra):
        self.alg = algebra
        d = algebra.domain
        self._probes = [d.min] if d.min == d.max else [d.min, d.max]
        self.samples = {}
        self._pending = None       # char of an outstanding Mq
        self._awaiting_ce = False  # an Eq is outstanding
        self._hypothesis = None
        self.n_mqs = 0
        self.n_eqs = 0

    # -- protocol -----------------------------------------------------

    def next_action(self):
        if self._pending is not None:
            return Mq(self._pending)
        if self._awaiting_ce:
            return Eq(self._hypothesis)
        for c in self._probes:
            if c not in self.samples:
                self._pending = c
                return Mq(c)
        gaps = self._gaps()
        if gaps:
            lo, hi = gaps[0]
            self._pending = (lo + hi) // 2
            return Mq(self._pending)
        self._hypothesis = self._build()
        self._awaiting_ce = True
        self.n_eqs += 1
        return Eq(self._hypothesis)

    def answer_mq(self, value: bool):
        if self._pending is None:
            raise ProtocolError("no Mq outstanding")
        self.samples[self._pending] = bool(value)
        self._pending = None
        self.n_mqs += 1

    def provide_counterexample(self, a: int, value: bool):
        if not self._awaiting_ce:
            raise ProtocolError("no Eq outstanding")
        if a in self.samples:
            raise ProtocolError(f"character {a} was already sampled")
        if self.alg.member(self._hypothesis, a) == value:
            raise ProtocolError(f"{a} is consistent with the current hypothesis")
        self.samples[a] = bool(value)
        self._awaiting_ce = False

    def current_hypothesis(self):
        if self._hypothesis is None:
            raise ProtocolError("no Eq emitted yet")
        return self._hypothesis

    # -- internals ----------------------------------------------------

    def _gaps(self):
        """Adjacent samples of differing membership more than one apart;
        each hides at least one unresolved border."""
        pts = sorted(self.samples)
        return [
            (pts[k], pts[k + 1])
            for k in range(len(pts) - 1)
            if self.samples[pts[k]] != self.samples[pts[k + 1]] and pts[k + 1] - pts[k] > 1
        ]

    def _build(self):
        """Hypothesis from samples: every stretch between equal-valued
        neighbors is assumed constant.  Only valid once no gaps remain."""
        pts = sorted(self.samples)
        raw = []
        start = None
        for c in pts:
            if self.samples[c]:
                if start is None:
                    start = c
                end = c
            else:
                if start is not None:
                    raw.append((start, end))
                    start = None
        if start is not None:
            raw.append((start, end))
        hyp = self.alg.normalize(raw)
        assert all(self.alg.member(hyp, c) == v for c, v in self.samples.items())
        return hyp


class EnumerationSession:
    """Exact learner over a finite alphabet: one probe per character."""

    def __init__(self, algebra: FiniteSetAlgebra):
        self.alg = algebra
        self._todo = list(algebra.chars())
        self.samples = {}
        self._pending = None
        self._awaiting_ce = False
        self._hypothesis = None
        self.n_mqs = 0
        self.n_eqs = 0

    def next_action(self):
        if self._pending is not None:
            return Mq(self._pending)
        if self._awaiting_ce:
            return Eq(self._hypothesis)
        if self._todo:
            self._pending = self._todo[0]
            return Mq(self._pending)
        self._hypothesis = frozenset(c for c, v in self.samples.items() if v)
        self._awaiting_ce = True
        self.n_eqs += 1
        return Eq(self._hypothesis)

    def answer_mq(self, value: bool):
        if self._pending is None:
            raise ProtocolError("no Mq outstanding")
        self.samples[self._pending] = bool(value)
        self._todo.remove(self._pending)
        self._pending = None
        self.n_mqs += 1

    def provide_counterexample(self, a: int, value: bool):
        raise ProtocolError(
            "exact enumeration cannot be wrong; a counterexample signals a caller bug"
        )

    def current_hypothesis(self):
        if self._hypothesis is None:
            raise ProtocolError("no Eq emitted yet")
        return self._hypothesis
