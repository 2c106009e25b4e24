"""Query learner producing residual SFAs.

The learner keeps an observation table and one suspended predicate
learning session per ordered pair of hypothesis states.  A hypothesis is
built from the prime rows of the table, checked against three
admissibility conditions before each equivalence query, and the table or
the transition predicates are repaired when a check or a counterexample
shows a defect.  Whenever the table grows, the hypothesis (and all
sessions) are rebuilt from scratch.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, List, Optional, Tuple

from .automata import Sfa
from .predlearn import Eq, IntervalSession, Mq
from .table import EPSILON, MeasureTuple, ObservationTable, StallError
from .teacher import QueryStats, Teacher

String = Tuple[int, ...]

#: sentinel distinguishing "table changed, rebuild" from a usable hypothesis
NULL = None


class GuardExceeded(RuntimeError):
    """An iteration guard tripped; indicates a non-termination bug."""


@dataclass
class Hypothesis:
    """States are their representative row labels (strings in U)."""

    states: List[String]
    initial: FrozenSet[String]
    final: FrozenSet[String]
    edges: Dict[Tuple[String, String], object]
    sessions: Dict[Tuple[String, String], object]


@dataclass
class RunOutcome:
    sfa: Sfa
    state_labels: List[String]
    stats: QueryStats
    table_u: int
    table_v: int
    measures: List[MeasureTuple] = field(default_factory=list)
    events: List[str] = field(default_factory=list)


def _lenlex(s: String):
    return (len(s), s)


class RsfaLearner:
    def __init__(
        self,
        teacher: Teacher,
        algebra,
        session_factory: Callable = IntervalSession,
        max_events: int = 50_000_000,
        audit_searches: bool = False,
        measure_mode: str = "off",
    ):
        self.teacher = teacher
        self.alg = algebra
        self.session_factory = session_factory
        self.max_events = max_events
        self.audit_searches = audit_searches
        self.measure_mode = measure_mode
        self.events: List[str] = []
        self.measures: List[MeasureTuple] = []
        self.table = ObservationTable(teacher.mq)
        self._temp_rows = {}
        self._budget = max_events

    # -- bookkeeping ----------------------------------------------------

    def _log(self, event: str, kind: str, payload: str = ""):
        self.events.append(f"{event}\t{kind}\t{payload}")

    def _tick(self):
        self._budget -= 1
        if self._budget <= 0:
            raise GuardExceeded(f"exceeded {self.max_events} learner events")

    def _record_measure(self):
        if self.measure_mode == "off":
            return
        alphabet = self.alg.chars() if self.measure_mode == "full" else None
        self.measures.append(self.table.measure(self.measure_mode, alphabet))

    def _extend(self, prefix: Optional[String] = None, suffix: Optional[String] = None):
        grew = False
        if prefix is not None:
            grew |= self.table.add_prefix(prefix)
        if suffix is not None:
            grew |= self.table.add_suffix(suffix)
        if not grew:
            raise StallError(f"no-op extension prefix={prefix!r} suffix={suffix!r}")
        self.teacher.note_extension()
        self._temp_rows.clear()
        self._record_measure()
        self._log("extension", "table", f"prefix={prefix!r} suffix={suffix!r}")

    def _temp_row(self, q: String, a: int) -> FrozenSet[String]:
        key = (q, a)
        if key not in self._temp_rows:
            mq = self.teacher.mq
            self._temp_rows[key] = frozenset(
                v for v in self.table.suffixes if mq(q + (a,) + v)
            )
        return self._temp_rows[key]

    # -- hypothesis construction -----------------------------------------

    def build_hypothesis(self) -> Optional[Hypothesis]:
        t = self.table
        primes = t.prime_rows()
        reps = {}
        for u in sorted(t.prefixes, key=_lenlex):
            r = t.row(u)
            if r in primes and r not in reps:
                reps[r] = u
        states = sorted(reps.values(), key=_lenlex)
        row_eps = t.row(EPSILON)
        h = Hypothesis(
            states=states,
            initial=frozenset(q for q in states if t.row(q) <= row_eps),
            final=frozenset(q for q in states if EPSILON in t.row(q)),
            edges={},
            sessions={},
        )
        for q in states:
            for q2 in states:
                s = self.session_factory(self.alg)
                h.sessions[(q, q2)] = s
                if self.update_transition(q, q2, s, h) is NULL:
                    return NULL
        return h

    def update_transition(self, q: String, q2: String, session, h: Hypothesis):
        """Drive one predicate session until its next Eq installs the
        (q, q2) predicate, or a probe surfaces a new prime row (the table
        is then extended and NULL returned)."""
        t = self.table
        while True:
            self._tick()
            act = session.next_action()
            if isinstance(act, Mq):
                a = act.char
                temp = self._temp_row(q, a)
                if t.is_new_prime(temp):
                    self._extend(prefix=q + (a,))
                    return NULL
                session.answer_mq(t.row(q2) <= temp)
            else:
                assert isinstance(act, Eq)
                h.edges[(q, q2)] = act.predicate
                self._log("repair", "transition", f"q={q!r} q2={q2!r}")
                return h

    # -- hypothesis as an automaton ---------------------------------------

    def to_sfa(self, h: Hypothesis) -> Sfa:
        idx = {q: k for k, q in enumerate(h.states)}
        edges = {
            (idx[q], idx[q2]): p
            for (q, q2), p in h.edges.items()
            if not self.alg.is_empty(p)
        }
        return Sfa(
            self.alg,
            len(h.states),
            frozenset(idx[q] for q in h.initial),
            frozenset(idx[q] for q in h.final),
            edges,
        )

    def _edge(self, h: Hypothesis, q: String, q2: String):
        return h.edges.get((q, q2), self.alg.bot())

    def _step(self, h: Hypothesis, qs, a: int) -> FrozenSet[String]:
        return frozenset(
            q2
            for q in qs
            for q2 in h.states
            if self.alg.member(self._edge(h, q, q2), a)
        )

    def _run(self, h: Hypothesis, qs, w: String) -> FrozenSet[String]:
        cur = frozenset(qs)
        for a in w:
            cur = self._step(h, cur, a)
        return cur

    def _accepts_from(self, h: Hypothesis, q: String, w: String) -> bool:
        return bool(self._run(h, [q], w) & h.final)

    # -- condition confirmation -------------------------------------------

    def confirm_conditions(self, h: Optional[Hypothesis]) -> Optional[Hypothesis]:
        if h is NULL:
            return NULL
        while True:
            self._tick()
            outcome = self._scan_conditions(h)
            if outcome == "clean":
                return h
            if outcome == "null":
                return NULL
            # "repaired": rescan from Condition 1

    def _scan_conditions(self, h: Hypothesis) -> str:
        t, alg, mq = self.table, self.alg, self.teacher.mq

        # Condition 1: row(q) <= row(q2) must imply edge(q, x) <= edge(q2, x).
        for q in h.states:
            for q2 in h.states:
                if not t.row(q) <= t.row(q2):
                    continue
                for x in h.states:
                    gap = alg.and_(self._edge(h, q, x), alg.not_(self._edge(h, q2, x)))
                    if alg.is_empty(gap):
                        continue
                    a = alg.witness(gap)
                    if not t.row(x) <= self._temp_row(q, a):
                        self._log("condition-violation", "1", f"q={q!r} x={x!r} a={a}")
                        h.sessions[(q, x)].provide_counterexample(a, False)
                        return self._after_repair(q, x, h)
                    if t.row(x) <= self._temp_row(q2, a):
                        self._log("condition-violation", "1", f"q'={q2!r} x={x!r} a={a}")
                        h.sessions[(q2, x)].provide_counterexample(a, True)
                        return self._after_repair(q2, x, h)
                    v = next(
                        v for v in t.suffixes
                        if v in t.row(x) and v not in self._temp_row(q2, a)
                    )
                    self._log("condition-violation", "1", f"suffix a={a}")
                    self._extend(suffix=(a,) + v)
                    return "null"

        # Condition 2: reading u from the initial states only reaches
        # states whose rows are below row(u).
        for u in sorted(t.prefixes, key=_lenlex):
            if u == EPSILON:
                continue
            reached = self._run(h, h.initial, u)
            for x in sorted(reached, key=_lenlex):
                if t.row(x) <= t.row(u):
                    continue
                u0, a = u[:-1], u[-1]
                prev = self._run(h, h.initial, u0)
                x1 = next(
                    p for p in sorted(prev, key=_lenlex)
                    if alg.member(self._edge(h, p, x), a)
                )
                if not t.row(x) <= self._temp_row(x1, a):
                    self._log("condition-violation", "2", f"u={u!r} x={x!r}")
                    h.sessions[(x1, x)].provide_counterexample(a, False)
                    return self._after_repair(x1, x, h)
                v = next(
                    v for v in self._temp_row(x1, a) if v not in t.row(u)
                )
                self._log("condition-violation", "2", f"suffix a={a}")
                self._extend(suffix=(a,) + v)
                return "null"

        # Condition 3: membership of each suffix v in a state's row must
        # match membership in the state's hypothesis language.
        for v in t.suffixes:
            if v == EPSILON:
                continue
            bad = any(
                (v in t.row(q)) != self._accepts_from(h, q, v) for q in h.states
            )
            if not bad:
                continue
            a, v1, q2 = self.find_bad_suffix(v, h)
            temp = self._temp_row(q2, a)
            succ = self._step(h, [q2], a)
            for q3 in h.states:
                if (t.row(q3) <= temp) == (q3 not in succ):
                    value = t.row(q3) <= temp
                    self._log("condition-violation", "3", f"q2={q2!r} q3={q3!r} a={a}")
                    h.sessions[(q2, q3)].provide_counterexample(a, value)
                    return self._after_repair(q2, q3, h)
            u_match = any(
                t.row(u) == temp and mq(u + v1) for u in t.prefixes
            )
            self._log("condition-violation", "3", f"suffix v'={v1!r}")
            if not mq(q2 + (a,) + v1) or u_match:
                self._extend(suffix=v1)
            else:
                self._extend(prefix=q2 + (a,), suffix=v1)
            return "null"

        return "clean"

    def _after_repair(self, q: String, q2: String, h: Hypothesis) -> str:
        result = self.update_transition(q, q2, h.sessions[(q, q2)], h)
        return "null" if result is NULL else "repaired"

    # -- binary searches ---------------------------------------------------

    def _suffix_consistent(self, h: Hypothesis, x: String) -> bool:
        mq = self.teacher.mq
        return all(mq(q + x) == self._accepts_from(h, q, x) for q in h.states)

    def find_bad_suffix(self, v: String, h: Hypothesis) -> Tuple[int, String, String]:
        """Binary search over the suffixes of v for a split a.v' where
        every state agrees on v' but some state q2 disagrees on a.v'."""
        mq = self.teacher.mq
        assert not self._suffix_consistent(h, v)
        lo, hi = 0, len(v)  # consistency fails at v[lo:], holds at v[hi:]
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self._suffix_consistent(h, v[mid:]):
                hi = mid
            else:
                lo = mid
        a, v1 = v[lo], v[lo + 1:]
        q2 = next(
            q for q in h.states
            if mq(q + v[lo:]) != self._accepts_from(h, q, v[lo:])
        )
        assert self._suffix_consistent(h, v1)
        assert mq(q2 + (a,) + v1) != self._accepts_from(h, q2, (a,) + v1)
        if self.audit_searches:
            valid = [
                k for k in range(len(v))
                if not self._suffix_consistent(h, v[k:])
                and self._suffix_consistent(h, v[k + 1:])
            ]
            assert lo in valid, f"binary search found {lo}, oracle allows {valid}"
        return a, v1, q2

    def decompose_counterexample(self, w: String, h: Hypothesis) -> Tuple[String, int, String]:
        """Binary search over split positions of w for u.a.v where the
        frontier disagreement flips between reading a symbolically and
        via the table rows."""
        mq = self.teacher.mq

        def g(k: int) -> bool:
            frontier = self._run(h, h.initial, w[:k])
            return any(mq(q + w[k:]) for q in frontier)

        g0 = g(0)
        assert g0 != g(len(w))
        lo, hi = 0, len(w)  # g(lo) == g0, g(hi) != g0
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if g(mid) == g0:
                lo = mid
            else:
                hi = mid
        u, a, v = w[:lo], w[lo], w[lo + 1:]
        assert g(lo) != g(lo + 1)
        if self.audit_searches:
            valid = [k for k in range(len(w)) if g(k) != g(k + 1)]
            assert lo in valid, f"binary search found {lo}, oracle allows {valid}"
        return u, a, v

    # -- counterexample processing ------------------------------------------

    def process_counterexample(self, h: Hypothesis, w: String) -> Optional[Hypothesis]:
        t, mq = self.table, self.teacher.mq
        if any(mq(q + w) for q in h.initial) != mq(w):
            self._extend(suffix=w)
            return NULL
        u, a, v = self.decompose_counterexample(w, h)
        frontier = sorted(self._run(h, h.initial, u), key=_lenlex)
        positives = [q for q in frontier if mq(q + (a,) + v)]
        if positives:
            q = positives[0]
            temp = self._temp_row(q, a)
            succ = self._step(h, [q], a)
            for q2 in h.states:
                if t.row(q2) <= temp and q2 not in succ:
                    h.sessions[(q, q2)].provide_counterexample(a, True)
                    result = self.update_transition(q, q2, h.sessions[(q, q2)], h)
                    return result
            if any(t.row(u1) == temp and mq(u1 + v) for u1 in t.prefixes):
                self._extend(suffix=v)
            else:
                self._extend(prefix=q + (a,), suffix=v)
            return NULL
        # every MQ(q.a.v) over the frontier is negative, so some successor
        # q' reached on a accepts v
        for q in frontier:
            for q2 in sorted(self._step(h, [q], a), key=_lenlex):
                if mq(q2 + v):
                    if not t.row(q2) <= self._temp_row(q, a):
                        h.sessions[(q, q2)].provide_counterexample(a, False)
                        return self.update_transition(q, q2, h.sessions[(q, q2)], h)
                    self._extend(suffix=v)
                    return NULL
        raise AssertionError("counterexample decomposition yielded no branch")

    # -- main loop -------------------------------------------------------

    def learn(self) -> RunOutcome:
        self._record_measure()
        h: Optional[Hypothesis] = NULL
        while True:
            self._tick()
            while h is NULL:
                self._tick()
                h = self.build_hypothesis()
                h = self.confirm_conditions(h)
            sfa = self.to_sfa(h)
            self._log("EQ", "ask", f"states={sfa.n_states}")
            w = self.teacher.eq(sfa)
            if w is None:
                return RunOutcome(
                    sfa=sfa,
                    state_labels=list(h.states),
                    stats=self.teacher.stats(),
                    table_u=len(self.table.prefixes),
                    table_v=len(self.table.suffixes),
                    measures=list(self.measures),
                    events=list(self.events),
                )
            self._log("EQ", "counterexample", ",".join(map(str, w)))
            h = self.process_counterexample(h, tuple(w))
            h = self.confirm_conditions(h)
