"""Baseline learner for deterministic SFAs.

States are access strings deduplicated by their signature under a
growing set of distinguishing suffixes; one predicate session per
ordered state pair learns each transition predicate, with the learner
mediating between the sessions and the real teacher.  Before every
equivalence query the outgoing predicates of each state are repaired
until they are pairwise disjoint and cover the domain.  Counterexamples
are split with the classic prefix binary search.
"""

from __future__ import annotations

from typing import Callable, Dict, List, Optional, Tuple

from .automata import Sfa
from .learner import GuardExceeded, RunOutcome, _lenlex
from .predlearn import Eq, IntervalSession, Mq
from .teacher import Teacher

String = Tuple[int, ...]

_RESTART = "restart"
_REPAIRED = "repaired"
_DONE = "done"


class DsfaLearner:
    def __init__(
        self,
        teacher: Teacher,
        algebra,
        session_factory: Callable = IntervalSession,
        max_events: int = 50_000_000,
    ):
        self.teacher = teacher
        self.alg = algebra
        self.session_factory = session_factory
        self.max_events = max_events
        self._budget = max_events
        self.events: List[str] = []
        self.pool: List[String] = [()]      # candidate access strings
        self.suffixes: List[String] = [()]  # distinguishing set, epsilon first
        self._sigs: Dict[String, Tuple[bool, ...]] = {}
        self._state_by_sig: Dict[Tuple[bool, ...], String] = {}
        self.states: List[String] = []
        self.edges: Dict[Tuple[String, String], object] = {}
        self.sessions: Dict[Tuple[String, String], object] = {}

    def _log(self, event: str, kind: str, payload: str = ""):
        self.events.append(f"{event}\t{kind}\t{payload}")

    def _tick(self):
        self._budget -= 1
        if self._budget <= 0:
            raise GuardExceeded(f"exceeded {self.max_events} learner events")

    # -- signatures -------------------------------------------------------

    def _sig(self, u: String) -> Tuple[bool, ...]:
        if u not in self._sigs:
            mq = self.teacher.mq
            self._sigs[u] = tuple(mq(u + v) for v in self.suffixes)
        return self._sigs[u]

    def _state_for(self, u: String) -> Optional[String]:
        return self._state_by_sig.get(self._sig(u))

    def _discover(self, u: String):
        """u's signature matches no current state: it is a new access
        string; everything restarts with fresh sessions."""
        if u not in self.pool:
            self.pool.append(u)
            self._log("extension", "access-string", repr(u))

    def _grow_suffixes(self, v: String):
        if v not in self.suffixes:
            self.suffixes.append(v)
            self._sigs.clear()
            # session answers compare signatures, so they are only valid
            # while the distinguishing set is fixed
            self.sessions = {}
            self.teacher.note_extension()
            self._log("extension", "suffix", repr(v))

    # -- session plumbing ---------------------------------------------------

    def _run_session(self, q: String, q2: String) -> str:
        session = self.sessions[(q, q2)]
        while True:
            self._tick()
            act = session.next_action()
            if isinstance(act, Mq):
                target = self._state_for(q + (act.char,))
                if target is None:
                    self._discover(q + (act.char,))
                    return _RESTART
                session.answer_mq(target == q2)
            else:
                assert isinstance(act, Eq)
                self.edges[(q, q2)] = act.predicate
                return _DONE

    def _build(self) -> str:
        reps: Dict[Tuple[bool, ...], String] = {}
        for u in sorted(self.pool, key=_lenlex):
            reps.setdefault(self._sig(u), u)
        self.states = sorted(reps.values(), key=_lenlex)
        self._state_by_sig = reps
        self.edges = {}
        # Growing the pool never changes an existing state's signature or
        # its length-lex representative, so sessions for surviving pairs
        # stay consistent and are kept across these restarts.
        for q in self.states:
            for q2 in self.states:
                if (q, q2) not in self.sessions:
                    self.sessions[(q, q2)] = self.session_factory(self.alg)
                if self._run_session(q, q2) == _RESTART:
                    return _RESTART
        return _DONE

    # -- determinism repair ---------------------------------------------------

    def _repair_partition(self) -> str:
        """Make every state's outgoing predicates pairwise disjoint and
        jointly covering, feeding counterexamples to the offending
        sessions; restarts when a probe reveals an unknown signature.
        Repairs only touch the scanned state's own sessions, so each
        state is driven to a fixed point independently."""
        for q in self.states:
            if self._repair_state(q) == _RESTART:
                return _RESTART
        return _DONE

    def _repair_state(self, q: String) -> str:
        alg = self.alg
        while True:
            self._tick()
            cover = alg.bot()
            conflict = None  # (char, wrongly-claiming pair) on overlap
            for q2 in self.states:
                p = self.edges[(q, q2)]
                if alg.is_empty(p):
                    continue
                overlap = alg.and_(cover, p)
                if not alg.is_empty(overlap):
                    a = alg.witness(overlap)
                    qa = next(
                        r for r in self.states
                        if r != q2 and alg.member(self.edges[(q, r)], a)
                    )
                    conflict = (a, qa, q2)
                    break
                cover = alg.or_(cover, p)
            if conflict is not None:
                a, qa, qb = conflict
                target = self._state_for(q + (a,))
                if target is None:
                    self._discover(q + (a,))
                    return _RESTART
                for wrong in (qa, qb):
                    if wrong != target:
                        self.sessions[(q, wrong)].provide_counterexample(a, False)
                        if self._run_session(q, wrong) == _RESTART:
                            return _RESTART
                continue
            hole = alg.not_(cover)
            if alg.is_empty(hole):
                return _DONE
            a = alg.witness(hole)
            target = self._state_for(q + (a,))
            if target is None:
                self._discover(q + (a,))
                return _RESTART
            self.sessions[(q, target)].provide_counterexample(a, True)
            if self._run_session(q, target) == _RESTART:
                return _RESTART

    # -- hypothesis -----------------------------------------------------------

    def _hyp_sfa(self) -> Sfa:
        idx = {q: k for k, q in enumerate(self.states)}
        start = self._state_for(())
        edges = {
            (idx[q], idx[q2]): p
            for (q, q2), p in self.edges.items()
            if not self.alg.is_empty(p)
        }
        final = frozenset(idx[q] for q in self.states if self._sig(q)[0])
        return Sfa(self.alg, len(self.states), frozenset([idx[start]]), final, edges)

    def _delta(self, q: String, a: int) -> String:
        for q2 in self.states:
            if self.alg.member(self.edges[(q, q2)], a):
                return q2
        raise AssertionError("incomplete hypothesis after repair")

    # -- counterexample ---------------------------------------------------------

    def _process_counterexample(self, w: String) -> str:
        mq = self.teacher.mq
        path = [()]
        state = self._state_for(())
        states_on_path = [state]
        for a in w:
            state = self._delta(state, a)
            states_on_path.append(state)

        def h(k: int) -> bool:
            return mq(states_on_path[k] + w[k:])

        h0 = h(0)
        assert h0 != h(len(w))
        lo, hi = 0, len(w)
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if h(mid) == h0:
                lo = mid
            else:
                hi = mid
        q, a, v = states_on_path[lo], w[lo], w[lo + 1:]
        q_next = states_on_path[lo + 1]
        t = q + (a,)
        if self._sig(t) != self._sig(q_next):
            # the transition target is simply wrong under the current suffixes
            self.sessions[(q, q_next)].provide_counterexample(a, False)
            if self._run_session(q, q_next) == _RESTART:
                return _RESTART
            return _REPAIRED
        # current suffixes cannot tell t from its target; v can
        self._grow_suffixes(v)
        self._discover(t)
        return _RESTART

    # -- main loop -----------------------------------------------------------------

    def learn(self) -> RunOutcome:
        while True:
            self._tick()
            if self._build() == _RESTART:
                continue
            restart = False
            while not restart:
                self._tick()
                if self._repair_partition() == _RESTART:
                    restart = True
                    break
                hyp = self._hyp_sfa()
                self._log("EQ", "ask", f"states={hyp.n_states}")
                w = self.teacher.eq(hyp)
                if w is None:
                    return RunOutcome(
                        sfa=hyp,
                        state_labels=list(self.states),
                        stats=self.teacher.stats(),
                        table_u=len(self.pool),
                        table_v=len(self.suffixes),
                        events=list(self.events),
                    )
                self._log("EQ", "counterexample", ",".join(map(str, w)))
                if self._process_counterexample(tuple(w)) == _RESTART:
                    restart = True
