"""Simulated minimally adequate teacher over a target SFA.

Membership is answered by simulating the target and cached so repeated
strings count once in the deduplicated tally.  Equivalence is answered
by `diff_witness` against the minimized target, which yields shortest
counterexamples with a minimum-character tie-break, so identical query
sequences always produce identical answers.
"""

from __future__ import annotations

import copy
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

from .algebra import IntervalAlgebra
from .automata import CapExceeded, DEFAULT_CAP, Sfa, determinize, diff_witness, minimize

String = Tuple[int, ...]


@dataclass
class QueryStats:
    eqs: int = 0
    mqs_raw: int = 0
    mqs_distinct: int = 0
    counterexample_lengths: List[int] = field(default_factory=list)
    table_extensions: int = 0

    def to_json(self) -> dict:
        return {
            "eqs": self.eqs,
            "mqs_raw": self.mqs_raw,
            "mqs_distinct": self.mqs_distinct,
            "counterexample_lengths": list(self.counterexample_lengths),
            "table_extensions": self.table_extensions,
        }


class Teacher:
    def __init__(self, target: Sfa, cap: int = DEFAULT_CAP):
        self.target = target
        self.cap = cap
        self._stats = QueryStats()
        self._cache = {}
        self._min_target: Optional[Sfa] = None
        self._accept: Optional[Callable[[Tuple[int, ...]], bool]] = None

    def minimal_target(self) -> Sfa:
        if self._min_target is None:
            self._min_target = minimize(determinize(self.target, self.cap))
        return self._min_target

    def mq(self, w: Sequence[int]) -> bool:
        w = tuple(w)
        self._stats.mqs_raw += 1
        if w not in self._cache:
            self._stats.mqs_distinct += 1
            if self._accept is None:
                self._accept = self._build_accept()
            self._cache[w] = self._accept(w)
        return self._cache[w]

    def _build_accept(self) -> Callable[[Tuple[int, ...]], bool]:
        """Membership evaluator for the target language.  Interval-algebra
        targets run on the minimized automaton with a binary search per
        character; anything else simulates the target directly."""
        if not isinstance(self.target.algebra, IntervalAlgebra):
            return self.target.accepts
        try:
            m = self.minimal_target()
        except CapExceeded:
            return self.target.accepts
        rows: List[List[Tuple[int, int, int]]] = []
        for q in range(m.n_states):
            row = sorted(
                (lo, hi, q2) for q2, p in m.out_edges(q) for lo, hi in p
            )
            rows.append(row)
        starts = [[t[0] for t in row] for row in rows]
        q0 = next(iter(m.initial))
        final = m.final

        def accept(w: Tuple[int, ...]) -> bool:
            q = q0
            for a in w:
                # deterministic and complete: exactly one interval holds a
                lo, hi, q2 = rows[q][bisect_right(starts[q], a) - 1]
                assert lo <= a <= hi
                q = q2
            return q in final

        return accept

    def eq(self, hyp: Sfa) -> Optional[String]:
        self._stats.eqs += 1
        w = diff_witness(hyp, self.minimal_target(), self.cap)
        if w is not None:
            self._stats.counterexample_lengths.append(len(w))
            assert self.mq(w) != hyp.accepts(w)
        return w

    def note_extension(self):
        self._stats.table_extensions += 1

    def stats(self) -> QueryStats:
        return copy.deepcopy(self._stats)
