"""Effective Boolean algebras over character alphabets.

Two concrete instances are provided:

* :class:`IntervalAlgebra` -- unions of closed integer intervals over a
  bounded domain (the inequality algebra; predicates are the canonical
  normal form of unions of ``l <= X <= r`` intervals).
* :class:`FiniteSetAlgebra` -- plain character sets over a tiny
  enumerable alphabet, mainly useful for driving the learner in
  non-symbolic (NFA-style) mode.

Predicates are immutable values: a tuple of ``(lo, hi)`` pairs for the
interval algebra, a frozenset of characters for the finite-set algebra.
Equality of normalized predicates is structural.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Iterable, Optional


@dataclass(frozen=True)
class Domain:
    """Closed integer range [min, max]."""

    min: int
    max: int

    def __post_init__(self):
        if self.min > self.max:
            raise ValueError(f"empty domain [{self.min}, {self.max}]")

    @property
    def size(self) -> int:
        return self.max - self.min + 1

    def contains(self, a: int) -> bool:
        return self.min <= a <= self.max

    def to_json(self) -> dict:
        return {"min": self.min, "max": self.max}

    @classmethod
    def from_json(cls, obj: dict) -> "Domain":
        return cls(int(obj["min"]), int(obj["max"]))


#: The paper-scale experiment domain: all 32-bit integers.
INT32 = Domain(-(2 ** 31), 2 ** 31 - 1)

IntervalPredicate = tuple  # tuple of (lo, hi) pairs


class BooleanAlgebra(ABC):
    """Contract every algebra instance satisfies.

    Predicate representations are opaque to callers; all manipulation
    goes through these operations.  ``is_empty`` and ``witness`` are
    total and terminating; ``witness`` returns the smallest element of a
    nonempty denotation so runs are reproducible.
    """

    @abstractmethod
    def bot(self): ...

    @abstractmethod
    def top(self): ...

    @abstractmethod
    def and_(self, a, b): ...

    @abstractmethod
    def or_(self, a, b): ...

    @abstractmethod
    def not_(self, a): ...

    @abstractmethod
    def member(self, p, a: int) -> bool: ...

    @abstractmethod
    def is_empty(self, p) -> bool: ...

    @abstractmethod
    def witness(self, p) -> Optional[int]:
        """Smallest element of the denotation, or None if empty."""

    def combine(self, op: str, a, b=None):
        """Dispatch ``and``/``or``/``not`` by name."""
        if op == "not":
            if b is not None:
                raise ValueError("'not' takes a single operand")
            return self.not_(a)
        if b is None:
            raise ValueError(f"'{op}' takes two operands")
        if op == "and":
            return self.and_(a, b)
        if op == "or":
            return self.or_(a, b)
        raise ValueError(f"unknown operation {op!r}")


class IntervalAlgebra(BooleanAlgebra):
    """Unions of disjoint, non-adjacent closed intervals over a Domain.

    Canonical form: intervals sorted ascending, each ``lo <= hi``, and a
    gap of at least 2 between consecutive intervals (touching intervals
    are merged).  The empty tuple is bottom; ``((min, max),)`` is top.
    """

    def __init__(self, domain: Domain):
        self.domain = domain

    def bot(self) -> IntervalPredicate:
        return ()

    def top(self) -> IntervalPredicate:
        return ((self.domain.min, self.domain.max),)

    def interval(self, lo: int, hi: int) -> IntervalPredicate:
        return self.normalize([(lo, hi)])

    def normalize(self, raw: Iterable) -> IntervalPredicate:
        """Canonicalize a list of (lo, hi) pairs with the same denotation."""
        pairs = []
        for lo, hi in raw:
            if lo > hi:
                raise ValueError(f"interval ({lo}, {hi}) has lo > hi")
            if not (self.domain.contains(lo) and self.domain.contains(hi)):
                raise ValueError(f"interval ({lo}, {hi}) outside domain")
            pairs.append((int(lo), int(hi)))
        pairs.sort()
        merged = []
        for lo, hi in pairs:
            if merged and lo <= merged[-1][1] + 1:
                merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
            else:
                merged.append((lo, hi))
        return tuple(merged)

    def _check(self, p: IntervalPredicate) -> IntervalPredicate:
        if p and (p[0][0] < self.domain.min or p[-1][1] > self.domain.max):
            raise ValueError("predicate endpoints outside this algebra's domain")
        return p

    def and_(self, a, b) -> IntervalPredicate:
        if not a or not b:
            return ()
        self._check(a), self._check(b)
        out = []
        i = j = 0
        while i < len(a) and j < len(b):
            lo = max(a[i][0], b[j][0])
            hi = min(a[i][1], b[j][1])
            if lo <= hi:
                out.append((lo, hi))
            if a[i][1] < b[j][1]:
                i += 1
            else:
                j += 1
        return tuple(out)

    def or_(self, a, b) -> IntervalPredicate:
        self._check(a), self._check(b)
        return self.normalize(list(a) + list(b))

    def not_(self, a) -> IntervalPredicate:
        self._check(a)
        out = []
        cursor = self.domain.min
        for lo, hi in a:
            if cursor < lo:
                out.append((cursor, lo - 1))
            cursor = hi + 1
        if cursor <= self.domain.max:
            out.append((cursor, self.domain.max))
        return tuple(out)

    def member(self, p, a: int) -> bool:
        d = self.domain
        if a < d.min or a > d.max:
            raise ValueError(f"character {a} outside domain")
        for lo, hi in p:  # pairs sorted ascending, so exit early
            if a < lo:
                return False
            if a <= hi:
                return True
        return False

    def is_empty(self, p) -> bool:
        return not p

    def witness(self, p) -> Optional[int]:
        return p[0][0] if p else None

    def chars(self) -> range:
        """All characters, for exhaustive checks on small domains only."""
        if self.domain.size > 1 << 20:
            raise ValueError("domain too large to enumerate")
        return range(self.domain.min, self.domain.max + 1)

    @staticmethod
    def pred_to_json(p: IntervalPredicate) -> list:
        return [[lo, hi] for lo, hi in p]

    def pred_from_json(self, obj: list) -> IntervalPredicate:
        return self.normalize([(int(lo), int(hi)) for lo, hi in obj])


class FiniteSetAlgebra(BooleanAlgebra):
    """Character-set algebra over a small explicit alphabet."""

    def __init__(self, alphabet: Iterable[int]):
        self.alphabet = tuple(sorted(set(alphabet)))
        if not self.alphabet:
            raise ValueError("empty alphabet")
        self._all = frozenset(self.alphabet)

    def bot(self):
        return frozenset()

    def top(self):
        return self._all

    def and_(self, a, b):
        return a & b

    def or_(self, a, b):
        return a | b

    def not_(self, a):
        return self._all - a

    def member(self, p, a: int) -> bool:
        if a not in self._all:
            raise ValueError(f"character {a} outside alphabet")
        return a in p

    def is_empty(self, p) -> bool:
        return not p

    def witness(self, p) -> Optional[int]:
        return min(p) if p else None

    def chars(self):
        return self.alphabet
