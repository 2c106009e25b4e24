"""Observation table (U, V, T): prefix-closed row labels U, column
suffixes V with epsilon always present (V need not be suffix-closed),
and a total membership map T over U.V filled through membership queries.

Rows are represented as frozensets of the suffixes answered positively,
which keeps them stable as V grows; subset tests are set inclusion.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, FrozenSet, Iterable, List, Optional, Set, Tuple

String = Tuple[int, ...]
Row = FrozenSet[String]

EPSILON: String = ()


class StallError(RuntimeError):
    """An extension that was required to be strict turned out a no-op."""


@dataclass(frozen=True)
class MeasureTuple:
    """Progress measures from the termination argument.

    l_u and p are always available; l and i require enumerating the
    alphabet (finite-algebra mode) and are None otherwise.
    """

    l_u: int
    p: int
    l: Optional[int] = None
    i: Optional[int] = None


def prime_rows_of(rows: Iterable[Row]) -> Set[Row]:
    """Rows not equal to the union of the rows they strictly contain.
    The empty row is never prime (it equals the empty union)."""
    distinct = set(rows)
    out = set()
    for r in distinct:
        union: FrozenSet = frozenset()
        for r2 in distinct:
            if r2 < r:
                union = union | r2
        if r != union:
            out.add(r)
    return out


class ObservationTable:
    def __init__(self, mq: Callable[[String], bool]):
        self._mq = mq
        self.prefixes: List[String] = [EPSILON]
        self.suffixes: List[String] = [EPSILON]
        self.cells = {}
        self.version = 0
        self._row_cache = {}
        self._row_cache_version = -1
        self.fill()

    def fill(self):
        """Make T total on U.V; already-filled cells are never re-asked."""
        for u in self.prefixes:
            for v in self.suffixes:
                w = u + v
                if w not in self.cells:
                    self.cells[w] = self._mq(w)

    def row(self, u: String) -> Row:
        if self._row_cache_version != self.version:
            self._row_cache = {}
            self._row_cache_version = self.version
        cached = self._row_cache.get(u)
        if cached is not None:
            return cached
        if u not in self.prefixes:
            raise KeyError(f"{u!r} not a row label")
        r = frozenset(v for v in self.suffixes if self.cells[u + v])
        self._row_cache[u] = r
        return r

    def rows(self) -> List[Row]:
        return [self.row(u) for u in self.prefixes]

    def distinct_rows(self) -> Set[Row]:
        key = ("distinct", None)
        if self._row_cache_version != self.version or key not in self._row_cache:
            distinct = set(self.rows())
            self._row_cache[key] = distinct
        return self._row_cache[key]

    def prime_rows(self) -> Set[Row]:
        key = ("primes", None)
        if self._row_cache_version != self.version or key not in self._row_cache:
            primes = prime_rows_of(self.distinct_rows())
            self._row_cache[key] = primes
        return self._row_cache[key]

    def is_new_prime(self, temp_row: Row) -> bool:
        """Would temp_row be a prime the table does not yet represent?

        Equivalent to "temp_row is prime among rows() | {temp_row} and is
        not already a row": adding a single row only affects its own
        primality through the rows strictly contained in it, which all
        come from the existing table.
        """
        rows = self.distinct_rows()
        if temp_row in rows:
            return False
        union: FrozenSet = frozenset()
        for r2 in rows:
            if r2 < temp_row:
                union = union | r2
        return temp_row != union

    def add_prefix(self, u: String) -> bool:
        """Insert u into U (prefix-closure required).  Returns False for
        a duplicate no-op so callers can detect stalls."""
        if u in self.prefixes:
            return False
        if u[:-1] not in self.prefixes:
            raise ValueError(f"adding {u!r} would break prefix-closure")
        self.prefixes.append(u)
        self.version += 1
        self.fill()
        return True

    def add_suffix(self, v: String) -> bool:
        if v in self.suffixes:
            return False
        self.suffixes.append(v)
        self.version += 1
        self.fill()
        return True

    def measure(self, mode: str = "light", alphabet: Optional[Iterable[int]] = None) -> MeasureTuple:
        distinct = self.distinct_rows()
        l_u = len(distinct)
        p = len(prime_rows_of(distinct))
        if mode == "light":
            return MeasureTuple(l_u=l_u, p=p)
        if mode != "full":
            raise ValueError(f"unknown measure mode {mode!r}")
        if alphabet is None:
            raise ValueError("full mode needs an enumerable alphabet")
        alphabet = list(alphabet)
        if len(alphabet) > 256:
            raise ValueError("alphabet too large for full measures")
        big: Set[Row] = set()
        for u in self.prefixes:
            big.add(self.row(u))
            for a in alphabet:
                big.add(frozenset(v for v in self.suffixes if self._mq(u + (a,) + v)))
        i = sum(1 for r in big for r2 in big if r < r2)
        return MeasureTuple(l_u=l_u, p=p, l=len(big), i=i)

    def dump_tsv(self) -> str:
        """Debug dump: U rows, V columns, +/- cells."""

        def show(s: String) -> str:
            return "." if not s else ",".join(map(str, s))

        lines = ["\t".join([""] + [show(v) for v in self.suffixes])]
        for u in self.prefixes:
            cells = ["+" if self.cells[u + v] else "-" for v in self.suffixes]
            lines.append("\t".join([show(u)] + cells))
        return "\n".join(lines)
