"""Symbolic finite automata: simulation, determinization, minimization,
equivalence with witness, and residual-language analysis.

An :class:`Sfa` keeps at most one predicate per ordered state pair;
absent edges denote bottom.  All operations are pure; Sfa values are
immutable after construction.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .algebra import BooleanAlgebra, Domain, IntervalAlgebra

String = Tuple[int, ...]

DEFAULT_CAP = 4096


class CapExceeded(RuntimeError):
    """Subset construction grew past the configured state cap."""


@dataclass(frozen=True)
class Sfa:
    algebra: BooleanAlgebra
    n_states: int
    initial: FrozenSet[int]
    final: FrozenSet[int]
    edges: Dict[Tuple[int, int], object]

    def __post_init__(self):
        for q, q2 in self.edges:
            if not (0 <= q < self.n_states and 0 <= q2 < self.n_states):
                raise ValueError(f"edge ({q}, {q2}) references unknown state")
        adj: Dict[int, list] = {q: [] for q in range(self.n_states)}
        for (q, q2), p in self.edges.items():
            if not self.algebra.is_empty(p):
                adj[q].append((q2, p))
        object.__setattr__(self, "_adj", adj)

    def out_edges(self, q: int):
        if not 0 <= q < self.n_states:
            raise ValueError(f"unknown state {q}")
        return self._adj[q]

    def step(self, qs: Iterable[int], a: int) -> FrozenSet[int]:
        out = set()
        for q in qs:
            for q2, p in self.out_edges(q):
                if self.algebra.member(p, a):
                    out.add(q2)
        return frozenset(out)

    def run(self, qs: Iterable[int], w: Sequence[int]) -> FrozenSet[int]:
        cur = frozenset(qs)
        for a in w:
            cur = self.step(cur, a)
        return cur

    def accepts(self, w: Sequence[int]) -> bool:
        return bool(self.run(self.initial, w) & self.final)

    def accepts_from(self, q: int, w: Sequence[int]) -> bool:
        return bool(self.run([q], w) & self.final)

    def with_initial(self, qs: Iterable[int]) -> "Sfa":
        return Sfa(self.algebra, self.n_states, frozenset(qs), self.final, dict(self.edges))

    def is_deterministic_complete(self) -> bool:
        cached = getattr(self, "_det_complete", None)
        if cached is None:
            cached = self._compute_det_complete()
            object.__setattr__(self, "_det_complete", cached)
        return cached

    def _compute_det_complete(self) -> bool:
        if len(self.initial) != 1:
            return False
        alg = self.algebra
        for q in range(self.n_states):
            cover = alg.bot()
            for _, p in self.out_edges(q):
                if not alg.is_empty(alg.and_(cover, p)):
                    return False
                cover = alg.or_(cover, p)
            if not alg.is_empty(alg.not_(cover)):
                return False
        return True


def mintermize(algebra: BooleanAlgebra, preds: Iterable) -> List:
    """Partition the alphabet into nonempty blocks on which every input
    predicate is constant.  Blocks are ordered by smallest element."""
    blocks = [algebra.top()]
    for p in preds:
        nxt = []
        np = algebra.not_(p)
        for b in blocks:
            for piece in (algebra.and_(b, p), algebra.and_(b, np)):
                if not algebra.is_empty(piece):
                    nxt.append(piece)
        blocks = nxt
    blocks.sort(key=algebra.witness)
    return blocks


def determinize(m: Sfa, cap: int = DEFAULT_CAP) -> Sfa:
    """Subset construction; the result is deterministic and complete
    (the empty subset serves as an explicit dead state)."""
    alg = m.algebra
    start = frozenset(m.initial)
    index = {start: 0}
    order = [start]
    edges: Dict[Tuple[int, int], object] = {}
    queue = deque([start])
    minterm_cache: Dict[FrozenSet, List] = {}
    while queue:
        s = queue.popleft()
        si = index[s]
        preds = frozenset(p for q in s for _, p in m.out_edges(q))
        blocks = minterm_cache.get(preds)
        if blocks is None:
            blocks = minterm_cache[preds] = mintermize(alg, preds)
        for b in blocks:
            t = m.step(s, alg.witness(b))
            if t not in index:
                if len(index) >= cap:
                    raise CapExceeded(f"determinization exceeded {cap} states")
                index[t] = len(order)
                order.append(t)
                queue.append(t)
            key = (si, index[t])
            edges[key] = alg.or_(edges[key], b) if key in edges else b
    final = frozenset(i for s, i in index.items() if s & m.final)
    return Sfa(alg, len(order), frozenset([0]), final, edges)


def _require_det_complete(m: Sfa):
    if not m.is_deterministic_complete():
        raise ValueError("operation requires a deterministic complete SFA")


def _transition_table(m: Sfa) -> Tuple[List, List[List[int]]]:
    """Global minterms of all edge predicates plus the per-state successor
    for each block.  Input must be deterministic and complete."""
    alg = m.algebra
    blocks = mintermize(alg, list(m.edges.values()))
    table = []
    for q in range(m.n_states):
        row = []
        for b in blocks:
            a = alg.witness(b)
            succ = [q2 for q2, p in m.out_edges(q) if alg.member(p, a)]
            if len(succ) != 1:
                raise ValueError("non-deterministic or incomplete state")
            row.append(succ[0])
        table.append(row)
    return blocks, table


def minimize(m: Sfa) -> Sfa:
    """Moore minimization of a deterministic complete SFA.  The output
    state count equals the number of residual languages of L(m),
    counting the empty residual when reachable."""
    _require_det_complete(m)
    # restrict to the reachable part
    blocks, table = _transition_table(m)
    start = next(iter(m.initial))
    reach = [start]
    seen = {start}
    for q in reach:
        for q2 in table[q]:
            if q2 not in seen:
                seen.add(q2)
                reach.append(q2)
    # partition refinement on reachable states
    cls = {q: (q in m.final) for q in reach}
    while True:
        sig = {q: (cls[q], tuple(cls[q2] for q2 in table[q])) for q in reach}
        remap = {}
        for q in reach:
            remap.setdefault(sig[q], len(remap))
        nxt = {q: remap[sig[q]] for q in reach}
        if len(set(nxt.values())) == len(set(cls.values())):
            cls = nxt
            break
        cls = nxt
    # quotient, numbered by first appearance along a BFS from the start
    order: List[int] = []
    rep: Dict[int, int] = {}

    def idx(c):
        if c not in rep:
            rep[c] = len(order)
            order.append(c)
        return rep[c]

    alg = m.algebra
    idx(cls[start])
    edges: Dict[Tuple[int, int], object] = {}
    done = set()
    frontier = deque([start])
    visited = {start}
    while frontier:
        q = frontier.popleft()
        if cls[q] in done:
            continue
        done.add(cls[q])
        qi = idx(cls[q])
        for k, b in enumerate(blocks):
            q2 = table[q][k]
            key = (qi, idx(cls[q2]))
            edges[key] = alg.or_(edges[key], b) if key in edges else b
            if q2 not in visited:
                visited.add(q2)
                frontier.append(q2)
    final = frozenset(idx(cls[q]) for q in reach if q in m.final and cls[q] in done)
    return Sfa(alg, len(order), frozenset([0]), final, edges)


def diff_witness(a: Sfa, b: Sfa, cap: int = DEFAULT_CAP) -> Optional[String]:
    """None iff L(a) = L(b); otherwise a shortest string in the symmetric
    difference (breadth-first over the product, minimum witness character
    per edge)."""
    da = a if a.is_deterministic_complete() else determinize(a, cap)
    db = b if b.is_deterministic_complete() else determinize(b, cap)
    alg = a.algebra

    if isinstance(alg, IntervalAlgebra):
        # both inputs are deterministic and complete, so each state's
        # outgoing intervals tile the domain; a two-pointer sweep over the
        # two sorted tilings yields, for each successor pair, the same
        # minimal witness character as intersecting the full predicates
        def rows_of(m: Sfa) -> List[List[Tuple[int, int, int]]]:
            return [
                sorted((lo, hi, q2) for q2, p in m.out_edges(q) for lo, hi in p)
                for q in range(m.n_states)
            ]

        rows_a, rows_b = rows_of(da), rows_of(db)

        def moves_for(qa: int, qb: int) -> List[Tuple[int, Tuple[int, int]]]:
            ra, rb = rows_a[qa], rows_b[qb]
            i = j = 0
            seen = set()
            out = []
            while i < len(ra) and j < len(rb):
                lo = max(ra[i][0], rb[j][0])
                hi = min(ra[i][1], rb[j][1])
                if lo <= hi:
                    nxt = (ra[i][2], rb[j][2])
                    if nxt not in seen:
                        seen.add(nxt)
                        out.append((lo, nxt))
                if ra[i][1] < rb[j][1]:
                    i += 1
                else:
                    j += 1
            return out
    else:
        def moves_for(qa: int, qb: int) -> List[Tuple[int, Tuple[int, int]]]:
            out = []
            for qa2, pa in da.out_edges(qa):
                for qb2, pb in db.out_edges(qb):
                    inter = alg.and_(pa, pb)
                    if not alg.is_empty(inter):
                        out.append((alg.witness(inter), (qa2, qb2)))
            return out

    start = (next(iter(da.initial)), next(iter(db.initial)))
    parent: Dict[Tuple[int, int], Optional[Tuple[Tuple[int, int], int]]] = {start: None}
    queue = deque([start])
    goal = None
    while queue:
        pair = queue.popleft()
        qa, qb = pair
        if (qa in da.final) != (qb in db.final):
            goal = pair
            break
        for ch, nxt in sorted(moves_for(qa, qb)):
            if nxt not in parent:
                parent[nxt] = (pair, ch)
                queue.append(nxt)
    if goal is None:
        return None
    w: List[int] = []
    cur = goal
    while parent[cur] is not None:
        cur, ch = parent[cur]
        w.append(ch)
    witness = tuple(reversed(w))
    assert a.accepts(witness) != b.accepts(witness)
    return witness


@dataclass
class ResidualProfile:
    """Residual languages of L(m), one per minimal-DSFA state.

    ``access`` maps each state to a shortest string reaching it;
    ``inclusion[i][j]`` holds iff the language of state i is a subset of
    that of state j; ``primes`` lists the states whose language is not
    the union of its strict residual subsets.
    """

    dsfa: Sfa
    access: Dict[int, String]
    inclusion: List[List[bool]]
    primes: List[int]


def _shortest_access(m: Sfa, blocks, table) -> Dict[int, String]:
    start = next(iter(m.initial))
    alg = m.algebra
    acc = {start: ()}
    queue = deque([start])
    while queue:
        q = queue.popleft()
        for k, b in enumerate(blocks):
            q2 = table[q][k]
            if q2 not in acc:
                acc[q2] = acc[q] + (alg.witness(b),)
                queue.append(q2)
    return acc


def _lang_included(table, final, i: int, j: int) -> bool:
    """L_i subseteq L_j over one deterministic transition table."""
    seen = {(i, j)}
    stack = [(i, j)]
    nblocks = len(table[0]) if table else 0
    while stack:
        q1, q2 = stack.pop()
        if final[q1] and not final[q2]:
            return False
        for k in range(nblocks):
            nxt = (table[q1][k], table[q2][k])
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return True


def _all_inclusions(table, final) -> List[List[bool]]:
    """inclusion[i][j] = (L_i subseteq L_j) for every state pair, via one
    backward reachability pass over the pair graph: a pair is bad iff it
    can reach a (final, non-final) pair."""
    n = len(final)
    nblocks = len(table[0]) if table else 0
    preds = [[[] for _ in range(n)] for _ in range(nblocks)]
    for q in range(n):
        row = table[q]
        for k in range(nblocks):
            preds[k][row[k]].append(q)
    bad = [[final[i] and not final[j] for j in range(n)] for i in range(n)]
    queue = deque((i, j) for i in range(n) for j in range(n) if bad[i][j])
    while queue:
        i2, j2 = queue.popleft()
        for k in range(nblocks):
            for i in preds[k][i2]:
                bi = bad[i]
                for j in preds[k][j2]:
                    if not bi[j]:
                        bi[j] = True
                        queue.append((i, j))
    return [[not bad[i][j] for j in range(n)] for i in range(n)]


def _covered_by_union(table, final, inclusion, i: int, js: Sequence[int]) -> bool:
    """L_i subseteq union of L_j for j in js (same transition table).

    Product search over (state, set-of-states) pairs, pruned with the
    pairwise inclusion matrix: a set is kept reduced to its maximal
    members (same union), and a pair whose state is included in a single
    member can never reach a failure, so its branch is dropped.
    """

    def reduced(states) -> frozenset:
        return frozenset(
            x for x in states
            if not any(y != x and inclusion[x][y] for y in states)
        )

    start = (i, reduced(js))
    seen = {start}
    stack = [start]
    nblocks = len(table[0]) if table else 0
    while stack:
        q, s = stack.pop()
        if any(inclusion[q][x] for x in s):
            continue
        if final[q] and not any(final[x] for x in s):
            return False
        for k in range(nblocks):
            nxt = (table[q][k], reduced({table[x][k] for x in s}))
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return True


def residual_profile(m: Sfa, cap: int = DEFAULT_CAP) -> ResidualProfile:
    dsfa = minimize(determinize(m, cap))
    blocks, table = _transition_table(dsfa)
    final = [q in dsfa.final for q in range(dsfa.n_states)]
    n = dsfa.n_states
    inclusion = _all_inclusions(table, final)
    primes = []
    for i in range(n):
        strict = [j for j in range(n) if j != i and inclusion[j][i]]
        if not _covered_by_union(table, final, inclusion, i, strict):
            primes.append(i)
    access = _shortest_access(dsfa, blocks, table)
    return ResidualProfile(dsfa, access, inclusion, primes)


def canonical_rsfa(m: Sfa, cap: int = DEFAULT_CAP) -> Sfa:
    """The reduced, saturated RSFA of L(m): states are prime residuals,
    a transition block goes from p to p2 whenever the language of p2 is
    contained in the block's successor residual of p."""
    prof = residual_profile(m, cap)
    dsfa, incl = prof.dsfa, prof.inclusion
    alg = dsfa.algebra
    blocks, table = _transition_table(dsfa)
    primes = prof.primes
    idx = {p: k for k, p in enumerate(primes)}
    start = next(iter(dsfa.initial))
    initial = frozenset(idx[p] for p in primes if incl[p][start])
    final = frozenset(idx[p] for p in primes if p in dsfa.final)
    edges: Dict[Tuple[int, int], object] = {}
    for p in primes:
        for k, b in enumerate(blocks):
            succ = table[p][k]
            for p2 in primes:
                if incl[p2][succ]:
                    key = (idx[p], idx[p2])
                    edges[key] = alg.or_(edges[key], b) if key in edges else b
    return Sfa(alg, len(primes), initial, final, edges)


def identify_states(target: Sfa, hyp: Sfa, cap: int = DEFAULT_CAP,
                    profile: Optional[ResidualProfile] = None) -> Dict[int, int]:
    """Map each hypothesis state to the target minimal-DSFA state whose
    language it accepts.  Raises if some state is not a residual of the
    target language (i.e. hyp is not an RSFA of the target)."""
    prof = profile or residual_profile(target, cap)
    dsfa = prof.dsfa
    mapping = {}
    for h in range(hyp.n_states):
        hq = hyp.with_initial([h])
        for r in range(dsfa.n_states):
            if diff_witness(hq, dsfa.with_initial([r]), cap) is None:
                mapping[h] = r
                break
        else:
            raise ValueError(f"hypothesis state {h} accepts no residual of the target")
    return mapping


def transition_bounds(target: Sfa, hyp: Sfa, q: int, q2: int,
                      cap: int = DEFAULT_CAP,
                      profile: Optional[ResidualProfile] = None,
                      mapping: Optional[Dict[int, int]] = None):
    """(simplified, saturated) character sets admissible as the (q, q2)
    transition predicate of hyp without changing the accepted language.

    Saturated: characters a with L_{q2} contained in the a-derivative of
    L_q.  Simplified: additionally no hypothesis state sits strictly
    between L_{q2} and that derivative.
    """
    prof = profile or residual_profile(target, cap)
    dsfa, incl = prof.dsfa, prof.inclusion
    alg = dsfa.algebra
    if mapping is None:
        mapping = identify_states(target, hyp, cap, prof)
    blocks, table = _transition_table(dsfa)
    rq, rq2 = mapping[q], mapping[q2]
    others = [mapping[x] for x in range(hyp.n_states)]
    simplified = alg.bot()
    saturated = alg.bot()
    for k, b in enumerate(blocks):
        succ = table[rq][k]
        if incl[rq2][succ]:
            saturated = alg.or_(saturated, b)
            between = any(
                r != rq2 and incl[rq2][r] and incl[r][succ] for r in others
            )
            if not between:
                simplified = alg.or_(simplified, b)
    return simplified, saturated


def sfa_to_json(m: Sfa) -> dict:
    alg = m.algebra
    if not isinstance(alg, IntervalAlgebra):
        raise TypeError("JSON schema is defined for the interval algebra only")
    return {
        "domain": alg.domain.to_json(),
        "states": m.n_states,
        "initial": sorted(m.initial),
        "final": sorted(m.final),
        "edges": [
            {"from": q, "to": q2, "intervals": IntervalAlgebra.pred_to_json(p)}
            for (q, q2), p in sorted(m.edges.items())
            if not alg.is_empty(p)
        ],
    }


def sfa_from_json(obj: dict) -> Sfa:
    alg = IntervalAlgebra(Domain.from_json(obj["domain"]))
    edges = {}
    for e in obj["edges"]:
        key = (int(e["from"]), int(e["to"]))
        p = alg.pred_from_json(e["intervals"])
        edges[key] = alg.or_(edges[key], p) if key in edges else p
    return Sfa(
        alg,
        int(obj["states"]),
        frozenset(int(q) for q in obj["initial"]),
        frozenset(int(q) for q in obj["final"]),
        edges,
    )
