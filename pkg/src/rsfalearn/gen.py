"""Seeded random SFA generation for benchmark targets.

The randomness source is a splitmix64 stream, documented below, so
generated automata reproduce bit-for-bit across platforms.  Per state,
`n_delta` transitions are drawn: a uniform destination and a uniform
sorted pair (l, r) of domain characters; repeated destinations union
their intervals onto the single (q, q') predicate.  Each state is
initial with probability p_i and final with probability p_f.
No connectivity or residuality is enforced: empty-language and
universal targets are legitimate outputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import INT32, Domain, IntervalAlgebra
from .automata import Sfa

MASK64 = (1 << 64) - 1


class SplitMix64:
    """splitmix64: state advances by the golden-gamma constant, and the
    output is a xor-shift fibmix of the new state."""

    def __init__(self, seed: int):
        self._state = seed & MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection sampling."""
        if n <= 0:
            raise ValueError("bound must be positive")
        limit = MASK64 + 1 - (MASK64 + 1) % n
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def chance(self, p: float) -> bool:
        return self.next_u64() < p * (MASK64 + 1)


@dataclass(frozen=True)
class GenParams:
    n_q: int = 8
    n_delta: int = 2
    p_i: float = 0.5
    p_f: float = 0.5
    domain: Domain = INT32
    seed: int = 0

    def __post_init__(self):
        if self.n_q < 1:
            raise ValueError("n_q must be at least 1")
        if not (0.0 <= self.p_i <= 1.0 and 0.0 <= self.p_f <= 1.0):
            raise ValueError("probabilities must lie in [0, 1]")


def random_sfa(params: GenParams) -> Sfa:
    rng = SplitMix64(params.seed)
    alg = IntervalAlgebra(params.domain)
    d = params.domain
    edges = {}
    for q in range(params.n_q):
        for _ in range(params.n_delta):
            dest = rng.below(params.n_q)
            l = d.min + rng.below(d.size)
            r = d.min + rng.below(d.size)
            if l > r:
                l, r = r, l
            key = (q, dest)
            p = alg.interval(l, r)
            edges[key] = alg.or_(edges[key], p) if key in edges else p
    initial = frozenset(q for q in range(params.n_q) if rng.chance(params.p_i))
    final = frozenset(q for q in range(params.n_q) if rng.chance(params.p_f))
    return Sfa(alg, params.n_q, initial, final, edges)
