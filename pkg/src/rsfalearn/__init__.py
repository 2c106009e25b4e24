"""Query learning of residual symbolic finite automata over interval
algebras, with a deterministic-SFA baseline and a benchmark harness."""

from .algebra import Domain, FiniteSetAlgebra, IntervalAlgebra, INT32
from .automata import (
    CapExceeded,
    Sfa,
    canonical_rsfa,
    determinize,
    diff_witness,
    minimize,
    mintermize,
    residual_profile,
    sfa_from_json,
    sfa_to_json,
    transition_bounds,
)
from .gen import GenParams, SplitMix64, random_sfa
from .learner import GuardExceeded, RsfaLearner, RunOutcome
from .matstar import DsfaLearner
from .predlearn import EnumerationSession, Eq, IntervalSession, Mq, ProtocolError
from .table import MeasureTuple, ObservationTable, StallError, prime_rows_of
from .teacher import QueryStats, Teacher

__all__ = [
    "Domain", "FiniteSetAlgebra", "IntervalAlgebra", "INT32",
    "CapExceeded", "Sfa", "canonical_rsfa", "determinize", "diff_witness",
    "minimize", "mintermize", "residual_profile", "sfa_from_json",
    "sfa_to_json", "transition_bounds",
    "GenParams", "SplitMix64", "random_sfa",
    "GuardExceeded", "RsfaLearner", "RunOutcome", "DsfaLearner",
    "EnumerationSession", "Eq", "IntervalSession", "Mq", "ProtocolError",
    "MeasureTuple", "ObservationTable", "StallError", "prime_rows_of",
    "QueryStats", "Teacher",
]
