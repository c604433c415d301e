"""SCAR feedback oracle with query accounting.

A queried instance with true label 1 is revealed (``Positive``) with
probability omega; everything else comes back as ``Star``.  The coin is
tossed per query and always consumes exactly one uniform draw, negatives
included, so the oracle stream stays aligned across runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import CapExceeded
from .hypothesis.base import LabeledSample, points_of
from .rng import RngStream


class Feedback(Enum):
    POSITIVE = "Positive"
    STAR = "Star"


@dataclass
class QueryLedger:
    total_queries: int = 0
    positive_responses: int = 0
    star_responses: int = 0
    phases: dict = field(default_factory=dict)  # phase -> [queries, positives]

    def record(self, phase: str, queries: int, positives: int) -> None:
        if queries < 0 or not 0 <= positives <= queries:
            raise ValueError("ledger entries need 0 <= positives <= queries")
        self.total_queries += queries
        self.positive_responses += positives
        self.star_responses += queries - positives
        entry = self.phases.setdefault(phase, [0, 0])
        entry[0] += queries
        entry[1] += positives

    def phase_queries(self, phase: str) -> int:
        return self.phases.get(phase, [0, 0])[0]

    def snapshot(self) -> dict:
        return {
            "total_queries": self.total_queries,
            "positive_responses": self.positive_responses,
            "star_responses": self.star_responses,
            "phases": {k: list(v) for k, v in self.phases.items()},
        }

    def consistent(self) -> bool:
        return self.total_queries == self.positive_responses + self.star_responses


class PUOracle:
    """Query endpoint for one trial.  ``max_queries`` turns into CapExceeded."""

    def __init__(self, scenario, rng: RngStream, ledger: QueryLedger | None = None,
                 max_queries: int | None = None):
        self.scenario = scenario
        self.rng = rng
        self.ledger = ledger if ledger is not None else QueryLedger()
        self.max_queries = max_queries

    def _charge(self, n: int) -> None:
        if self.max_queries is not None and self.ledger.total_queries + n > self.max_queries:
            raise CapExceeded("label-requests", self.max_queries, self.ledger.total_queries + n)

    def query(self, x, phase: str = "") -> Feedback:
        self._charge(1)
        xs = np.asarray([x], dtype=float)
        positive = bool(self.scenario.label(xs)[0])
        coin = self.rng.gen.random()
        hit = positive and coin < self.scenario.omega
        self.ledger.record(phase, 1, int(hit))
        return Feedback.POSITIVE if hit else Feedback.STAR

    def reveal_mask(self, xs, phase: str = "") -> np.ndarray:
        """Query every instance; True where the feedback was Positive."""
        pts = points_of(xs)
        n = len(pts)
        self._charge(n)
        if n == 0:
            return np.zeros(0, dtype=bool)
        coins = self.rng.gen.random(n)
        hit = self.scenario.label(pts) & (coins < self.scenario.omega)
        self.ledger.record(phase, n, int(np.count_nonzero(hit)))
        return hit

    def query_filter(self, xs, phase: str = "", name: str = "R"):
        """(revealed, star) split of ``xs``; order and multiplicity preserved."""
        pts = points_of(xs)
        hit = self.reveal_mask(pts, phase)
        return LabeledSample(pts[hit], name), LabeledSample(pts[~hit], name + "*")


def query(s, x, rng: RngStream, ledger: QueryLedger, phase: str = "") -> Feedback:
    return PUOracle(s, rng, ledger).query(x, phase)


def query_filter(s, xs, rng: RngStream, ledger: QueryLedger, phase: str = ""):
    return PUOracle(s, rng, ledger).query_filter(xs, phase)
