"""Passive PU learning: fit the revealed positives, then predict positive
on as few unlabeled points as possible."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import EmptyVersionSpace, NoConsistentHypothesis
from .hypothesis.base import LabeledSample, VersionSpace, points_of


@dataclass
class PassivePuResult:
    hypothesis: object
    consistent_set_desc: VersionSpace
    objective: int


def learn_pu(c, positives, unlabeled, tie_break: str = "canonical",
             within: VersionSpace | None = None) -> PassivePuResult:
    """argmin over {h consistent with positives} of |h ∩ unlabeled|.

    Ties follow the class's canonical order (largest threshold, lowest
    finite index, narrowest then leftmost interval).  ``within`` starts
    from a given version space instead of the whole class.
    """
    if tie_break != "canonical":
        raise ValueError(f"unsupported tie-break rule {tie_break!r}")
    base = within if within is not None else c.full()
    try:
        v = base.restrict_positive(_as_sample(positives, "SP"))
        h = v.argmin_positive(points_of(unlabeled))
    except EmptyVersionSpace as exc:
        raise NoConsistentHypothesis(str(exc)) from None
    objective = int(h.predict(points_of(unlabeled)).sum()) if len(points_of(unlabeled)) else 0
    return PassivePuResult(h, v, objective)


def passive_sample_size(eps: float, delta: float, vc_dim: int, M1: float = 1.0) -> int:
    """k = M1 (d ln(1/eps) + ln(1/delta)) / eps, rounded up."""
    return max(1, math.ceil(M1 * (vc_dim * math.log(1 / eps) + math.log(1 / delta)) / eps))


def _as_sample(xs, name):
    return xs if isinstance(xs, LabeledSample) else LabeledSample(points_of(xs), name)
