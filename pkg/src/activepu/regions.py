"""Measurable regions of the instance space.

One-dimensional regions are finite unions of intervals with explicit
endpoint closedness, so membership is exact and masses can be read off a
CDF.  Anything else is a :class:`PredicateRegion`, whose mass has to be
estimated by Monte Carlo.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

INF = float("inf")


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    lo_closed: bool = True
    hi_closed: bool = True

    def is_empty(self) -> bool:
        if self.lo < self.hi:
            return False
        if self.lo == self.hi:
            return not (self.lo_closed and self.hi_closed) or not np.isfinite(self.lo)
        return True

    def contains(self, xs):
        xs = np.asarray(xs, dtype=float)
        left = xs >= self.lo if self.lo_closed else xs > self.lo
        right = xs <= self.hi if self.hi_closed else xs < self.hi
        return left & right

    def __str__(self) -> str:
        lb = "[" if self.lo_closed and np.isfinite(self.lo) else "("
        rb = "]" if self.hi_closed and np.isfinite(self.hi) else ")"
        return f"{lb}{self.lo:g}, {self.hi:g}{rb}"


class IntervalUnion:
    """Sorted, disjoint, non-adjacent union of intervals on the real line."""

    dim = 1

    def __init__(self, intervals: Iterable[Interval] = ()):
        ivs = [iv for iv in intervals if not iv.is_empty()]
        self.intervals: tuple[Interval, ...] = tuple(_normalize(ivs))

    @classmethod
    def of(cls, lo: float, hi: float, lo_closed: bool = True, hi_closed: bool = True):
        return cls([Interval(lo, hi, lo_closed, hi_closed)])

    @classmethod
    def everything(cls):
        return cls([Interval(-INF, INF, False, False)])

    @classmethod
    def empty(cls):
        return cls([])

    def is_empty(self) -> bool:
        return not self.intervals

    def contains(self, xs):
        xs = np.asarray(xs, dtype=float)
        out = np.zeros(xs.shape, dtype=bool)
        for iv in self.intervals:
            out |= iv.contains(xs)
        return out

    def endpoints(self) -> list[float]:
        pts = []
        for iv in self.intervals:
            pts.extend(p for p in (iv.lo, iv.hi) if np.isfinite(p))
        return pts

    def mass(self, cdf: Callable) -> float:
        """Probability of the region under a continuous distribution."""
        if not self.intervals:
            return 0.0
        lo = np.array([iv.lo for iv in self.intervals])
        hi = np.array([iv.hi for iv in self.intervals])
        return float(np.sum(cdf(hi) - cdf(lo)))

    def union(self, other: "IntervalUnion") -> "IntervalUnion":
        return combine(self, other, np.logical_or)

    def intersect(self, other: "IntervalUnion") -> "IntervalUnion":
        return combine(self, other, np.logical_and)

    def minus(self, other: "IntervalUnion") -> "IntervalUnion":
        return combine(self, other, lambda a, b: a & ~b)

    def xor(self, other: "IntervalUnion") -> "IntervalUnion":
        return combine(self, other, np.logical_xor)

    def complement(self) -> "IntervalUnion":
        return IntervalUnion.everything().minus(self)

    def __eq__(self, other) -> bool:
        return isinstance(other, IntervalUnion) and self.intervals == other.intervals

    def __hash__(self):
        return hash(self.intervals)

    def __repr__(self) -> str:
        if not self.intervals:
            return "IntervalUnion(empty)"
        return "IntervalUnion(" + " U ".join(str(iv) for iv in self.intervals) + ")"


class PredicateRegion:
    """Region given only by a vectorized membership test (2D or exotic)."""

    def __init__(self, predicate: Callable, dim: int, label: str = "predicate"):
        self.predicate = predicate
        self.dim = dim
        self.label = label

    def contains(self, xs):
        return np.asarray(self.predicate(np.asarray(xs, dtype=float)), dtype=bool)

    def is_empty(self) -> bool:
        # cannot be decided without sampling
        return False

    def __repr__(self) -> str:
        return f"PredicateRegion({self.label})"


def _normalize(ivs: Sequence[Interval]) -> list[Interval]:
    if not ivs:
        return []
    pts = sorted({p for iv in ivs for p in (iv.lo, iv.hi) if np.isfinite(p)})
    union = lambda xs: np.any([iv.contains(xs) for iv in ivs], axis=0)  # noqa: E731
    return from_predicate(union, pts).intervals if pts else [Interval(-INF, INF, False, False)]


def from_predicate(pred: Callable, critical_points: Iterable[float]) -> IntervalUnion:
    """Exact region of a 1D predicate that is constant between critical points.

    ``pred`` is evaluated at every critical point and at one interior point
    of every gap (including both unbounded ends); maximal runs of ``True``
    become intervals, with closedness read from the singleton evaluations.
    """
    pts = np.unique(np.asarray([p for p in critical_points if np.isfinite(p)], dtype=float))
    if pts.size == 0:
        v = bool(np.asarray(pred(np.array([0.0])))[0])
        return IntervalUnion.everything() if v else IntervalUnion.empty()
    m = pts.size
    gaps = np.empty(m + 1)
    gaps[0] = pts[0] - 1.0
    gaps[-1] = pts[-1] + 1.0
    mids = (pts[:-1] + pts[1:]) / 2.0
    gaps[1:-1] = mids
    gap_empty = np.zeros(m + 1, dtype=bool)
    gap_empty[1:-1] = (mids <= pts[:-1]) | (mids >= pts[1:])
    vp = np.asarray(pred(pts), dtype=bool)
    vg = np.asarray(pred(gaps), dtype=bool)
    # a gap with no representable float takes the value that keeps runs intact
    for j in np.flatnonzero(gap_empty):
        vg[j] = vp[j - 1] and vp[j]

    # segment sequence: gap0, pt0, gap1, pt1, ..., pt_{m-1}, gap_m
    out: list[Interval] = []
    start = None  # (lo, lo_closed)
    for j in range(m + 1):
        if vg[j]:
            if start is None:
                start = (-INF, False) if j == 0 else (pts[j - 1], False)
        elif start is not None:
            out.append(Interval(start[0], pts[j - 1], start[1], True))
            start = None
        if j == m:
            break
        if vp[j]:
            if start is None:
                start = (pts[j], True)
        else:
            if start is not None:
                out.append(Interval(start[0], pts[j], start[1], False))
                start = None
    if start is not None:
        out.append(Interval(start[0], INF, start[1], False))
    u = IntervalUnion.__new__(IntervalUnion)
    u.intervals = tuple(out)
    return u


def combine(a: IntervalUnion, b: IntervalUnion, op) -> IntervalUnion:
    pts = a.endpoints() + b.endpoints()
    return from_predicate(lambda xs: op(a.contains(xs), b.contains(xs)), pts)
