"""One-dimensional thresholds h_a(x) = 1[x >= a] with a in a closed range.

A version space is a parameter interval with independently open or closed
ends.  Every restriction the learners apply keeps it an interval, so all
operations are exact and O(n log n) in the sample size at worst.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..regions import INF, Interval, IntervalUnion
from .base import (
    ZERO,
    Constraint,
    Threshold,
    VersionSpace,
    center_name,
)


@dataclass(frozen=True)
class ThresholdClass:
    lo: float = 0.0
    hi: float = 1.0
    kind = "threshold-1d"
    vc_dim = 1
    dim = 1

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError("threshold parameter range needs lo < hi")

    def full(self) -> "ThresholdSpace":
        return ThresholdSpace(self, self.lo, self.hi, False, False)

    def is_member(self, h) -> bool:
        return isinstance(h, Threshold) and self.lo <= h.a <= self.hi

    def hypothesis(self, a: float) -> Threshold:
        h = Threshold(float(a))
        if not self.is_member(h):
            raise ValueError(f"{h} outside parameter range [{self.lo}, {self.hi}]")
        return h

    def theta_analytic(self, d):
        # a ball of radius r around an interior h_a has DIS of mass exactly 2r
        if d.dim != 1:
            return None
        return 2.0 if float(d.cdf(self.hi) - d.cdf(self.lo)) > 0 else 0.0

    def theta_grid(self, d, resolution: int = 100, radii=None, centers=None):
        """sup of Delta(B(h, r)) / r over a parameter grid and log-spaced radii."""
        radii = _radii(resolution) if radii is None else np.asarray(radii)
        if centers is None:
            lo, hi = _finite_range(self, d)
            centers = np.linspace(lo, hi, resolution)
        fa = d.cdf(np.asarray(centers, dtype=float))[:, None]
        flo, fhi = float(d.cdf(self.lo)), float(d.cdf(self.hi))
        top = np.minimum(fa + radii[None, :], fhi)
        bot = np.maximum(fa - radii[None, :], flo)
        dis = np.maximum(top - bot, 0.0)
        return float(np.max(dis / radii[None, :]))

    def __str__(self):
        if (self.lo, self.hi) == (0.0, 1.0):
            return "threshold"
        return f"threshold(lo={self.lo:g}, hi={self.hi:g})"


def _radii(resolution: int) -> np.ndarray:
    return np.logspace(-4, 0, max(int(resolution), 100))


def _finite_range(hclass, d):
    lo, hi = hclass.lo, hclass.hi
    slo, shi = d.support()
    lo = max(lo, slo) if np.isfinite(slo) else lo
    hi = min(hi, shi) if np.isfinite(shi) else hi
    return lo, hi


def _order_stat(pts, k: int) -> float:
    return float(np.partition(pts, k)[k])


class ThresholdSpace(VersionSpace):
    """{h_a : a in <lo, hi>} with per-end openness flags."""

    def __init__(self, hclass, lo, hi, lo_open, hi_open, log=()):
        self.hclass = hclass
        self.lo = float(lo)
        self.hi = float(hi)
        self.lo_open = bool(lo_open)
        self.hi_open = bool(hi_open)
        self.log = tuple(log)

    def _replace(self, lo=None, hi=None, lo_open=None, hi_open=None, entry=None):
        return ThresholdSpace(
            self.hclass,
            self.lo if lo is None else lo,
            self.hi if hi is None else hi,
            self.lo_open if lo_open is None else lo_open,
            self.hi_open if hi_open is None else hi_open,
            self._logged(entry) if entry is not None else self.log,
        )

    def is_empty(self):
        if self.lo < self.hi:
            return False
        return not (self.lo == self.hi and not self.lo_open and not self.hi_open)

    def contains(self, h):
        if not isinstance(h, Threshold):
            return False
        a = h.a
        ok_lo = a > self.lo if self.lo_open else a >= self.lo
        ok_hi = a < self.hi if self.hi_open else a <= self.hi
        return bool(ok_lo and ok_hi)

    def param_interval(self) -> Interval:
        return Interval(self.lo, self.hi, not self.lo_open, not self.hi_open)

    # x is in DIS iff some member has a <= x and another has a > x
    def dis_contains(self, xs):
        x = np.asarray(xs, dtype=float)
        if self.is_empty():
            return np.zeros(x.shape, dtype=bool)
        left = x > self.lo if self.lo_open else x >= self.lo
        return left & (x < self.hi)

    def dis_region(self):
        if self.is_empty():
            return IntervalUnion.empty()
        return IntervalUnion.of(self.lo, self.hi, not self.lo_open, False)

    def agree_positive_region(self):
        self.require_nonempty()
        return IntervalUnion.of(self.hi, INF, True, False)

    def agree_positive_mask(self, xs):
        return np.asarray(xs, dtype=float) >= self.hi

    def _restrict_positive(self, pts, name):
        m = float(np.min(pts))
        entry = Constraint("positive", name, len(pts))
        if m < self.hi:
            return self._replace(hi=m, hi_open=False, entry=entry)
        return self._replace(entry=entry)

    def _restrict_negative(self, pts, name):
        m = float(np.max(pts))
        entry = Constraint("negative", name, len(pts))
        if m >= self.lo:
            return self._replace(lo=m, lo_open=True, entry=entry)
        return self._replace(entry=entry)

    def _intersect_ball(self, center, m, pts, name, radius):
        # order statistics via selection; no full sort of large samples
        pts = np.asarray(pts, dtype=float)
        n = len(pts)
        entry = Constraint("ball", name, n, center_name(center), radius)
        new_lo, new_hi = None, None  # open lower / closed upper bound
        if center is ZERO:
            # #{s >= a} <= m  <=>  a > s_(n-m-1)
            if m < n:
                new_lo = _order_stat(pts, n - m - 1)
        elif isinstance(center, Threshold):
            j = int(np.count_nonzero(pts < center.a))
            if j - m - 1 >= 0:
                new_lo = _order_stat(pts, j - m - 1)
            if j + m < n:
                new_hi = _order_stat(pts, j + m)
        else:
            raise TypeError(f"unsupported ball center {center!r}")
        out = self._replace(entry=entry)
        if new_lo is not None and new_lo >= out.lo:
            out.lo, out.lo_open = new_lo, True
        if new_hi is not None:
            if new_hi < out.hi:
                out.hi, out.hi_open = new_hi, False
        return out

    def argmin_positive(self, xs):
        # predicted-positive count is non-increasing in a: the largest a wins
        self.require_nonempty()
        a = self.hi if not self.hi_open else float(np.nextafter(self.hi, -INF))
        return Threshold(a)

    def sup_error(self, target, d):
        self.require_nonempty()
        ft = float(d.cdf(target.a))
        return float(max(abs(d.cdf(self.lo) - ft), abs(d.cdf(self.hi) - ft)))

    def __repr__(self):
        return f"ThresholdSpace({self.param_interval()})"
