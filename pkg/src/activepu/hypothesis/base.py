"""Hypotheses, labeled samples and the version-space interface."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from ..errors import EmptyVersionSpace
from ..regions import INF, IntervalUnion, PredicateRegion


@dataclass(frozen=True)
class Threshold:
    """h_a(x) = 1[x >= a]."""

    a: float

    def predict(self, xs):
        return _coord(xs) >= self.a

    def region(self, dim: int = 1):
        return IntervalUnion.of(self.a, INF, True, False)

    @property
    def params(self):
        return (self.a,)

    def __str__(self):
        return f"threshold({self.a:.6g})"


@dataclass(frozen=True)
class ClosedInterval:
    """h(x) = 1[a <= x <= b]."""

    a: float
    b: float

    def predict(self, xs):
        x = _coord(xs)
        return (x >= self.a) & (x <= self.b)

    def region(self, dim: int = 1):
        return IntervalUnion.of(self.a, self.b)

    @property
    def params(self):
        return (self.a, self.b)

    @property
    def width(self):
        return self.b - self.a

    def __str__(self):
        return f"interval({self.a:.6g}, {self.b:.6g})"


@dataclass(frozen=True)
class Box:
    """Closed axis-aligned rectangle in the plane."""

    x0: float
    x1: float
    y0: float
    y1: float

    def predict(self, xs):
        xs = np.asarray(xs, dtype=float)
        return (xs[:, 0] >= self.x0) & (xs[:, 0] <= self.x1) & (xs[:, 1] >= self.y0) & (xs[:, 1] <= self.y1)

    def region(self, dim: int = 2):
        return PredicateRegion(self.predict, 2, str(self))

    @property
    def params(self):
        return (self.x0, self.x1, self.y0, self.y1)

    def __str__(self):
        return f"box({self.x0:g}, {self.x1:g}, {self.y0:g}, {self.y1:g})"


class _Zero:
    """The all-zero function, used as a ball center."""

    def predict(self, xs):
        return np.zeros(len(np.asarray(xs)), dtype=bool)

    def region(self, dim: int = 1):
        return IntervalUnion.empty() if dim == 1 else PredicateRegion(self.predict, dim, "zero")

    def __repr__(self):
        return "ZERO"


ZERO = _Zero()


def _coord(xs):
    xs = np.asarray(xs, dtype=float)
    return xs if xs.ndim <= 1 else xs[:, 0]


@dataclass
class LabeledSample:
    """A named multiset of instances; multiplicity counts in every fraction."""

    points: np.ndarray
    name: str = "S"

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=float)

    def __len__(self):
        return len(self.points)

    def fraction(self, mask) -> float:
        n = len(self)
        return float(np.count_nonzero(mask)) / n if n else 0.0


def points_of(xs) -> np.ndarray:
    if isinstance(xs, LabeledSample):
        return xs.points
    return np.asarray(xs, dtype=float)


def name_of(xs, default: str = "S") -> str:
    return xs.name if isinstance(xs, LabeledSample) else default


def rho_sample(h1, h2, xs) -> float:
    """Empirical pseudo-distance: fraction of the sample where h1 != h2."""
    pts = points_of(xs)
    if len(pts) == 0:
        return 0.0
    return float(np.count_nonzero(h1.predict(pts) != h2.predict(pts))) / len(pts)


def max_count_within(radius: float, n: int) -> int:
    """Largest integer c with c / n <= radius (the ball's count budget)."""
    if n == 0:
        return 0
    if radius >= 1.0:
        return n
    if radius < 0:
        return -1
    c = int(np.floor(radius * n))
    while c + 1 <= n and (c + 1) / n <= radius:
        c += 1
    while c >= 0 and c / n > radius:
        c -= 1
    return c


@dataclass(frozen=True)
class Constraint:
    """One entry of a version space's append-only audit log."""

    kind: str  # "positive", "negative", "ball"
    sample: str
    size: int
    center: str = ""
    radius: float | None = None

    def __str__(self):
        if self.kind == "ball":
            return f"ball({self.center}, r={self.radius:.6g}) over {self.sample}[{self.size}]"
        return f"{self.kind}({self.sample}[{self.size}])"


class VersionSpace:
    """Subset of a hypothesis class with the algebra the learners need.

    Restrictions return new objects; the log of applied constraints is
    carried forward so every version space can explain how it was built.
    """

    hclass = None
    log: tuple = ()

    # --- required by subclasses -------------------------------------------
    def is_empty(self) -> bool:
        raise NotImplementedError

    def contains(self, h) -> bool:
        raise NotImplementedError

    def dis_contains(self, xs) -> np.ndarray:
        raise NotImplementedError

    def dis_region(self):
        raise NotImplementedError

    def agree_positive_region(self):
        raise NotImplementedError

    def agree_positive_mask(self, xs) -> np.ndarray:
        return np.asarray(self.agree_positive_region().contains(points_of(xs)), dtype=bool)

    def _restrict_positive(self, pts, name):
        raise NotImplementedError

    def _restrict_negative(self, pts, name):
        raise NotImplementedError

    def _intersect_ball(self, center, m, pts, name, radius):
        raise NotImplementedError

    def argmin_positive(self, xs):
        """Member predicting 1 on the fewest points of ``xs`` (canonical ties)."""
        raise NotImplementedError

    def sup_error(self, target, d) -> float:
        """max over members of the D-mass where the member disagrees with target."""
        raise NotImplementedError

    # --- shared -----------------------------------------------------------
    def require_nonempty(self):
        if self.is_empty():
            raise EmptyVersionSpace(f"empty version space after {[str(c) for c in self.log]}")
        return self

    def restrict_positive(self, xs):
        pts = points_of(xs)
        if len(pts) == 0:
            return self
        out = self._restrict_positive(pts, name_of(xs, "R"))
        return out.require_nonempty()

    def restrict_negative(self, xs):
        pts = points_of(xs)
        if len(pts) == 0:
            return self
        return self._restrict_negative(pts, name_of(xs, "N")).require_nonempty()

    def intersect_ball(self, center, radius: float, xs):
        """Intersect with the empirical ball of ``radius`` around ``center``.

        ``center`` is :data:`ZERO` or a member hypothesis.  An empty sample
        imposes nothing (the empirical distance is undefined there).
        """
        if radius < 0:
            raise ValueError("radius must be >= 0")
        pts = points_of(xs)
        n = len(pts)
        if n == 0 or radius >= 1.0:
            return self
        m = max_count_within(radius, n)
        out = self._intersect_ball(center, m, pts, name_of(xs), radius)
        return out.require_nonempty()

    def representative(self):
        return self.argmin_positive(np.empty(0))

    def dis_mass(self, d, rng=None):
        from ..scenario import region_mass

        self.require_nonempty()
        return region_mass(d, self.dis_region(), rng)

    def empirical_dis(self, xs) -> float:
        pts = points_of(xs)
        if len(pts) == 0:
            return 0.0
        return float(np.count_nonzero(self.dis_contains(pts))) / len(pts)

    def agree_positive_frac(self, xs) -> float:
        pts = points_of(xs)
        if len(pts) == 0:
            return 0.0
        return float(np.count_nonzero(self.agree_positive_mask(pts))) / len(pts)

    def _logged(self, entry: Constraint):
        return self.log + (entry,)


def center_name(center) -> str:
    return "0" if center is ZERO else str(center)


def iter_points(xs) -> Iterable[float]:
    return points_of(xs).tolist()
