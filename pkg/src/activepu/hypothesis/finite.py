"""Explicit finite hypothesis classes, version spaces as boolean masks.

Members are concrete 1D rules (thresholds, closed intervals) or 2D boxes.
Every operation scans the member table, so results are exact; in 1D the
disagreement and agreement regions are rebuilt as interval unions from the
members' endpoints.

Plain-text file format, one hypothesis per line (``#`` starts a comment)::

    threshold 0.3
    interval 0.2 0.6
    box 0.1 0.4 0.2 0.9        # x0 x1 y0 y1
    vc_dim 3                   # optional: declare instead of computing
"""

from __future__ import annotations

from itertools import combinations
from pathlib import Path

import numpy as np

from ..regions import IntervalUnion, PredicateRegion, from_predicate
from .base import ZERO, Box, ClosedInterval, Constraint, Threshold, VersionSpace, center_name

BRUTE_FORCE_LIMIT = 64


class FiniteClass:
    kind = "finite-explicit"

    def __init__(self, members, vc_dim: int | None = None, source: str | None = None):
        members = tuple(members)
        if not members:
            raise ValueError("finite class needs at least one hypothesis")
        if len(set(members)) != len(members):
            raise ValueError("finite class has duplicate hypotheses")
        dims = {2 if isinstance(h, Box) else 1 for h in members}
        if len(dims) != 1:
            raise ValueError("finite class mixes 1D and 2D hypotheses")
        self.members = members
        self.dim = dims.pop()
        self.source = source
        self._index = {h: i for i, h in enumerate(members)}
        if vc_dim is None:
            if len(members) > BRUTE_FORCE_LIMIT:
                raise ValueError(
                    f"classes larger than {BRUTE_FORCE_LIMIT} must declare vc_dim"
                )
            vc_dim = brute_force_vc_dim(self)
        self.vc_dim = int(vc_dim)

    def __len__(self):
        return len(self.members)

    def full(self):
        return FiniteSpace(self, np.ones(len(self.members), dtype=bool))

    def is_member(self, h) -> bool:
        return h in self._index

    def index_of(self, h) -> int:
        return self._index[h]

    def predict_matrix(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        n = len(xs)
        out = np.empty((len(self.members), n), dtype=bool)
        for i, h in enumerate(self.members):
            out[i] = h.predict(xs) if n else np.zeros(0, dtype=bool)
        return out

    def endpoints(self, mask=None) -> list[float]:
        hs = self.members if mask is None else [h for h, m in zip(self.members, mask) if m]
        pts: list[float] = []
        for h in hs:
            pts.extend(p for p in h.params if np.isfinite(p))
        return pts

    def representative_points(self) -> np.ndarray:
        """One point per cell of the arrangement of member boundaries."""
        if self.dim == 1:
            pts = np.unique(self.endpoints())
            if pts.size == 0:
                return np.array([0.0])
            mids = (pts[:-1] + pts[1:]) / 2
            return np.concatenate([[pts[0] - 1], pts, mids, [pts[-1] + 1]])
        xs = np.unique([v for h in self.members for v in (h.x0, h.x1)])
        ys = np.unique([v for h in self.members for v in (h.y0, h.y1)])
        rx = np.concatenate([[xs[0] - 1], xs, (xs[:-1] + xs[1:]) / 2, [xs[-1] + 1]])
        ry = np.concatenate([[ys[0] - 1], ys, (ys[:-1] + ys[1:]) / 2, [ys[-1] + 1]])
        gx, gy = np.meshgrid(rx, ry)
        return np.column_stack([gx.ravel(), gy.ravel()])

    def theta_analytic(self, d):
        return None

    @classmethod
    def from_file(cls, path):
        members, vc = [], None
        for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.replace(",", " ").split()
            kind, args = parts[0].lower(), parts[1:]
            try:
                vals = [float(v) for v in args]
            except ValueError:
                raise ValueError(f"{path}:{lineno}: non-numeric parameter in {raw!r}") from None
            if kind == "threshold" and len(vals) == 1:
                members.append(Threshold(vals[0]))
            elif kind == "interval" and len(vals) == 2:
                members.append(ClosedInterval(*vals))
            elif kind == "box" and len(vals) == 4:
                members.append(Box(*vals))
            elif kind == "vc_dim" and len(vals) == 1:
                vc = int(vals[0])
            else:
                raise ValueError(f"{path}:{lineno}: cannot parse {raw!r}")
        return cls(members, vc_dim=vc, source=str(path))

    def to_text(self) -> str:
        lines = []
        for h in self.members:
            name = {Threshold: "threshold", ClosedInterval: "interval", Box: "box"}[type(h)]
            lines.append(name + " " + " ".join(repr(float(p)) for p in h.params))
        return "\n".join(lines) + "\n"

    def __str__(self):
        if self.source:
            return f"finite(file={self.source})"
        return "finite(" + ", ".join(str(h) for h in self.members) + ")"


def brute_force_vc_dim(c: FiniteClass) -> int:
    """Largest shattered set among arrangement cells.

    Shattered sets are closed under subsets and there are at most |H| of
    them, so growing them level by level stays cheap.
    """
    cols = np.unique(c.predict_matrix(c.representative_points()).T, axis=0)
    # column j: the labeling of one cell by every member
    cols = [tuple(col) for col in cols]
    m = len(cols)
    best = 0
    level = [()]
    for k in range(1, m + 1):
        nxt = set()
        for s in level:
            start = s[-1] + 1 if s else 0
            for j in range(start, m):
                cand = s + (j,)
                patterns = {tuple(cols[i][r] for i in cand) for r in range(len(c))}
                if len(patterns) == 2 ** k:
                    nxt.add(cand)
        if not nxt:
            break
        best = k
        level = sorted(nxt)
    return best


class FiniteSpace(VersionSpace):
    def __init__(self, hclass: FiniteClass, mask, log=()):
        self.hclass = hclass
        self.mask = np.asarray(mask, dtype=bool).copy()
        self.log = tuple(log)

    def members(self):
        return [h for h, m in zip(self.hclass.members, self.mask) if m]

    def indices(self):
        return np.flatnonzero(self.mask)

    def _with(self, mask, entry):
        return FiniteSpace(self.hclass, self.mask & mask, self._logged(entry))

    def is_empty(self):
        return not self.mask.any()

    def contains(self, h):
        return self.hclass.is_member(h) and bool(self.mask[self.hclass.index_of(h)])

    def _active_predictions(self, xs):
        return self.hclass.predict_matrix(xs)[self.mask]

    def dis_contains(self, xs):
        p = self._active_predictions(xs)
        if p.shape[0] == 0:
            return np.zeros(p.shape[1], dtype=bool)
        return p.any(axis=0) & ~p.all(axis=0)

    def agree_positive_mask(self, xs):
        self.require_nonempty()
        return self._active_predictions(xs).all(axis=0)

    def dis_region(self):
        if self.hclass.dim == 1:
            return from_predicate(self.dis_contains, self.hclass.endpoints(self.mask))
        return PredicateRegion(self.dis_contains, 2, "DIS")

    def agree_positive_region(self):
        self.require_nonempty()
        if self.hclass.dim == 1:
            return from_predicate(self.agree_positive_mask, self.hclass.endpoints(self.mask))
        return PredicateRegion(self.agree_positive_mask, 2, "agree-positive")

    def _restrict_positive(self, pts, name):
        keep = self.hclass.predict_matrix(pts).all(axis=1)
        return self._with(keep, Constraint("positive", name, len(pts)))

    def _restrict_negative(self, pts, name):
        keep = ~self.hclass.predict_matrix(pts).any(axis=1)
        return self._with(keep, Constraint("negative", name, len(pts)))

    def _intersect_ball(self, center, m, pts, name, radius):
        p = self.hclass.predict_matrix(pts)
        ref = center.predict(pts)
        counts = np.count_nonzero(p != ref[None, :], axis=1)
        return self._with(counts <= m, Constraint("ball", name, len(pts), center_name(center), radius))

    def positive_counts(self, xs):
        return np.count_nonzero(self.hclass.predict_matrix(xs), axis=1)

    def argmin_positive(self, xs):
        # lowest index among the minimizers
        self.require_nonempty()
        counts = self.positive_counts(xs).astype(float)
        counts[~self.mask] = np.inf
        return self.hclass.members[int(np.argmin(counts))]

    def sup_error(self, target, d):
        from ..scenario import disagreement_mass

        self.require_nonempty()
        return max(disagreement_mass(d, h, target).value for h in self.members())

    def __repr__(self):
        return f"FiniteSpace({self.indices().tolist()} of {len(self.hclass)})"


def pairwise_rho(c: FiniteClass, d) -> np.ndarray:
    from ..scenario import disagreement_mass

    k = len(c)
    out = np.zeros((k, k))
    for i, j in combinations(range(k), 2):
        out[i, j] = out[j, i] = disagreement_mass(d, c.members[i], c.members[j]).value
    return out


def theta_exact(c: FiniteClass, d) -> float:
    """Raw sup over h and critical radii of Delta(B(h, r)) / r.

    Delta(B(h, r)) only changes at r = rho(h, h'), and between those values
    the ratio decreases, so the sup is attained at one of them.
    """
    from ..scenario import region_mass

    rho = pairwise_rho(c, d)
    cache: dict[bytes, float] = {}
    best = 0.0
    for i in range(len(c)):
        for r in np.unique(rho[i][rho[i] > 0]):
            ball = rho[i] <= r
            key = ball.tobytes()
            if key not in cache:
                cache[key] = region_mass(d, FiniteSpace(c, ball).dis_region()).value
            best = max(best, cache[key] / r)
    return best


__all__ = ["FiniteClass", "FiniteSpace", "brute_force_vc_dim", "theta_exact", "pairwise_rho", "ZERO", "IntervalUnion"]
