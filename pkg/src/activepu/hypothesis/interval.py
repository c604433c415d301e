"""Closed intervals [a, b] on the line with a minimum width.

Version spaces keep the raw constraint list (positives, negatives, empirical
balls) and resolve it lazily.  Every constraint only depends on how many
sample points lie below ``a``, so the a-axis splits into cells between
consecutive critical points; inside a cell the admissible b-values form a
small union of intervals that is computed for all cells at once with numpy.
The members are then the union over cells of the polygons
``{(a, b): a in cell, b in piece, b >= a + w_min}``.

Strict inequalities coming from negatives and ball budgets are resolved as
closed bounds in the region algebra (they only move measure-zero boundary
points); membership of concrete hypotheses is always checked against the
exact constraints.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import EmptyVersionSpace, UnboundedCoefficient
from ..regions import INF, Interval, IntervalUnion
from .base import ZERO, ClosedInterval, Constraint, VersionSpace, center_name


@dataclass(frozen=True)
class IntervalClass:
    w_min: float = 0.1
    lo: float = 0.0
    hi: float = 1.0
    kind = "interval-1d-minwidth"
    vc_dim = 2
    dim = 1

    def __post_init__(self):
        if not np.isfinite(self.lo) or not np.isfinite(self.hi):
            raise ValueError("interval parameter range must be finite")
        if self.w_min < 0:
            raise ValueError("w_min must be >= 0")
        if not self.lo + self.w_min <= self.hi:
            raise ValueError("parameter range is narrower than w_min")

    def full(self) -> "IntervalSpace":
        return IntervalSpace(self)

    def is_member(self, h) -> bool:
        return (
            isinstance(h, ClosedInterval)
            and h.a >= self.lo
            and h.b <= self.hi
            and h.b >= h.a + self.w_min
        )

    def hypothesis(self, a: float, b: float) -> ClosedInterval:
        h = ClosedInterval(float(a), float(b))
        if not self.is_member(h):
            raise ValueError(f"{h} is not in {self}")
        return h

    def theta_analytic(self, d):
        # uniform over exactly the parameter range: balls around wide intervals
        # give 4r, balls of radius 2w around the narrowest ones cover everything
        from ..scenario import UniformBox

        if not isinstance(d, UniformBox) or d.dim != 1:
            return None
        if (d.lows[0], d.highs[0]) != (self.lo, self.hi):
            return None
        w = self.w_min / (self.hi - self.lo)
        if w == 0:
            raise UnboundedCoefficient(INF, None)
        if w > 0.25:
            return None
        return max(4.0, 1.0 / (2.0 * w))

    def theta_grid(self, d, resolution: int = 100, radii=None, centers=None):
        return interval_theta_grid(self, d, resolution, radii, centers)

    def __str__(self):
        base = f"interval(w_min={self.w_min:g}"
        if (self.lo, self.hi) != (0.0, 1.0):
            base += f", lo={self.lo:g}, hi={self.hi:g}"
        return base + ")"


def _cnt(s, lo, hi):
    """#{x in s : lo <= x <= hi} for sorted s; vectorized over lo/hi."""
    return np.searchsorted(s, hi, side="right") - np.searchsorted(s, lo, side="left")


def _at(s, idx):
    """s[idx] where in range, +inf beyond the end."""
    idx = np.asarray(idx)
    out = np.full(idx.shape, INF)
    ok = (idx >= 0) & (idx < len(s))
    out[ok] = s[idx[ok]]
    return out


def _intersect_pieces(lo1, hi1, lo2, hi2):
    n = lo1.shape[0]
    lo = np.maximum(lo1[:, :, None], lo2[:, None, :]).reshape(n, -1)
    hi = np.minimum(hi1[:, :, None], hi2[:, None, :]).reshape(n, -1)
    bad = ~(lo <= hi)
    lo[bad] = np.nan
    hi[bad] = np.nan
    order = np.argsort(np.where(bad, INF, lo), axis=1, kind="stable")
    lo = np.take_along_axis(lo, order, axis=1)
    hi = np.take_along_axis(hi, order, axis=1)
    k = max(int((~bad).sum(axis=1).max(initial=0)), 1)
    return lo[:, :k], hi[:, :k]


@dataclass
class _Resolved:
    alo: np.ndarray  # polygon a-range lower end (open unless singleton)
    amax: np.ndarray  # largest a in the polygon
    blo: np.ndarray  # smallest b
    bhi: np.ndarray  # largest b
    singleton: np.ndarray  # a-range is the closed point {alo}

    def __len__(self):
        return len(self.alo)


class IntervalSpace(VersionSpace):
    def __init__(self, hclass: IntervalClass, pos=None, negs=None, balls0=(), ballsh=(), log=()):
        self.hclass = hclass
        self.pos = pos  # (min, max) of all positive points, or None
        self.negs = np.empty(0) if negs is None else negs
        self.balls0 = tuple(balls0)  # (sorted sample, budget)
        self.ballsh = tuple(ballsh)  # (sorted sample, c, d, budget)
        self.log = tuple(log)
        self._res: _Resolved | None = None
        self._union = None
        self._core = None

    def _copy(self, entry, **kw):
        args = dict(pos=self.pos, negs=self.negs, balls0=self.balls0, ballsh=self.ballsh)
        args.update(kw)
        return IntervalSpace(self.hclass, log=self._logged(entry), **args)

    # --- exact membership ---------------------------------------------------
    def contains(self, h):
        if not self.hclass.is_member(h):
            return False
        a, b = h.a, h.b
        if self.pos is not None and not (a <= self.pos[0] and b >= self.pos[1]):
            return False
        if len(self.negs):
            i = np.searchsorted(self.negs, a, side="left")
            if i < len(self.negs) and self.negs[i] <= b:
                return False
        for s, m in self.balls0:
            if _cnt(s, a, b) > m:
                return False
        for s, c, d, m in self.ballsh:
            both = _cnt(s, max(a, c), min(b, d)) if max(a, c) <= min(b, d) else 0
            if _cnt(s, a, b) + _cnt(s, c, d) - 2 * both > m:
                return False
        return True

    # --- restrictions -------------------------------------------------------
    def _restrict_positive(self, pts, name):
        lo, hi = float(np.min(pts)), float(np.max(pts))
        if self.pos is not None:
            lo, hi = min(lo, self.pos[0]), max(hi, self.pos[1])
        return self._copy(Constraint("positive", name, len(pts)), pos=(lo, hi))

    def _restrict_negative(self, pts, name):
        negs = np.unique(np.concatenate([self.negs, np.asarray(pts, dtype=float)]))
        return self._copy(Constraint("negative", name, len(pts)), negs=negs)

    def _intersect_ball(self, center, m, pts, name, radius):
        s = np.sort(np.asarray(pts, dtype=float))
        entry = Constraint("ball", name, len(s), center_name(center), radius)
        if center is ZERO:
            return self._copy(entry, balls0=self.balls0 + ((s, m),))
        if isinstance(center, ClosedInterval):
            return self._copy(entry, ballsh=self.ballsh + ((s, center.a, center.b, m),))
        raise TypeError(f"unsupported ball center {center!r}")

    # --- resolution ---------------------------------------------------------
    def _critical(self):
        L, amax = self.hclass.lo, self.hclass.hi - self.hclass.w_min
        parts = [np.array([L, amax]), self.negs]
        if self.pos is not None:
            parts.append(np.array([self.pos[0]]))
        for s, _ in self.balls0:
            parts.append(s)
        for s, c, d, _ in self.ballsh:
            parts.extend([s, np.array([c, d])])
        crit = np.unique(np.concatenate(parts))
        return crit[(crit >= L) & (crit <= amax)]

    def resolved(self) -> _Resolved:
        if self._res is None:
            self._res = self._resolve()
        return self._res

    def _resolve(self) -> _Resolved:
        w, R = self.hclass.w_min, self.hclass.hi
        crit = self._critical()
        # cell 0 is the closed point {L}; cell j > 0 is (crit[j-1], crit[j]]
        alo = np.concatenate([crit[:1], crit[:-1]])
        ahi = crit
        single = np.zeros(len(crit), dtype=bool)
        single[0] = True
        a = ahi
        n = len(a)
        lo = np.full((n, 1), -INF)
        hi = np.full((n, 1), INF)

        def apply(plo, phi):
            nonlocal lo, hi
            lo, hi = _intersect_pieces(lo, hi, plo, phi)

        if self.pos is not None:
            ok = a <= self.pos[0]
            apply(np.where(ok, self.pos[1], np.nan)[:, None], np.where(ok, INF, np.nan)[:, None])
        if len(self.negs):
            nxt = _at(self.negs, np.searchsorted(self.negs, a, side="left"))
            apply(np.full((n, 1), -INF), nxt[:, None])
        for s, m in self.balls0:
            top = _at(s, np.searchsorted(s, a, side="left") + m)
            apply(np.full((n, 1), -INF), top[:, None])
        for s, c, d, m in self.ballsh:
            apply(*self._ballh_pieces(a, s, c, d, m))

        # coupling with the a-range: b >= a + w, b <= R
        floor = alo + w
        lo = np.maximum(lo, floor[:, None])
        hi = np.minimum(hi, R)
        valid = (lo <= hi) & np.where(single[:, None], True, hi > floor[:, None])
        cell, piece = np.nonzero(valid)
        blo, bhi = lo[cell, piece], hi[cell, piece]
        amax = np.minimum(ahi[cell], bhi - w)
        return _Resolved(alo[cell], amax, blo, bhi, single[cell])

    @staticmethod
    def _ballh_pieces(a, s, c, d, m):
        n = len(a)
        K = int(_cnt(s, c, d))
        nlt_a = np.searchsorted(s, a, side="left")
        right = a > d
        before = a < c
        e = np.maximum(a, c)
        nlt_e = np.searchsorted(s, e, side="left")
        nle_d = int(np.searchsorted(s, d, side="right"))
        lo = np.full((n, 2), np.nan)
        hi = np.full((n, 2), np.nan)
        # interval entirely right of the center: cost = cnt(a, b) + K
        if m - K >= 0:
            top = _at(s, nlt_a + (m - K))
            lo[right, 0] = -INF
            hi[right, 0] = top[right]
            # region b < c when a < c behaves the same way
            sel = before & ~right
            lo[sel, 0] = -INF
            hi[sel, 0] = np.minimum(top[sel], c)
        # b in [e, ...): overlap with the center
        cnt_ae = nlt_e - nlt_a
        cnt_ed = nle_d - nlt_e
        feasible = ~right & (cnt_ae + K - cnt_ed <= m)
        need = cnt_ae + K - m
        beta2 = np.where(need <= 0, np.where(before, c, -INF), _at(s, nlt_e + need - 1))
        beta3 = _at(s, nlt_a + (m - K + 2 * cnt_ed))
        lo[feasible, 1] = beta2[feasible]
        hi[feasible, 1] = beta3[feasible]
        return lo, hi

    # --- derived regions ----------------------------------------------------
    def is_empty(self):
        return len(self.resolved()) == 0

    def union_region(self) -> IntervalUnion:
        if self._union is None:
            r = self.resolved()
            self._union = IntervalUnion(
                Interval(float(l), float(h), bool(sg), True)
                for l, h, sg in zip(r.alo, r.bhi, r.singleton)
            )
        return self._union

    def core(self):
        """(A, B) with every member containing [A, B]; None when nothing is shared."""
        if self._core is None:
            r = self.resolved()
            A, B = float(r.amax.max()), float(r.blo.min())
            self._core = (A, B) if A <= B else ()
        return self._core or None

    def dis_region(self):
        if self.is_empty():
            return IntervalUnion.empty()
        core = self.core()
        u = self.union_region()
        return u if core is None else u.minus(IntervalUnion.of(*core))

    def dis_contains(self, xs):
        x = np.asarray(xs, dtype=float)
        if self.is_empty():
            return np.zeros(x.shape, dtype=bool)
        inside = self.union_region().contains(x)
        core = self.core()
        if core is not None:
            inside &= ~((x >= core[0]) & (x <= core[1]))
        return inside

    def agree_positive_region(self):
        self.require_nonempty()
        core = self.core()
        return IntervalUnion.empty() if core is None else IntervalUnion.of(*core)

    def agree_positive_mask(self, xs):
        self.require_nonempty()
        x = np.asarray(xs, dtype=float)
        core = self.core()
        if core is None:
            return np.zeros(x.shape, dtype=bool)
        return (x >= core[0]) & (x <= core[1])

    # --- argmin -------------------------------------------------------------
    def argmin_positive(self, xs):
        """Fewest points of ``xs`` inside; ties: narrowest, then leftmost."""
        self.require_nonempty()
        r = self.resolved()
        w = self.hclass.w_min
        s = np.sort(np.asarray(xs, dtype=float))
        P = np.unique(s)
        cands_a, cands_b = [], []

        # b pinned at its lower end, a as large as allowed
        a1 = np.minimum(r.amax, r.blo - w)
        fix = a1 + w > r.blo
        a1[fix] = np.nextafter(a1[fix], -INF)
        ok1 = np.where(r.singleton, a1 >= r.alo, a1 > r.alo)
        cands_a.append(a1[ok1])
        cands_b.append(r.blo[ok1])

        # width exactly w; a in [a0, amax]
        a0 = np.maximum(r.alo, r.blo - w)
        okw = a0 <= r.amax
        closed0 = okw & (r.singleton | (a0 > r.alo))
        cands_a.append(a0[closed0])
        cands_b.append(np.maximum(a0[closed0] + w, r.blo[closed0]))
        if len(P):
            after = _cnt_open_closed(s, P, P + w)
            table = _SparseArgmin(after)
            i0 = np.searchsorted(P, a0, side="left")
            i1 = np.searchsorted(P, r.amax, side="left")
            rng_ok = okw & (i1 > i0)
            if rng_ok.any():
                k = table.query(i0[rng_ok], i1[rng_ok])
                a = np.nextafter(P[k], INF)
                cands_a.append(a)
                cands_b.append(np.maximum(a + w, r.blo[rng_ok]))
        # open a-range starting exactly at alo: a just above alo
        open0 = okw & ~r.singleton & (a0 == r.alo)
        a = np.nextafter(r.alo[open0], INF)
        cands_a.append(a)
        cands_b.append(np.maximum(a + w, r.blo[open0]))

        ca = np.concatenate(cands_a)
        cb = np.concatenate(cands_b)
        counts = _cnt(s, ca, cb) if len(s) else np.zeros(len(ca), dtype=int)
        order = np.lexsort((ca, cb - ca, counts))
        for i in order:
            h = ClosedInterval(float(ca[i]), float(cb[i]))
            if self.contains(h):
                return h
        raise EmptyVersionSpace("no concrete member found while resolving the version space")

    # --- diagnostics ----------------------------------------------------------
    def sup_error(self, target, d):
        self.require_nonempty()
        r = self.resolved()
        w = self.hclass.w_min
        ta, tb = target.a, target.b
        fta, ftb = float(d.cdf(ta)), float(d.cdf(tb))
        a_c = [r.alo, r.amax] + [np.clip(v, r.alo, r.amax) for v in (ta, tb, ta - w, tb - w)]
        a_c += [r.alo + (r.amax - r.alo) * t for t in np.linspace(0, 1, 33)[1:-1]]
        best = 0.0
        for a in a_c:
            bmin = np.maximum(r.blo, a + w)
            b_c = [bmin, r.bhi] + [np.clip(v, bmin, r.bhi) for v in (ta, tb, ta + w, tb + w)]
            fa = d.cdf(a)
            for b in b_c:
                fb = d.cdf(b)
                ov = np.maximum(0.0, d.cdf(np.minimum(b, tb)) - d.cdf(np.maximum(a, ta)))
                err = (fb - fa) + (ftb - fta) - 2 * ov
                best = max(best, float(err.max()))
        return best

    def __repr__(self):
        return f"IntervalSpace({self.union_region()}, log={len(self.log)})"


def _cnt_open_closed(s, lo, hi):
    """#{x in s : lo < x <= hi}."""
    return np.searchsorted(s, hi, side="right") - np.searchsorted(s, lo, side="right")


class _SparseArgmin:
    """Range argmin over a static array; ties resolve to the lowest index."""

    def __init__(self, values):
        v = np.asarray(values)
        self.v = v
        self.levels = [np.arange(len(v))]
        span = 1
        while 2 * span <= len(v):
            prev = self.levels[-1]
            left, right = prev[: len(v) - 2 * span + 1], prev[span: len(v) - span + 1]
            self.levels.append(np.where(v[right] < v[left], right, left))
            span *= 2

    def query(self, i0, i1):
        """argmin over [i0, i1) for each pair (requires i1 > i0)."""
        length = i1 - i0
        k = np.floor(np.log2(length)).astype(int)
        out = np.empty(len(i0), dtype=int)
        for lev in np.unique(k):
            sel = k == lev
            table = self.levels[lev]
            left = table[i0[sel]]
            right = table[i1[sel] - (1 << lev)]
            out[sel] = np.where(self.v[right] < self.v[left], right, left)
        return out


# ---------------------------------------------------------------------------
# disagreement coefficient on a grid


def interval_theta_grid(c: IntervalClass, d, resolution=100, radii=None, centers=None,
                        x_cells: int | None = None):
    """Grid estimate of sup_h sup_r Delta(B(h, r)) / r.

    For a center h and a point x, the smallest rho(h, h') over members h'
    that disagree with h at x has a closed form (stretch an endpoint, slide
    one endpoint past x, or jump to a disjoint narrowest interval).  This
    cost is continuous in x, so it is evaluated on a fine x-grid containing
    every center endpoint and interpolated linearly in CDF scale; the mass
    {x : cost(x) <= r} is then exact for piecewise-linear costs.
    """
    resolution = max(int(resolution), 100)
    radii = np.logspace(-4, 0, resolution) if radii is None else np.asarray(radii, dtype=float)
    L, R, w = c.lo, c.hi, c.w_min
    ag = np.linspace(L, R - w, resolution)
    bg = np.linspace(L + w, R, resolution)
    if centers is None:
        A, B = np.meshgrid(ag, bg, indexing="ij")
        keep = B >= A + w
        centers = list(zip(A[keep], B[keep])) + [(a, a + w) for a in ag]
    else:
        centers = [(h.a, h.b) for h in centers]
    G = x_cells or 10 * resolution
    extra = np.array([v for ab in centers for v in ab]) if len(centers) < 50 else np.concatenate([ag, bg])
    x = np.unique(np.concatenate([np.linspace(L, R, G + 1), extra]))
    fx = d.cdf(x)
    mass = np.diff(fx)

    # narrowest-interval masses for starting points on a fine grid
    starts = np.unique(np.concatenate([np.linspace(L, R - w, 4 * G + 1), np.clip(x, L, R - w), np.clip(x - w, L, R - w)]))
    win = d.cdf(starts + w) - d.cdf(starts)
    lo_i = np.searchsorted(starts, x - w, side="left")
    hi_i = np.searchsorted(starts, x, side="right")
    table = _SparseArgmin(win)
    contain = np.full(len(x), INF)
    ok = hi_i > lo_i
    contain[ok] = win[table.query(lo_i[ok], hi_i[ok])]
    pref = np.minimum.accumulate(win)
    suff = np.minimum.accumulate(win[::-1])[::-1]
    k_left = np.searchsorted(starts + w, x, side="left")  # start + w < x
    left = np.where(k_left > 0, pref[np.maximum(k_left - 1, 0)], INF)
    k_right = np.searchsorted(starts, x, side="right")  # start > x
    right = np.where(k_right < len(starts), suff[np.minimum(k_right, len(starts) - 1)], INF)
    outside_any = np.minimum(left, right)
    fxw_r = np.where(x + w <= R, d.cdf(np.minimum(x + w, R)), np.nan)
    fxw_l = np.where(x - w >= L, d.cdf(np.maximum(x - w, L)), np.nan)

    best = 0.0
    for a, b in centers:
        fa, fb = float(d.cdf(a)), float(d.cdf(b))
        mh = fb - fa
        inside = (x >= a) & (x <= b)
        ext = np.where(x < a, fa - fx, fx - fb)
        incl = np.minimum(ext, mh + contain)
        move_a = np.where(np.isnan(fxw_r), INF, (fx - fa) + np.maximum(0.0, fxw_r - fb))
        move_b = np.where(np.isnan(fxw_l), INF, (fb - fx) + np.maximum(0.0, fa - fxw_l))
        excl = np.minimum(np.minimum(move_a, move_b), mh + outside_any)
        cost = np.where(inside, excl, incl)
        dis = _mass_below(cost, mass, radii)
        best = max(best, float(np.max(dis / radii)))
    return best


def _mass_below(cost, mass, radii):
    """sum over cells of mass * fraction of the cell with interpolated cost <= r."""
    c0, c1 = cost[:-1], cost[1:]
    lo, hi = np.minimum(c0, c1), np.maximum(c0, c1)
    finite = np.isfinite(hi)
    flat = finite & (hi - lo <= 1e-15)
    ramp = finite & ~flat
    out = np.zeros(len(radii))
    if flat.any():
        v = np.sort(lo[flat])
        cm = np.concatenate([[0.0], np.cumsum(mass[flat][np.argsort(lo[flat])])])
        out += cm[np.searchsorted(v, radii, side="right")]
    if ramp.any():
        slope = mass[ramp] / (hi[ramp] - lo[ramp])
        for edge, sign in ((lo[ramp], 1.0), (hi[ramp], -1.0)):
            order = np.argsort(edge)
            e, s = edge[order], slope[order]
            cs = np.concatenate([[0.0], np.cumsum(s)])
            cse = np.concatenate([[0.0], np.cumsum(s * e)])
            k = np.searchsorted(e, radii, side="right")
            out += sign * (radii * cs[k] - cse[k])
    # cells touching an infinite cost are not counted
    return out
