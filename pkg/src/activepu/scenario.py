"""Ground-truth world: instance distributions, target rule, reveal rate.

Normal CDFs use :func:`scipy.special.ndtr` (the Cephes implementation that
scipy ships and compiles itself), which keeps "exact" masses identical
across platforms; its absolute error is well below 1e-12.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
from scipy.special import ndtr

from .errors import RejectionBudgetExceeded
from .regions import IntervalUnion, PredicateRegion
from .rng import RngStream

MC_SAMPLES = 100_000
# proposals drawn per rejection round are bounded so memory stays flat
_MAX_BATCH = 1 << 20


class MassEstimate(NamedTuple):
    value: float
    mode: str  # "exact" or "mc"
    stderr: float = 0.0


class Distribution:
    """Continuous distribution over R^dim.  Subclasses fill in the pieces."""

    kind = "abstract"
    dim = 1

    def sample(self, rng: RngStream, n: int) -> np.ndarray:
        raise NotImplementedError

    def cdf(self, x):
        raise NotImplementedError(f"{self.kind} has no closed-form CDF")

    def support(self) -> tuple[float, float]:
        raise NotImplementedError

    @property
    def has_cdf(self) -> bool:
        return self.dim == 1


@dataclass(frozen=True)
class UniformBox(Distribution):
    lows: tuple[float, ...] = (0.0,)
    highs: tuple[float, ...] = (1.0,)
    kind = "uniform-box"

    def __post_init__(self):
        if len(self.lows) != len(self.highs) or not self.lows:
            raise ValueError("uniform box needs matching, nonempty bounds")
        if any(not (h > l) for l, h in zip(self.lows, self.highs)):
            raise ValueError("uniform box needs high > low on every axis")
        if not all(np.isfinite(self.lows)) or not all(np.isfinite(self.highs)):
            raise ValueError("uniform box bounds must be finite")

    @property
    def dim(self) -> int:  # type: ignore[override]
        return len(self.lows)

    def sample(self, rng, n):
        u = rng.gen.random((n, self.dim))
        lo = np.asarray(self.lows)
        out = lo + u * (np.asarray(self.highs) - lo)
        return out[:, 0] if self.dim == 1 else out

    def cdf(self, x):
        if self.dim != 1:
            raise NotImplementedError("CDF only defined for 1D boxes")
        lo, hi = self.lows[0], self.highs[0]
        return np.clip((np.asarray(x, dtype=float) - lo) / (hi - lo), 0.0, 1.0)

    def support(self):
        return self.lows[0], self.highs[0]

    def __str__(self):
        if self.dim == 1:
            return f"uniform({self.lows[0]:g}, {self.highs[0]:g})"
        args = ", ".join(f"{l:g}, {h:g}" for l, h in zip(self.lows, self.highs))
        return f"uniform_box({args})"


def Uniform(lo: float = 0.0, hi: float = 1.0) -> UniformBox:
    return UniformBox((float(lo),), (float(hi),))


@dataclass(frozen=True)
class Gaussian1D(Distribution):
    mean: float = 0.0
    std: float = 1.0
    kind = "gaussian-1d"

    def __post_init__(self):
        if not self.std > 0 or not np.isfinite(self.mean):
            raise ValueError("gaussian needs finite mean and std > 0")

    def sample(self, rng, n):
        return self.mean + self.std * rng.gen.standard_normal(n)

    def cdf(self, x):
        return ndtr((np.asarray(x, dtype=float) - self.mean) / self.std)

    def support(self):
        return -np.inf, np.inf

    def __str__(self):
        return f"gaussian({self.mean:g}, {self.std:g})"


@dataclass(frozen=True)
class Mixture(Distribution):
    components: tuple[Distribution, ...] = ()
    weights: tuple[float, ...] = ()
    kind = "mixture"

    def __post_init__(self):
        if not self.components or len(self.components) != len(self.weights):
            raise ValueError("mixture needs one weight per component")
        if any(w <= 0 for w in self.weights):
            raise ValueError("mixture weights must be positive")
        if abs(sum(self.weights) - 1.0) > 1e-12:
            raise ValueError(f"mixture weights sum to {sum(self.weights)!r}, not 1")
        if len({c.dim for c in self.components}) != 1:
            raise ValueError("mixture components must share a dimension")

    @property
    def dim(self) -> int:  # type: ignore[override]
        return self.components[0].dim

    def sample(self, rng, n):
        idx = rng.gen.choice(len(self.components), size=n, p=np.asarray(self.weights))
        shape = (n,) if self.dim == 1 else (n, self.dim)
        out = np.empty(shape)
        for j, comp in enumerate(self.components):
            sel = idx == j
            out[sel] = comp.sample(rng, int(sel.sum()))
        return out

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return sum(w * c.cdf(x) for w, c in zip(self.weights, self.components))

    def support(self):
        lo = min(c.support()[0] for c in self.components)
        hi = max(c.support()[1] for c in self.components)
        return lo, hi

    def __str__(self):
        return "mixture(" + ", ".join(f"{w:g}*{c}" for w, c in zip(self.weights, self.components)) + ")"


def full_region(d: Distribution):
    if d.dim == 1:
        return IntervalUnion.everything()
    return PredicateRegion(lambda xs: np.ones(len(xs), dtype=bool), d.dim, "all")


# ---------------------------------------------------------------------------
# sampling and measure


def sample(d: Distribution, rng: RngStream, n: int) -> np.ndarray:
    if n < 0:
        raise ValueError("n must be >= 0")
    return d.sample(rng, int(n))


def region_mass(d: Distribution, region, rng: RngStream | None = None,
                mc_samples: int = MC_SAMPLES) -> MassEstimate:
    """Mass of ``region`` under ``d``: exact for interval unions, else MC."""
    if isinstance(region, IntervalUnion) and d.has_cdf:
        return MassEstimate(min(1.0, max(0.0, region.mass(d.cdf))), "exact", 0.0)
    rng = rng if rng is not None else RngStream(0, 0x6D63)
    xs = d.sample(rng, mc_samples)
    p = float(np.mean(region.contains(xs)))
    return MassEstimate(p, "mc", float(np.sqrt(p * (1 - p) / mc_samples)))


def conditional_sample(d: Distribution, region, rng: RngStream, n: int, cap: int,
                       stats: dict | None = None) -> np.ndarray:
    """``n`` i.i.d. draws from ``d`` restricted to ``region`` by rejection.

    At most ``cap`` proposals are drawn.  Proposals are made in batches whose
    sizes depend only on ``n``, ``cap`` and the acceptances so far, so the
    result is a deterministic function of the stream state.  ``stats``, if
    given, receives the number of proposals used under key ``"proposals"``.
    """
    if n < 0 or cap < n:
        raise ValueError("need cap >= n >= 0")
    shape = (n,) if d.dim == 1 else (n, d.dim)
    out = np.empty(shape)
    got = 0
    proposals = 0
    batch = max(64, n)
    while got < n:
        if proposals >= cap:
            if stats is not None:
                stats["proposals"] = stats.get("proposals", 0) + proposals
            raise RejectionBudgetExceeded(proposals, got, n)
        m = int(min(batch, cap - proposals, _MAX_BATCH))
        xs = d.sample(rng, m)
        proposals += m
        acc = xs[region.contains(xs)]
        take = min(len(acc), n - got)
        out[got:got + take] = acc[:take]
        got += take
        if got < n:
            # grow geometrically with the observed acceptance rate
            rate = max(got, 1) / proposals
            batch = int(min(_MAX_BATCH, max(2 * m, (n - got) / rate * 1.2)))
    if stats is not None:
        stats["proposals"] = stats.get("proposals", 0) + proposals
    return out


# ---------------------------------------------------------------------------
# scenario


@dataclass
class Scenario:
    """Distribution, target rule from a hypothesis class, and reveal rate.

    The class prior is always computed from the target and distribution;
    ``prior_hint`` is only compared against it.
    """

    distribution: Distribution
    hclass: object
    target: object
    omega: float
    prior_hint: float | None = None
    prior_tolerance: float = 1e-6
    _prior: MassEstimate | None = field(default=None, init=False, repr=False)

    def __post_init__(self):
        if not (0.0 < self.omega <= 1.0):
            raise ValueError("omega must be in (0, 1]")
        if not self.hclass.is_member(self.target):
            raise ValueError(f"target {self.target} is not a member of {self.hclass}")
        est = self.prior_estimate
        if not est.value > 0:
            raise ValueError("target has zero positive mass; no feedback is possible")
        if self.prior_hint is not None:
            tol = self.prior_tolerance if est.mode == "exact" else max(4 * est.stderr, 1e-3)
            if abs(self.prior_hint - est.value) > tol:
                raise ValueError(
                    f"configured prior {self.prior_hint} disagrees with computed {est.value:.6g}"
                )

    @property
    def prior_estimate(self) -> MassEstimate:
        if self._prior is None:
            self._prior = region_mass(self.distribution, self.target.region(self.distribution.dim))
        return self._prior

    @property
    def prior(self) -> float:
        return self.prior_estimate.value

    def label(self, xs) -> np.ndarray:
        return self.target.predict(xs)


def true_error(s: Scenario, h) -> MassEstimate:
    """D-mass of the set where ``h`` and the target disagree."""
    return disagreement_mass(s.distribution, h, s.target)


def disagreement_mass(d: Distribution, h1, h2) -> MassEstimate:
    if h1 == h2:
        return MassEstimate(0.0, "exact", 0.0)
    r1, r2 = h1.region(d.dim), h2.region(d.dim)
    if isinstance(r1, IntervalUnion) and isinstance(r2, IntervalUnion):
        return region_mass(d, r1.xor(r2))
    region = PredicateRegion(lambda xs: h1.predict(xs) != h2.predict(xs), d.dim, "xor")
    return region_mass(d, region)


def empirical_fraction(mask) -> float:
    mask = np.asarray(mask)
    return float(mask.mean()) if mask.size else 0.0


def as_points(xs) -> np.ndarray:
    pts = getattr(xs, "points", xs)
    return np.asarray(pts, dtype=float)


def check_finite(xs: Sequence) -> None:
    if not np.all(np.isfinite(as_points(xs))):
        raise ValueError("instances must have finite coordinates")
