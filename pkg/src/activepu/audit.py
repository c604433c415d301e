"""Ground-truth checks the simulator can afford and a real learner cannot."""

from __future__ import annotations

import numpy as np

from .regions import IntervalUnion, PredicateRegion
from .scenario import region_mass


def target_in(v, s) -> bool:
    return (not v.is_empty()) and v.contains(s.target)


def dis_positive_rate(v, s):
    """Pr[target(x) = 1 | x in DIS(v)] and the estimator mode used.

    Returns (nan, mode) when DIS(v) has zero mass.
    """
    d = s.distribution
    dis = v.dis_region()
    pos = s.target.region(d.dim)
    if isinstance(dis, IntervalUnion) and isinstance(pos, IntervalUnion) and d.has_cdf:
        num = region_mass(d, dis.intersect(pos))
        den = region_mass(d, dis)
    else:
        both = PredicateRegion(lambda xs: dis.contains(xs) & pos.contains(xs), d.dim, "dis&pos")
        num, den = region_mass(d, both), region_mass(d, dis)
    if den.value <= 0:
        return float("nan"), den.mode
    return num.value / den.value, den.mode


def empirical_error(h, s, xs) -> float:
    xs = np.asarray(getattr(xs, "points", xs), dtype=float)
    if len(xs) == 0:
        return 0.0
    return float(np.count_nonzero(h.predict(xs) != s.label(xs))) / len(xs)
