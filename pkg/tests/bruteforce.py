"""Exhaustive-enumeration oracle for finite hypothesis classes.

Every quantity is recomputed member by member with plain Python loops,
independently of the bitmask implementation under test.
"""

from __future__ import annotations

import numpy as np

from activepu.errors import EmptyVersionSpace
from activepu.hypothesis import ZERO, ClosedInterval, LabeledSample, Threshold, rho_sample
from activepu.hypothesis.finite import FiniteClass
from activepu.passive_pu import learn_pu
from activepu.scenario import Uniform

U = Uniform(0, 1)
GRID = np.round(np.linspace(0, 1, 41), 3)  # shared value grid forces ties and duplicates


def random_class(rng) -> FiniteClass:
    size = int(rng.integers(1, 65))
    kinds = rng.choice(["threshold", "interval", "mixed"])
    members = set()
    while len(members) < size:
        kind = kinds if kinds != "mixed" else rng.choice(["threshold", "interval"])
        if kind == "threshold":
            members.add(Threshold(float(rng.choice(GRID))))
        else:
            a, b = sorted(rng.choice(GRID, 2))
            members.add(ClosedInterval(float(a), float(b)))
        if len(members) >= 41 and kinds == "threshold":
            break
    members = sorted(members, key=lambda h: (type(h).__name__, h.params))
    rng.shuffle(members)
    return FiniteClass(members, vc_dim=2)


def predicts(h, x) -> bool:
    if isinstance(h, Threshold):
        return x >= h.a
    if isinstance(h, ClosedInterval):
        return h.a <= x <= h.b
    return False  # ZERO


def count_disagree(h, g, xs) -> int:
    return sum(1 for x in xs if predicts(h, x) != predicts(g, x))


def apply_brute(members, op, arg):
    kind = op
    if kind == "pos":
        return [h for h in members if all(predicts(h, x) for x in arg)]
    if kind == "neg":
        return [h for h in members if not any(predicts(h, x) for x in arg)]
    center, r, xs = arg
    n = len(xs)
    if n == 0 or r >= 1:
        return list(members)
    return [h for h in members if count_disagree(h, center, xs) / n <= r]


def apply_impl(v, op, arg):
    if op == "pos":
        return v.restrict_positive(np.array(arg))
    if op == "neg":
        return v.restrict_negative(np.array(arg))
    center, r, xs = arg
    return v.intersect_ball(center, r, LabeledSample(np.array(xs)))


def dis_mass_brute(members) -> float:
    """Exact uniform mass: DIS is constant between consecutive endpoints."""
    cuts = sorted({0.0, 1.0} | {p for h in members for p in h.params if 0 <= p <= 1})
    total = 0.0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        mid = (lo + hi) / 2
        vals = {predicts(h, mid) for h in members}
        if len(vals) == 2:
            total += hi - lo
    return total


def check_instance(rng) -> list[str]:
    """Run one random micro-instance; returns a list of mismatch descriptions."""
    c = random_class(rng)
    bad: list[str] = []
    n_s = int(rng.integers(0, 201))
    S = [float(x) for x in rng.choice(GRID, n_s)]
    v = c.full()
    ref = list(c.members)
    for _ in range(int(rng.integers(1, 5))):
        op = rng.choice(["pos", "neg", "ball", "ball"])
        if op in ("pos", "neg"):
            arg = [float(x) for x in rng.choice(GRID, int(rng.integers(0, 4)))]
        else:
            center = ZERO if rng.random() < 0.3 else c.members[int(rng.integers(len(c)))]
            arg = (center, float(rng.choice([0.0, 0.1, 0.25, 0.5, rng.random()])), S)
        nxt_ref = apply_brute(ref, op, arg)
        try:
            nxt = apply_impl(v, op, arg)
        except EmptyVersionSpace:
            if nxt_ref:
                bad.append(f"{op}: implementation empty, enumeration has {len(nxt_ref)}")
            return bad
        if not nxt_ref:
            bad.append(f"{op}: enumeration empty, implementation not")
            return bad
        v, ref = nxt, nxt_ref
        if v.members() != [h for h in c.members if h in set(ref)]:
            bad.append(f"{op}: member sets differ")
            return bad
    probe = np.unique(np.concatenate([GRID, (GRID[:-1] + GRID[1:]) / 2]))
    dis_ref = np.array([len({predicts(h, x) for h in ref}) == 2 for x in probe])
    if not np.array_equal(v.dis_contains(probe), dis_ref):
        bad.append("dis_contains")
    if not np.array_equal(v.dis_region().contains(probe), dis_ref):
        bad.append("dis_region")
    agree_ref = np.array([all(predicts(h, x) for h in ref) for x in probe])
    if not np.array_equal(v.agree_positive_mask(probe), agree_ref):
        bad.append("agree_positive_mask")
    if not np.array_equal(v.agree_positive_region().contains(probe), agree_ref):
        bad.append("agree_positive_region")
    if abs(v.dis_mass(U).value - dis_mass_brute(ref)) > 1e-12:
        bad.append("dis_mass")
    if S:
        h, g = ref[0], ref[-1]
        if rho_sample(h, g, np.array(S)) != count_disagree(h, g, S) / len(S):
            bad.append("rho")
    # h^PU over the survivors: min positive count, lowest class index on ties
    P = [x for x in S[: len(S) // 4] if all(predicts(h, x) for h in ref[:1])]
    cand = [h for h in ref if all(predicts(h, x) for x in P)]
    best = min(cand, key=lambda h: (sum(predicts(h, x) for x in S), c.index_of(h)))
    got = learn_pu(c, np.array(P), np.array(S), within=v).hypothesis
    if got != best:
        bad.append(f"learn_pu: {got} vs {best}")
    return bad
