"""Active PU learning when the class prior is known.

Prune the class to hypotheses whose empirical positive rate is at most
prior + gamma, then run disagreement-based sampling: only instances inside
DIS(V) are queried and every revealed positive shrinks V.  The run stops as
soon as the disagreement mass drops to eps (checked before the first query
as well).
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .audit import dis_positive_rate, target_in
from .errors import ActivePUError, EmptyVersionSpace
from .hypothesis import ZERO, LabeledSample, ThresholdSpace, disagreement_coefficient
from .hypothesis.finite import FiniteSpace
from .oracle import Feedback, PUOracle, QueryLedger
from .rng import as_stream
from .runtime import Budget, Caps, Constants, RunResult, RunTrace, failure_name
from .scenario import sample

BATCH = 4096


def known_pi_sizes(eps: float, delta: float, theta: float, vc_dim: int,
                   k_scale: float = 1.0) -> tuple[float, int]:
    """(gamma, k) with gamma = eps / 8 theta and the pruning-sample size k."""
    gamma = eps / (8.0 * theta)
    k = 128.0 * (vc_dim * math.log(128.0 / gamma) + math.log(8.0 / delta)) / gamma**2
    return gamma, max(1, math.ceil(k * k_scale))


def resolve_theta(c, d, theta=None) -> float:
    return float(theta) if theta is not None else disagreement_coefficient(c, d).value


def check_unit(name, value):
    if not 0.0 < value <= 1.0:
        raise ValueError(f"{name} must be in (0, 1]")


def prior_prune(v, s, S, gamma):
    """V0 = {h : fraction of S predicted positive <= prior + gamma}."""
    return v.intersect_ball(ZERO, s.prior + gamma, S)


def prune_sandwich_holds(v, S, bound) -> bool:
    """Largest empirical positive rate among survivors is within bound."""
    pts = S.points
    if isinstance(v, ThresholdSpace):
        a = float(np.nextafter(v.lo, np.inf)) if v.lo_open else v.lo
        return np.count_nonzero(pts >= a) / len(pts) <= bound
    if isinstance(v, FiniteSpace):
        return bool(np.all(v.positive_counts(pts)[v.mask] / len(pts) <= bound))
    return True  # interval class: holds by construction of the ball constraint


def disagreement_loop(s, holder, eps, draw_rng, budget, ask: Callable, trace, result,
                      audit=True):
    """Shared CAL-style loop.  ``ask(v, x)`` queries x and returns the new V.

    ``holder[0]`` always holds the current version space, so callers can
    still report it when a cap interrupts the loop.  Queries happen only on
    instances that lie in DIS(V) at request time.
    """
    d = s.distribution
    v = holder[0]
    t = 0
    delta_v = v.dis_mass(d).value
    trace.add("start", t, delta=delta_v)
    if delta_v <= eps:
        trace.add("halt", t, delta=delta_v)
        return v
    stats = _RoundStats(s, eps, audit)
    while True:
        n = min(BATCH, max(budget.remaining_draws(), 1))
        budget.draw(n)
        xs = sample(d, draw_rng, n)
        mask = v.dis_contains(xs)
        i = 0
        while True:
            hits = np.flatnonzero(mask[i:])
            if hits.size == 0:
                break
            i += int(hits[0])
            x = xs[i]
            audit_row = stats.row(v)
            in_dis = bool(v.dis_contains(xs[i:i + 1])[0]) if audit else True
            new_v = ask(v, x)
            t += 1
            changed = new_v is not v
            v = holder[0] = new_v
            if changed:
                delta_v = v.dis_mass(d).value
                mask = v.dis_contains(xs)
            trace.add("query", t, x=np.asarray(x).tolist(), delta=delta_v, changed=changed, in_dis=in_dis,
                      **audit_row)
            if changed and audit and not target_in(v, s) and "prune_failed" not in result.violations:
                result.flag("target_lost")
            if delta_v <= eps:
                budget.unlabeled -= n - (i + 1)
                trace.add("halt", t, delta=delta_v)
                return v
            i += 1


class _RoundStats:
    """Per-round sup-error and positive rate in DIS, cached per version space."""

    def __init__(self, s, eps, audit):
        self.s, self.eps, self.audit = s, eps, audit
        self._v = None
        self._row = {}

    def row(self, v):
        if not self.audit:
            return {}
        if v is not self._v:
            rate, mode = dis_positive_rate(v, self.s)
            sup = v.sup_error(self.s.target, self.s.distribution)
            self._v, self._row = v, {"pos_rate": rate, "sup_err": sup, "mode": mode}
        return self._row


def run_known_pi(s, c, eps: float, delta: float, consts: Constants = Constants(), rng=None,
                 caps: Caps = Caps(), theta: float | None = None, audit: bool = True) -> RunResult:
    check_unit("eps", eps)
    check_unit("delta", delta)
    rng = as_stream(rng)
    draw_rng, oracle_rng = rng.child(0), rng.child(1)
    d = s.distribution
    theta = resolve_theta(c, d, theta)
    gamma, k = known_pi_sizes(eps, delta, theta, c.vc_dim, consts.k_scale)
    ledger = QueryLedger()
    oracle = PUOracle(s, oracle_rng, ledger, caps.label_requests)
    budget = Budget(caps)
    trace = RunTrace()
    res = RunResult("known_pi", None, ledger, trace,
                    info={"gamma": gamma, "k": k, "theta": theta, "k_scale": consts.k_scale})
    v = c.full()
    holder = [v]
    try:
        budget.draw(k)
        S = LabeledSample(sample(d, draw_rng, k), "S")
        v = prior_prune(v, s, S, gamma)
        prune_ok = target_in(v, s)
        res.info["prune_ok"] = prune_ok
        if not prune_ok:
            res.flag("prune_failed")
        if audit and not prune_sandwich_holds(v, S, s.prior + gamma):
            res.flag("prune_sandwich")
        trace.add("prune", 0, delta=v.dis_mass(d).value, target_in=prune_ok)
        del S

        def ask(cur, x):
            fb = oracle.query(x, "loop")
            return cur.restrict_positive([x]) if fb is Feedback.POSITIVE else cur

        holder[0] = v
        v = disagreement_loop(s, holder, eps, draw_rng, budget, ask, trace, res, audit)
        res.hypothesis = v.representative()
    except EmptyVersionSpace as exc:
        res.outcome = failure_name(exc)
        res.flag("empty_version_space")
    except ActivePUError as exc:
        res.outcome = failure_name(exc)
        res.hypothesis = _safe_representative(holder[0])
    res.unlabeled_draws = budget.unlabeled
    return res


def _safe_representative(v):
    try:
        return v.representative()
    except ActivePUError:
        return None
