"""Reference learners: classical CAL with full labels and passive PU."""

from __future__ import annotations

import math

import numpy as np

from .active_known_pi import (
    check_unit,
    disagreement_loop,
    known_pi_sizes,
    prior_prune,
    resolve_theta,
)
from .audit import target_in
from .errors import ActivePUError, CapExceeded, EmptyVersionSpace
from .hypothesis import LabeledSample
from .oracle import QueryLedger
from .passive_pu import learn_pu, passive_sample_size
from .rng import as_stream
from .runtime import Budget, Caps, Constants, RunResult, RunTrace, failure_name
from .scenario import sample


def run_cal(s, c, eps: float, delta: float, rng=None, caps: Caps = Caps(),
            consts: Constants = Constants(), prior_prune_first: bool = False,
            theta: float | None = None) -> RunResult:
    """CAL: query inside DIS(V) only, restrict V by the true label either way.

    ``prior_prune_first`` applies the same prior-based prune as the known-prior
    learner first, which makes the two directly comparable.
    """
    check_unit("eps", eps)
    check_unit("delta", delta)
    rng = as_stream(rng)
    draw_rng = rng.child(0)
    ledger = QueryLedger()
    budget = Budget(caps)
    trace = RunTrace()
    res = RunResult("cal", None, ledger, trace, info={"prior_prune": prior_prune_first})
    holder = [c.full()]
    try:
        if prior_prune_first:
            th = resolve_theta(c, s.distribution, theta)
            gamma, k = known_pi_sizes(eps, delta, th, c.vc_dim, consts.k_scale)
            budget.draw(k)
            S = LabeledSample(sample(s.distribution, draw_rng, k), "S")
            holder[0] = prior_prune(holder[0], s, S, gamma)
            res.info.update(gamma=gamma, k=k, prune_ok=target_in(holder[0], s))

        def ask(cur, x):
            if ledger.total_queries + 1 > caps.label_requests:
                raise CapExceeded("label-requests", caps.label_requests, ledger.total_queries + 1)
            y = bool(s.label(np.array([x]))[0])
            ledger.record("loop", 1, int(y))
            return cur.restrict_positive([x]) if y else cur.restrict_negative([x])

        v = disagreement_loop(s, holder, eps, draw_rng, budget, ask, trace, res, audit=False)
        res.hypothesis = v.representative()
    except EmptyVersionSpace as exc:
        res.outcome = failure_name(exc)
        res.flag("empty_version_space")
    except ActivePUError as exc:
        res.outcome = failure_name(exc)
        res.hypothesis = _rep(holder[0])
    res.unlabeled_draws = budget.unlabeled
    return res


def run_passive_pu_baseline(s, c, eps: float, delta: float, rng=None, caps: Caps = Caps(),
                            consts: Constants = Constants(), k: int | None = None) -> RunResult:
    """Draw k unlabeled points, then query fresh draws until k positives are revealed."""
    check_unit("eps", eps)
    check_unit("delta", delta)
    rng = as_stream(rng)
    draw_rng, oracle_rng = rng.child(0), rng.child(1)
    k = k if k is not None else passive_sample_size(eps, delta, c.vc_dim, consts.M1)
    ledger = QueryLedger()
    budget = Budget(caps)
    res = RunResult("passive_pu", None, ledger, RunTrace(), info={"k": k})
    d = s.distribution
    try:
        budget.draw(k)
        unlabeled = LabeledSample(sample(d, draw_rng, k), "SU")
        positives = collect_positives(s, k, draw_rng, oracle_rng, ledger, budget, caps)
        fit = learn_pu(c, positives, unlabeled)
        res.hypothesis = fit.hypothesis
        res.info["objective"] = fit.objective
    except ActivePUError as exc:
        res.outcome = failure_name(exc)
    res.unlabeled_draws = budget.unlabeled
    return res


def collect_positives(s, k, draw_rng, oracle_rng, ledger, budget, caps) -> LabeledSample:
    """Query fresh draws one by one until k are revealed; every query is charged."""
    d = s.distribution
    found: list = []
    need = k
    while need > 0:
        rate = max(s.prior * s.omega, 1e-3)
        n = int(min(max(64, math.ceil(1.2 * need / rate)), 1 << 20))
        budget.draw(n)
        xs = sample(d, draw_rng, n)
        coins = oracle_rng.gen.random(n)
        hit = s.label(xs) & (coins < s.omega)
        idx = np.flatnonzero(hit)
        used = n if len(idx) < need else int(idx[need - 1]) + 1
        budget.unlabeled -= n - used
        if ledger.total_queries + used > caps.label_requests:
            raise CapExceeded("label-requests", caps.label_requests, ledger.total_queries + used)
        got = xs[:used][hit[:used]]
        ledger.record("collect", used, len(got))
        found.append(got)
        need -= len(got)
    return LabeledSample(np.concatenate(found) if found else np.empty(0), "SP")


def _rep(v):
    try:
        return v.representative()
    except ActivePUError:
        return None
