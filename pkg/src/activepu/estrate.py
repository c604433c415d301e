"""Reveal-rate estimation by doubling.

Each round draws 2^i instances and queries all of them; the revealed ones
pin down a consistency version space, which a passive-PU fit on a second
sample of 2^i points then prunes.  Points of that second sample on which
every surviving hypothesis predicts 1 are (with high probability) truly
positive, so the fraction of them revealed on query estimates omega.
The loop stops on the first round whose revealed count reaches
8 ln(8/delta); the count restarts every round.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .audit import target_in
from .errors import ActivePUError, CapExceeded, DivisionByEmptyP, EmptyVersionSpace
from .hypothesis import LabeledSample
from .oracle import PUOracle, QueryLedger
from .passive_pu import learn_pu
from .rng import as_stream
from .runtime import Budget, Caps, Constants, RunResult, RunTrace, failure_name, growth_term
from .scenario import sample

MAX_ROUNDS = 40


@dataclass
class EstRateRound:
    i: int
    n: int  # |U| = |S| = 2^i
    revealed: int  # |R|
    gamma: float | None  # None when R is empty and pruning was skipped
    p_size: int
    r: int
    target_in_v: bool
    p_pure: bool  # every x in P has label 1


@dataclass
class EstRateState:
    rounds: list = field(default_factory=list)
    value: float | None = None


def estrate_gamma(n_revealed: int, vc_dim: int, delta: float, consts: Constants) -> float:
    return (consts.M1 + consts.M2) * (
        growth_term(vc_dim, n_revealed) + math.log(4 / delta)
    ) / n_revealed


def estrate_loop(s, c, delta, consts, draw_rng, oracle, budget, trace,
                 phase: str = "estrate") -> EstRateState:
    """Core of the estimator on shared oracle/budget objects (used by unknown_pi)."""
    d = s.distribution
    threshold = 8 * math.log(8 / delta)
    state = EstRateState()
    r, P, i = 0, np.empty(0), 0
    while r < threshold:
        if i >= MAX_ROUNDS:
            raise CapExceeded("estrate-rounds", MAX_ROUNDS, i)
        n = 2**i
        budget.draw(n)
        U = sample(d, draw_rng, n)
        R, _ = oracle.query_filter(U, phase + ":U", "R")
        budget.draw(n)
        S = LabeledSample(sample(d, draw_rng, n), "S")
        fit = learn_pu(c, R, S)
        v = fit.consistent_set_desc
        gamma = None
        if len(R):
            gamma = estrate_gamma(len(R), c.vc_dim, delta, consts)
            v = v.intersect_ball(fit.hypothesis, 3 * gamma, S)
        P = S.points[v.agree_positive_mask(S.points)]
        r = int(np.count_nonzero(oracle.reveal_mask(P, phase + ":P")))
        ok = target_in(v, s)
        pure = bool(np.all(s.label(P))) if len(P) else True
        state.rounds.append(EstRateRound(i, n, len(R), gamma, len(P), r, ok, pure))
        trace.add("estrate", i, n=n, revealed=len(R), gamma=gamma, p_size=len(P), r=r,
                  target_in=ok, p_pure=pure)
        i += 1
    if len(P) == 0:
        raise DivisionByEmptyP("EstRate exited with an empty P")
    state.value = r / len(P)
    return state


def estimate_rate(s, c, delta: float, consts: Constants = Constants(), rng=None,
                  caps: Caps = Caps()) -> RunResult:
    if not 0.0 < delta <= 1.0:
        raise ValueError("delta must be in (0, 1]")
    rng = as_stream(rng)
    ledger = QueryLedger()
    oracle = PUOracle(s, rng.child(1), ledger, caps.label_requests)
    budget = Budget(caps)
    trace = RunTrace()
    res = RunResult("estrate", None, ledger, trace)
    try:
        state = estrate_loop(s, c, delta, consts, rng.child(0), oracle, budget, trace)
        res.estrate_value = state.value
        res.info["state"] = state
        audit_estrate(state, res)
    except EmptyVersionSpace as exc:
        res.outcome = failure_name(exc)
        res.flag("empty_version_space")
    except ActivePUError as exc:
        res.outcome = failure_name(exc)
    res.unlabeled_draws = budget.unlabeled
    return res


def audit_estrate(state: EstRateState, res: RunResult) -> None:
    for rd in state.rounds:
        if rd.target_in_v and not rd.p_pure:
            res.flag("estrate_impure_p")
        if rd.r > rd.p_size:
            res.flag("estrate_r_gt_p")
    if state.rounds:
        last = state.rounds[-1].i
        spent = sum(rd.n + rd.p_size for rd in state.rounds)
        if spent > 4 * 2**last:
            res.flag("estrate_query_bound")
