"""Active PU learning when the class prior is unknown.

After estimating omega, the learner keeps an upper bound u on the positive
mass of the target and repeatedly samples from DIS(V):

* a low reveal rate in DIS means the positives are mostly inside the
  all-agree region already, so u is halved towards b (the empirical mass of
  that region) and V is cut to hypotheses with empirical positive mass <= u;
* otherwise a passive-PU fit on a fresh sample from DIS prunes V to a small
  empirical ball around the fit.

The loop ends once u - b <= eps/6 or the empirical disagreement on S1 is at
most eps/3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .active_known_pi import check_unit, resolve_theta
from .audit import dis_positive_rate, empirical_error, target_in
from .errors import ActivePUError, CapExceeded, EmptyVersionSpace, RejectionBudgetExceeded
from .estrate import audit_estrate, estrate_loop
from .hypothesis import ZERO, LabeledSample
from .oracle import PUOracle, QueryLedger
from .rng import as_stream
from .runtime import Budget, Caps, Constants, RunResult, RunTrace, failure_name, growth_term
from .scenario import conditional_sample, sample


@dataclass(frozen=True)
class UnknownPiSizes:
    N: float
    lambda1: int
    lambda2: int
    n_s1: int


def unknown_pi_sizes(eps, delta, theta, vc_dim, omega_hat, consts: Constants) -> UnknownPiSizes:
    N = 2 * math.log2(6 / eps)
    lam1 = 768 * theta * math.log(8 * N / delta) / omega_hat
    lam2 = consts.M3 * theta**2 * (vc_dim * math.log(theta) + math.log(N / delta)) / omega_hat
    n_s1 = (3 * consts.M2 + 96) * (vc_dim * math.log(3 / eps) + math.log(16 * N / delta)) / eps
    return UnknownPiSizes(
        N,
        max(1, math.ceil(lam1 * consts.lambda_scale)),
        max(1, math.ceil(lam2 * consts.lambda_scale)),
        max(1, math.ceil(n_s1 * consts.sample_scale)),
    )


def else_gamma(n_r2, vc_dim, N, delta, consts: Constants) -> float:
    return (2 * consts.M1 + consts.M2) * (
        growth_term(vc_dim, n_r2) + math.log(8 * N / delta)
    ) / n_r2


@dataclass
class UnknownPiState:
    omega_hat: float
    sizes: UnknownPiSizes
    i: int = 0
    u: float = 1.0
    b: float = 0.0
    h_cur: object = None
    rounds: list = field(default_factory=list)


def run_unknown_pi(s, c, eps: float, delta: float, consts: Constants = Constants(), rng=None,
                   caps: Caps = Caps(), theta: float | None = None, audit: bool = True,
                   max_rounds: int | None = None) -> RunResult:
    check_unit("eps", eps)
    check_unit("delta", delta)
    rng = as_stream(rng)
    draw_rng, oracle_rng = rng.child(0), rng.child(1)
    d = s.distribution
    theta = resolve_theta(c, d, theta)
    ledger = QueryLedger()
    oracle = PUOracle(s, oracle_rng, ledger, caps.label_requests)
    budget = Budget(caps)
    trace = RunTrace()
    res = RunResult("unknown_pi", None, ledger, trace, if_branches=0, else_branches=0,
                    info={"theta": theta})
    v = c.full()
    S1 = None
    try:
        est = estrate_loop(s, c, delta / 8, consts, rng.child(2), oracle, budget, trace)
        audit_estrate(est, res)
        omega_hat = est.value
        res.estrate_value = omega_hat
        if omega_hat <= 0:
            raise ActivePUError("EstRate returned 0; omega estimate unusable")
        sizes = unknown_pi_sizes(eps, delta, theta, c.vc_dim, omega_hat, consts)
        st = UnknownPiState(omega_hat, sizes)
        res.info.update(N=sizes.N, lambda1=sizes.lambda1, lambda2=sizes.lambda2, n_s1=sizes.n_s1,
                        state=st)
        budget.draw(sizes.n_s1)
        S1 = LabeledSample(sample(d, draw_rng, sizes.n_s1), "S1")
        pi_hat = float(np.mean(s.label(S1.points)))
        threshold = omega_hat / (128 * theta)
        limit = max_rounds if max_rounds is not None else 4 * math.ceil(sizes.N) + 8
        while True:
            st.b = v.agree_positive_frac(S1)
            dhat = v.empirical_dis(S1)
            if not (st.u - st.b > eps / 6 and dhat > eps / 3):
                break
            if st.i >= limit:
                raise CapExceeded("iterations", limit, st.i)
            row = {"i": st.i, "u": st.u, "b": st.b, "dhat": dhat}
            ok_before = target_in(v, s)
            if audit:
                row["p"], _ = dis_positive_rate(v, s)
                row["delta_before"] = v.dis_mass(d).value
                gap_ok = ok_before and st.u - st.b >= eps / 6
                mid = (st.b + st.u) / 2
                row["low_est_premise"] = bool(gap_ok and pi_hat <= mid)
                row["high_est_premise"] = bool(gap_ok and pi_hat >= mid)
            dis = v.dis_region()
            U = _cond(d, dis, draw_rng, sizes.lambda1, budget)
            R1, _ = oracle.query_filter(U, "loop:R1", "R1")
            frac = len(R1) / sizes.lambda1
            row["r1_frac"] = frac
            if frac < threshold:
                res.if_branches += 1
                u_next = (st.u + st.b) / 2
                v = v.restrict_positive(R1).intersect_ball(ZERO, u_next, S1)
                row.update(branch="if", u_next=u_next)
                st.u = u_next
            else:
                res.else_branches += 1
                U2 = _cond(d, dis, draw_rng, sizes.lambda2, budget)
                R2, _ = oracle.query_filter(U2, "loop:R2", "R2")
                S2 = LabeledSample(_cond(d, dis, draw_rng, len(R2), budget), "S2")
                v = v.restrict_positive(R2)
                st.h_cur = v.argmin_positive(S2.points)
                gamma = None
                if len(R2):
                    gamma = else_gamma(len(R2), c.vc_dim, sizes.N, delta, consts)
                    v = v.intersect_ball(st.h_cur, gamma, S2)
                row.update(branch="else", r2=len(R2), gamma=gamma, h=str(st.h_cur))
            ok_after = target_in(v, s)
            row["target_in"] = ok_after
            if audit:
                row["delta_after"] = v.dis_mass(d).value
            if ok_before and not ok_after:
                res.flag("target_lost")
            trace.add("round", st.i, **row)
            st.rounds.append(row)
            st.i += 1
        h = st.h_cur if st.h_cur is not None and v.contains(st.h_cur) else None
        res.info["fallback"] = h is None
        res.hypothesis = h if h is not None else v.argmin_positive(S1.points)
        res.info["emp_err_s1"] = empirical_error(res.hypothesis, s, S1)
        res.info["normal_exit"] = True
        if res.info["emp_err_s1"] > eps / 3:
            res.flag("emp_err_s1")
        trace.add("halt", st.i, u=st.u, b=st.b)
    except EmptyVersionSpace as exc:
        res.outcome = failure_name(exc)
        res.flag("empty_version_space")
    except (ActivePUError, RejectionBudgetExceeded) as exc:
        res.outcome = failure_name(exc)
        res.hypothesis = _fallback(v, S1)
    res.unlabeled_draws = budget.unlabeled
    return res


def _cond(d, region, rng, n, budget):
    if n == 0:
        return np.empty((0,) if d.dim == 1 else (0, d.dim))
    stats: dict = {}
    cap = max(budget.remaining_draws(), n)
    try:
        out = conditional_sample(d, region, rng, n, cap, stats)
    finally:
        budget.unlabeled += stats.get("proposals", 0)
    if budget.unlabeled > budget.caps.unlabeled_draws:
        raise CapExceeded("unlabeled-draws", budget.caps.unlabeled_draws, budget.unlabeled)
    budget.check_time()
    return out


def _fallback(v, S1):
    try:
        return v.argmin_positive(S1.points if S1 is not None else np.empty(0))
    except ActivePUError:
        return None
