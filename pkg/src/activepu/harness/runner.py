"""Seeded multi-trial execution and per-trial invariant auditing."""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..active_known_pi import run_known_pi
from ..active_unknown_pi import run_unknown_pi
from ..baselines import run_cal, run_passive_pu_baseline
from ..errors import ActivePUError
from ..estrate import estimate_rate
from ..hypothesis import disagreement_coefficient
from ..rng import RngStream
from ..runtime import RunResult, RunTrace, failure_name
from ..scenario import true_error
from .config import ExperimentConfig


@dataclass
class TrialRecord:
    trial: int
    seed: int
    algorithm: str
    outcome: str
    label_requests: int
    positive_responses: int
    unlabeled_draws: int
    final_error: float | None
    error_mode: str
    wall_ms: float | None
    if_branches: int | None
    else_branches: int | None
    estrate_value: float | None
    violations: list = field(default_factory=list)
    audit: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.outcome == "ok"


def default_jobs() -> int:
    try:
        return max(len(os.sched_getaffinity(0)), 1)
    except AttributeError:  # pragma: no cover - non-Linux
        return os.cpu_count() or 1


def resolve_theta(cfg: ExperimentConfig, c, d):
    """Configured override, else the class's default coefficient.

    Returns ``(theta, error)``; an unbounded coefficient turns every trial
    into a failure row instead of aborting the run.
    """
    if cfg.theta_override is not None:
        return cfg.theta_override, None
    try:
        return disagreement_coefficient(c, d).value, None
    except ActivePUError as exc:
        return None, exc


def execute(cfg: ExperimentConfig, s, c, seed: int, theta) -> RunResult:
    rng = RngStream(seed)
    a, eps, delta, k = cfg.algorithm, cfg.eps, cfg.delta, cfg.constants
    if a == "known_pi":
        return run_known_pi(s, c, eps, delta, k, rng, cfg.caps, theta, cfg.audit)
    if a == "unknown_pi":
        return run_unknown_pi(s, c, eps, delta, k, rng, cfg.caps, theta, cfg.audit)
    if a == "estrate":
        return estimate_rate(s, c, delta, k, rng, cfg.caps)
    if a == "cal":
        return run_cal(s, c, eps, delta, rng, cfg.caps, k, cfg.cal_prior_prune, theta)
    if a == "passive_pu":
        return run_passive_pu_baseline(s, c, eps, delta, rng, cfg.caps, k)
    raise ValueError(f"unknown algorithm {a!r}")


def run_trial(cfg: ExperimentConfig, index: int, theta=None, scenario=None):
    """Run one trial; returns ``(TrialRecord, RunResult)``."""
    seed = cfg.base_seed + index
    s, c = scenario if scenario is not None else cfg.build_scenario()
    if theta is None:
        theta, err = resolve_theta(cfg, c, s.distribution)
    else:
        err = None
    t0 = time.perf_counter()
    if err is not None:
        from ..oracle import QueryLedger

        res = RunResult(cfg.algorithm, None, QueryLedger(), RunTrace(), outcome=failure_name(err))
    else:
        res = execute(cfg, s, c, seed, theta)
    wall = (time.perf_counter() - t0) * 1000.0 if cfg.record_wall_time else None
    audit = audit_trial(cfg, s, res, theta) if cfg.audit else {}
    if res.hypothesis is not None:
        e = true_error(s, res.hypothesis)
        err_val, mode = float(e.value), e.mode
    else:
        err_val, mode = None, "none"
    rec = TrialRecord(
        trial=index, seed=seed, algorithm=cfg.algorithm, outcome=res.outcome,
        label_requests=res.ledger.total_queries, positive_responses=res.ledger.positive_responses,
        unlabeled_draws=int(res.unlabeled_draws), final_error=err_val, error_mode=mode,
        wall_ms=wall, if_branches=res.if_branches, else_branches=res.else_branches,
        estrate_value=res.estrate_value, violations=sorted(res.violations), audit=audit,
    )
    return rec, res


# --- auditing ---------------------------------------------------------------

def audit_trial(cfg, s, res: RunResult, theta) -> dict:
    """Evaluate the algorithm's invariants; per-trial flags go to ``res.violations``.

    Statistical invariants are flagged per trial when any instance misses
    and the raw counts are returned so the summary can aggregate them.
    """
    out: dict = {}
    if not res.ledger.consistent():
        res.flag("ledger_mismatch")
    if cfg.algorithm == "known_pi":
        out.update(_audit_known(cfg, s, res, theta))
    elif cfg.algorithm == "unknown_pi":
        out.update(_audit_unknown(cfg, res))
    if cfg.algorithm in ("estrate", "unknown_pi") and res.estrate_value is not None:
        w = s.omega
        inside = w / 2 <= res.estrate_value <= 2 * w
        out["estrate_in_bracket"] = inside
        if not inside:
            res.flag("estrate_bracket")
    return out


def halving_gaps(trace: RunTrace) -> list[int]:
    """Label requests between successive halvings of the disagreement mass."""
    start = trace.of("start")
    if not start:
        return []
    ref = start[0].data["delta"]
    gaps, last_t = [], 0
    for ev in trace.of("query"):
        d = ev.data["delta"]
        if ref > 0 and d <= ref / 2:
            gaps.append(ev.t - last_t)
            last_t = ev.t
            while ref > 0 and d <= ref / 2:
                ref /= 2
    return gaps


def halving_lambda(theta, vc_dim, eps, delta, omega) -> float:
    n = math.log2(1 / eps)
    return 128 * theta**2 * (4 * vc_dim * math.log(192 * theta) + math.log(8 * n / delta)) / omega


def _audit_known(cfg, s, res, theta) -> dict:
    queries = res.trace.of("query")
    if any(not ev.data.get("in_dis", True) for ev in queries):
        res.flag("query_outside_dis")
    prev = None
    for ev in res.trace.of("prune") + queries:
        d = ev.data["delta"]
        if prev is not None and d > prev + 1e-12:
            res.flag("delta_increase")
        prev = d
    bound = 1 / (4 * theta) if theta else 0.0
    rounds = [ev for ev in queries if ev.data.get("sup_err", 0.0) > cfg.eps]
    low = sum(1 for ev in rounds if ev.data["pos_rate"] < bound)
    if low:
        res.flag("dis_rate_low")
    gaps = halving_gaps(res.trace)
    if gaps and theta:
        lam = halving_lambda(theta, s.hclass.vc_dim, cfg.eps, cfg.delta, cfg.omega)
        if float(np.median(gaps)) > lam:
            res.flag("halving_slow")
    return {"dis_rate_rounds": len(rounds), "dis_rate_misses": low, "halving_gaps": gaps,
            "prune_ok": res.info.get("prune_ok")}


def _audit_unknown(cfg, res) -> dict:
    st = res.info.get("state")
    rows = st.rounds if st is not None else []
    theta = res.info.get("theta") or 1.0
    limit = math.log2(6 / cfg.eps)
    if res.if_branches and res.if_branches > limit:
        res.flag("if_branch_count")
    if res.else_branches and res.else_branches > limit:
        res.flag("else_branch_count")
    counts = dict(else_rounds=0, else_halved=0, hi_rounds=0, hi_if=0, lo_rounds=0, lo_if=0,
                  low_est_rounds=0, low_est_ok=0, high_est_rounds=0, high_est_ok=0)
    for r in rows:
        if "p" not in r:
            continue
        if r["branch"] == "else":
            counts["else_rounds"] += 1
            counts["else_halved"] += r["delta_after"] <= r["delta_before"] / 2
        if r["p"] >= 1 / (32 * theta):
            counts["hi_rounds"] += 1
            counts["hi_if"] += r["branch"] == "if"
        if r["p"] <= 1 / (512 * theta):
            counts["lo_rounds"] += 1
            counts["lo_if"] += r["branch"] == "if"
        if r["low_est_premise"]:
            counts["low_est_rounds"] += 1
            counts["low_est_ok"] += r["p"] < 1 / (32 * theta)
        if r["high_est_premise"]:
            counts["high_est_rounds"] += 1
            counts["high_est_ok"] += r["p"] >= 1 / (32 * theta)
    if counts["else_halved"] < counts["else_rounds"]:
        res.flag("else_no_halving")
    if counts["hi_if"] or counts["lo_if"] < counts["lo_rounds"]:
        res.flag("branch_fidelity")
    if counts["low_est_ok"] < counts["low_est_rounds"]:
        res.flag("low_est_bound")
    if counts["high_est_ok"] < counts["high_est_rounds"]:
        res.flag("high_est_bound")
    counts["target_lost"] = "target_lost" in res.violations
    counts["normal_exit"] = bool(res.info.get("normal_exit"))
    counts["emp_err_s1"] = res.info.get("emp_err_s1")
    return counts


# --- experiment -------------------------------------------------------------

def _worker(args):
    cfg, index, theta = args
    rec, _ = run_trial(cfg, index, theta)
    return rec


def run_experiment(cfg: ExperimentConfig, jobs: int | None = None):
    """Run ``cfg.trials`` trials; returns ``(records, summary)`` ordered by trial index."""
    if cfg.trials == 0:
        return [], {}
    s, c = cfg.build_scenario()
    theta, err = resolve_theta(cfg, c, s.distribution)
    jobs = jobs if jobs is not None else cfg.jobs
    jobs = min(jobs or default_jobs(), cfg.trials)
    if err is not None or jobs <= 1:
        records = [run_trial(cfg, i, theta, (s, c))[0] for i in range(cfg.trials)]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunk = max(1, cfg.trials // (4 * jobs))
            records = list(pool.map(_worker, [(cfg, i, theta) for i in range(cfg.trials)],
                                    chunksize=chunk))
    return records, summarize(cfg, records)


def _median(vals):
    vals = [v for v in vals if v is not None]
    return float(np.median(vals)) if vals else None


def _rate(num, den):
    return num / den if den else None


def summarize(cfg: ExperimentConfig, records: list) -> dict:
    if not records:
        return {}
    n = len(records)
    failures: dict = {}
    flags: dict = {}
    for r in records:
        if not r.ok:
            failures[r.outcome] = failures.get(r.outcome, 0) + 1
        for f in r.violations:
            flags[f] = flags.get(f, 0) + 1
    out = {
        "trials": n,
        "ok": n - sum(failures.values()),
        "failures": failures,
        "median_label_requests": _median([r.label_requests for r in records]),
        "median_positive_responses": _median([r.positive_responses for r in records]),
        "median_unlabeled_draws": _median([r.unlabeled_draws for r in records]),
        "violation_rates": {k: v / n for k, v in sorted(flags.items())},
    }
    if cfg.algorithm != "estrate":
        good = sum(1 for r in records if r.ok and r.final_error is not None and r.final_error <= cfg.eps)
        out["success_at_eps"] = good / n
    if cfg.algorithm in ("estrate", "unknown_pi"):
        vals = [r.audit.get("estrate_in_bracket") for r in records]
        vals = [v for v in vals if v is not None]
        out["estrate_bracket_rate"] = _rate(sum(vals), len(vals))
        out["median_estrate_value"] = _median([r.estrate_value for r in records])
    if cfg.algorithm == "known_pi":
        rounds = sum(r.audit.get("dis_rate_rounds", 0) for r in records)
        low = sum(r.audit.get("dis_rate_misses", 0) for r in records)
        out["dis_rate_rounds"] = rounds
        out["dis_rate_ok"] = _rate(rounds - low, rounds)
        gaps = [g for r in records for g in r.audit.get("halving_gaps", [])]
        out["median_halving_gap"] = _median(gaps)
        pr = [r.audit.get("prune_ok") for r in records if r.audit.get("prune_ok") is not None]
        out["prune_success_rate"] = _rate(sum(pr), len(pr))
    if cfg.algorithm == "unknown_pi":
        tot = {k: sum(r.audit.get(k, 0) for r in records)
               for k in ("else_rounds", "else_halved", "hi_rounds", "hi_if", "lo_rounds", "lo_if",
                         "low_est_rounds", "low_est_ok", "high_est_rounds", "high_est_ok")}
        lim = math.log2(6 / cfg.eps)
        out.update(
            median_if_branches=_median([r.if_branches for r in records]),
            median_else_branches=_median([r.else_branches for r in records]),
            branch_count_ok_rate=sum(
                1 for r in records if (r.if_branches or 0) <= lim and (r.else_branches or 0) <= lim
            ) / n,
            else_halving_rate=_rate(tot["else_halved"], tot["else_rounds"]),
            high_rate_not_if=_rate(tot["hi_rounds"] - tot["hi_if"], tot["hi_rounds"]),
            low_rate_if=_rate(tot["lo_if"], tot["lo_rounds"]),
            low_est_rate=_rate(tot["low_est_ok"], tot["low_est_rounds"]),
            high_est_rate=_rate(tot["high_est_ok"], tot["high_est_rounds"]),
            target_kept_rate=sum(1 for r in records if not r.audit.get("target_lost")) / n,
        )
    return out
