from __future__ import annotations

import math

import numpy as np
import pytest

from activepu.active_unknown_pi import else_gamma, run_unknown_pi, unknown_pi_sizes
from activepu.harness.config import ExperimentConfig
from activepu.harness.runner import run_experiment
from activepu.hypothesis import Threshold, ThresholdClass
from activepu.hypothesis.finite import FiniteClass
from activepu.runtime import Constants
from activepu.scenario import Scenario, Uniform

from conftest import canonical

THEORY = Constants(mode="theory", M3=512)


@pytest.fixture(scope="module")
def practical():
    cfg = ExperimentConfig(algorithm="unknown_pi", omega=0.5, eps=0.05, trials=40)
    return run_experiment(cfg, jobs=1)


@pytest.fixture(scope="module")
def theory():
    cfg = ExperimentConfig(algorithm="unknown_pi", omega=0.5, eps=0.05, trials=40,
                           constants=THEORY)
    return run_experiment(cfg, jobs=1)


class TestSizes:
    def test_formulas(self):
        z = unknown_pi_sizes(0.05, 0.1, 2.0, 1, 0.5, Constants())
        N = 2 * math.log2(120)
        assert z.N == pytest.approx(N)
        assert z.lambda1 == math.ceil(768 * 2 * math.log(8 * N / 0.1) / 0.5)
        assert z.lambda2 == math.ceil(4 * (math.log(2) + math.log(N / 0.1)) / 0.5)
        assert z.n_s1 == math.ceil(99 * (math.log(60) + math.log(16 * N / 0.1)) / 0.05)

    def test_else_gamma(self):
        g = else_gamma(100, 1, 10.0, 0.1, Constants())
        assert g == pytest.approx(3 * (math.log(200) + math.log(800)) / 100)


class TestExamples:
    def test_singleton_class_exits_at_once(self):
        c = FiniteClass([Threshold(0.5)])
        s = Scenario(Uniform(0, 1), c, Threshold(0.5), 0.5)
        res = run_unknown_pi(s, c, 0.05, 0.1, rng=0, theta=1.0)
        assert res.ok and res.if_branches == 0 and res.else_branches == 0
        assert res.info["fallback"] and res.hypothesis == Threshold(0.5)
        assert res.ledger.phase_queries("loop:R1") == 0

    def test_if_branch_halves_towards_b(self):
        s = canonical(0.5)
        for seed in range(10):
            res = run_unknown_pi(s, ThresholdClass(), 0.05, 0.1, rng=seed)
            for r in res.info["state"].rounds:
                if r["branch"] == "if":
                    assert r["u_next"] == (r["u"] + r["b"]) / 2
        assert (1.0 + 0.5) / 2 == 0.75

    def test_success(self, practical):
        assert practical[1]["success_at_eps"] >= 0.9

    def test_emp_err_on_s1(self, practical):
        for r in practical[0]:
            if r.audit["normal_exit"]:
                assert r.audit["emp_err_s1"] <= 0.05 / 3


class TestInvariants:
    def test_target_kept(self, practical):
        assert practical[1]["target_kept_rate"] >= 0.9

    def test_branch_fidelity(self, practical):
        s = practical[1]
        assert s["high_rate_not_if"] == 1.0 and s["low_rate_if"] == 1.0

    def test_high_rate_implies_lower_bound(self, practical, theory):
        """When the S1 prior estimate sits in the upper half of [b, u], DIS carries many revealed positives."""
        for _, s in (practical, theory):
            assert s["high_est_rate"] >= 0.95

    @pytest.mark.xfail(strict=True, reason="printed direction is false; see decisions ledger")
    def test_low_estimate_implies_small_rate(self, practical):
        assert practical[1]["low_est_rate"] >= 0.95

    def test_branch_counts_theory_mode(self, theory):
        assert theory[1]["branch_count_ok_rate"] >= 0.9

    def test_else_halving_theory_mode(self, theory):
        assert theory[1]["else_halving_rate"] >= 0.9

    def test_practical_mode_ball_too_wide(self, practical):
        """With M3 = 1 the else-branch ball radius exceeds 1 and never halves DIS."""
        assert practical[1]["else_halving_rate"] < 0.5

    def test_deterministic(self):
        s = canonical(0.5)
        a = run_unknown_pi(s, ThresholdClass(), 0.05, 0.1, rng=3)
        b = run_unknown_pi(s, ThresholdClass(), 0.05, 0.1, rng=3)
        assert a.hypothesis == b.hypothesis and a.ledger.snapshot() == b.ledger.snapshot()
