from __future__ import annotations

import numpy as np

from activepu.active_known_pi import run_known_pi
from activepu.baselines import run_cal, run_passive_pu_baseline
from activepu.hypothesis import Threshold, ThresholdClass
from activepu.hypothesis.finite import FiniteClass
from activepu.runtime import Constants
from activepu.scenario import Scenario, Uniform, true_error

from conftest import canonical

C = ThresholdClass()


class TestCal:
    def test_singleton(self):
        c = FiniteClass([Threshold(0.5)])
        s = Scenario(Uniform(0, 1), c, Threshold(0.5), 1.0)
        res = run_cal(s, c, 0.05, 0.1, rng=0)
        assert res.ledger.total_queries == 0 and res.hypothesis == Threshold(0.5)

    def test_eps_one(self):
        assert run_cal(canonical(), C, 1.0, 0.1, rng=0).ledger.total_queries == 0

    def test_reaches_eps(self):
        s = canonical()
        for seed in range(20):
            res = run_cal(s, C, 0.01, 0.1, rng=seed)
            assert true_error(s, res.hypothesis).value <= 0.01

    def test_no_worse_than_known_pi(self):
        """Full labels never need more queries once both start from the same pruned space."""
        s, k = canonical(), Constants(k_scale=0.01)
        cal = [run_cal(s, C, 0.05, 0.1, rng=i, consts=k, prior_prune_first=True)
               .ledger.total_queries for i in range(100)]
        alg = [run_known_pi(s, C, 0.05, 0.1, k, rng=i).ledger.total_queries for i in range(100)]
        assert np.median(cal) <= np.median(alg)


class TestPassive:
    def test_positive_collection_cost(self):
        """Requests to reveal 100 positives at rate 1/2 follow a negative binomial (mean 200)."""
        s = canonical()
        for seed in range(20):
            res = run_passive_pu_baseline(s, C, 0.05, 0.1, rng=seed, k=100)
            assert abs(res.ledger.total_queries - 200) <= 45
            assert res.ledger.positive_responses == 100

    def test_constant_positive_target(self):
        c = FiniteClass([Threshold(0.0), Threshold(0.3), Threshold(0.7)])
        s = Scenario(Uniform(0, 1), c, Threshold(0.0), 1.0)
        for seed in range(10):
            res = run_passive_pu_baseline(s, c, 0.05, 0.1, rng=seed)
            assert true_error(s, res.hypothesis).value == 0.0

    def test_constant_positive_continuous_thresholds(self):
        """The canonical fit sits at the smallest revealed positive, so error equals that point."""
        s = Scenario(Uniform(0, 1), C, Threshold(0.0), 1.0)
        res = run_passive_pu_baseline(s, C, 0.05, 0.1, rng=0)
        assert true_error(s, res.hypothesis).value == res.hypothesis.a
        assert res.hypothesis.a < 0.05

    def test_only_used_prefix_charged(self):
        res = run_passive_pu_baseline(canonical(0.5), C, 0.05, 0.1, rng=1, k=50)
        assert res.ledger.positive_responses == 50
        assert res.ledger.consistent()


class TestActiveAdvantage:
    def test_fewer_labels_at_small_eps(self):
        s = canonical()
        k = Constants(k_scale=1e-3)
        act = [run_known_pi(s, C, 0.01, 0.1, k, rng=i).ledger.total_queries for i in range(100)]
        pas = [run_passive_pu_baseline(s, C, 0.01, 0.1, rng=i).ledger.total_queries
               for i in range(100)]
        assert np.median(act) < np.median(pas)
