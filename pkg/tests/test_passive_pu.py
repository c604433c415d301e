from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from activepu.baselines import run_passive_pu_baseline
from activepu.errors import NoConsistentHypothesis
from activepu.hypothesis import Threshold, ThresholdClass
from activepu.hypothesis.finite import FiniteClass
from activepu.passive_pu import learn_pu, passive_sample_size
from activepu.scenario import true_error

from conftest import canonical

THREE = FiniteClass([Threshold(0.3), Threshold(0.5), Threshold(0.7)])
NINE = np.linspace(0.1, 0.9, 9)


class TestLearnPu:
    def test_no_positives_gives_maximal_threshold(self):
        assert learn_pu(ThresholdClass(), np.empty(0), NINE).hypothesis == Threshold(1.0)

    def test_finite_example(self):
        res = learn_pu(THREE, np.array([0.6, 0.8]), np.array([0.2, 0.4, 0.6, 0.9]))
        assert res.hypothesis == Threshold(0.5) and res.objective == 2

    def test_boundary_convention(self):
        res = learn_pu(ThresholdClass(), np.array([0.55]), NINE)
        assert res.hypothesis == Threshold(0.55) and res.objective == 4

    def test_inconsistent(self):
        with pytest.raises(NoConsistentHypothesis):
            learn_pu(FiniteClass([Threshold(0.5)]), np.array([0.2]), NINE)

    def test_unknown_tie_rule(self):
        with pytest.raises(ValueError):
            learn_pu(ThresholdClass(), np.empty(0), NINE, tie_break="random")

    @given(st.lists(st.floats(0, 1), max_size=20), st.lists(st.floats(0, 1), max_size=50))
    def test_consistent_and_optimal(self, pos, unl):
        pos, unl = np.array(pos), np.array(unl)
        res = learn_pu(ThresholdClass(), pos, unl)
        h = res.hypothesis
        assert np.all(h.predict(pos))
        grid = np.linspace(0, 1, 201)
        feasible = [a for a in grid if np.all(Threshold(a).predict(pos))]
        best = min(np.count_nonzero(Threshold(a).predict(unl)) for a in feasible)
        assert res.objective <= best


class TestPassiveGuaranteeAtDeskScale:
    def test_sample_size_formula(self):
        k = passive_sample_size(0.05, 0.1, 1)
        assert k == int(np.ceil((np.log(20) + np.log(10)) / 0.05))

    def test_error_rate(self):
        """k from the formula with M1 = 1: error <= eps in >= 90 of 100 trials."""
        s, c = canonical(1.0), ThresholdClass()
        ok = 0
        for seed in range(100):
            res = run_passive_pu_baseline(s, c, 0.05, 0.1, rng=seed)
            ok += res.ok and true_error(s, res.hypothesis).value <= 0.05
        assert ok >= 90
