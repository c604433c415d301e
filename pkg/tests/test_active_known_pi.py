from __future__ import annotations

import numpy as np
import pytest

from activepu.active_known_pi import known_pi_sizes, prior_prune, run_known_pi
from activepu.hypothesis import LabeledSample, Threshold, ThresholdClass
from activepu.hypothesis.finite import FiniteClass
from activepu.rng import RngStream
from activepu.runtime import Caps, Constants
from activepu.scenario import Scenario, Uniform, sample, true_error

from conftest import canonical

DESK = Constants(k_scale=0.01)


def run(seed, omega=1.0, eps=0.05, **kw):
    s = canonical(omega)
    return s, run_known_pi(s, ThresholdClass(), eps, 0.1, kw.pop("consts", DESK), rng=seed, **kw)


class TestSizes:
    def test_gamma_exact(self):
        gamma, k = known_pi_sizes(0.05, 0.1, 2.0, 1)
        assert gamma == 0.05 / 16
        assert k == int(np.ceil(128 * (np.log(128 / gamma) + np.log(80)) / gamma**2))

    def test_k_scale(self):
        _, k1 = known_pi_sizes(0.05, 0.1, 2.0, 1)
        _, k2 = known_pi_sizes(0.05, 0.1, 2.0, 1, k_scale=0.5)
        assert abs(k2 - k1 / 2) <= 1

    def test_reported_in_info(self):
        _, res = run(0)
        assert res.info["gamma"] == 0.05 / 16 and res.info["k_scale"] == 0.01


class TestExamples:
    def test_eps_one_needs_no_labels(self):
        _, res = run(0, eps=1.0)
        assert res.ok and res.ledger.total_queries == 0

    def test_singleton_class(self):
        c = FiniteClass([Threshold(0.5)])
        s = Scenario(Uniform(0, 1), c, Threshold(0.5), 1.0)
        res = run_known_pi(s, c, 0.05, 0.1, DESK, rng=0)
        assert res.ledger.total_queries == 0 and res.hypothesis == Threshold(0.5)

    def test_error_within_eps(self):
        errs = [true_error(s, r.hypothesis).value for s, r in (run(i) for i in range(30))]
        assert np.mean(np.array(errs) <= 0.05) >= 0.9

    def test_bad_eps(self):
        with pytest.raises(ValueError):
            run(0, eps=0.0)


@pytest.fixture(scope="module")
def runs():
    return [run(i, omega=0.5) for i in range(30)]


class TestInvariants:
    def test_target_kept(self, runs):
        for _, res in runs:
            if res.info["prune_ok"]:
                assert "target_lost" not in res.violations

    def test_prune_sandwich(self, runs):
        assert not any("prune_sandwich" in r.violations for _, r in runs)

    def test_queries_inside_dis(self, runs):
        for _, res in runs:
            assert all(ev.data["in_dis"] for ev in res.trace.of("query"))

    def test_dis_mass_never_grows(self, runs):
        for _, res in runs:
            d = [ev.data["delta"] for ev in res.trace.of("prune") + res.trace.of("query")]
            assert all(b <= a for a, b in zip(d, d[1:]))

    def test_ledger_matches_trace(self, runs):
        for _, res in runs:
            assert res.ledger.total_queries == len(res.trace.of("query"))
            assert res.ledger.consistent()

    def test_stops_at_eps(self, runs):
        for _, res in runs:
            assert res.trace.of("halt")[0].data["delta"] <= 0.05

    def test_prune_sandwich_by_enumeration(self):
        """Every survivor predicts positive on at most prior + gamma of S."""
        s = canonical()
        S = LabeledSample(sample(s.distribution, RngStream(3), 5000))
        v = prior_prune(ThresholdClass().full(), s, S, 0.01)
        for a in np.linspace(0, 1, 2001):
            if v.contains(Threshold(a)):
                assert np.mean(S.points >= a) <= 0.51


class TestFailures:
    def test_label_cap_row(self):
        _, res = run(0, omega=0.5, caps=Caps(label_requests=1))
        assert res.outcome == "failure(cap:label-requests)"
        assert res.hypothesis is not None

    def test_draw_cap_row(self):
        _, res = run(0, caps=Caps(unlabeled_draws=1000))
        assert res.outcome == "failure(cap:unlabeled-draws)"

    def test_deterministic(self):
        a, b = run(7)[1], run(7)[1]
        assert a.hypothesis == b.hypothesis and a.ledger.snapshot() == b.ledger.snapshot()
