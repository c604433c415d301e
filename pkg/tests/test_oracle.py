from __future__ import annotations

import numpy as np
import pytest
from scipy import stats

from activepu.errors import CapExceeded
from activepu.oracle import Feedback, PUOracle, QueryLedger, query, query_filter
from activepu.rng import RngStream
from activepu.scenario import sample

from conftest import canonical


class TestQuery:
    def test_negative_never_revealed(self):
        s = canonical(omega=1.0)
        led = QueryLedger()
        assert all(query(s, 0.2, RngStream(i), led) is Feedback.STAR for i in range(50))
        assert led.total_queries == 50 and led.positive_responses == 0

    def test_positive_with_omega_one(self):
        s = canonical(omega=1.0)
        assert query(s, 0.8, RngStream(0), QueryLedger()) is Feedback.POSITIVE

    def test_reveal_rate(self):
        """1e4 queries on a positive at omega = 0.5: fraction within 0.02."""
        o = PUOracle(canonical(0.5), RngStream(3))
        hits = sum(o.query(0.8) is Feedback.POSITIVE for _ in range(10_000))
        assert abs(hits / 10_000 - 0.5) <= 0.02

    def test_one_draw_per_query(self):
        """The coin uses one uniform draw whatever the label."""
        o = PUOracle(canonical(0.5), RngStream(4))
        for x in (0.1, 0.9, 0.2):
            o.query(x)
        ref = RngStream(4)
        ref.gen.random(3)
        assert o.rng.gen.random() == ref.gen.random()

    def test_requery_is_independent(self):
        o = PUOracle(canonical(0.5), RngStream(5))
        out = {o.query(0.9) for _ in range(40)}
        assert out == {Feedback.POSITIVE, Feedback.STAR}

    def test_cap(self):
        o = PUOracle(canonical(), RngStream(0), max_queries=2)
        o.query(0.9)
        o.query(0.9)
        with pytest.raises(CapExceeded) as err:
            o.query(0.9)
        assert err.value.kind == "label-requests"


class TestQueryFilter:
    def test_all_positive_omega_one(self):
        xs = np.array([0.6, 0.7, 0.9])
        rev, star = query_filter(canonical(1.0), xs, RngStream(0), QueryLedger())
        assert np.array_equal(rev.points, xs) and len(star) == 0

    def test_all_negative(self):
        rev, star = query_filter(canonical(1.0), np.array([0.1, 0.2]), RngStream(0), QueryLedger())
        assert len(rev) == 0 and len(star) == 2

    def test_revealed_count_band(self):
        """|revealed| for 1e4 draws at prior 0.5, omega 0.5 lies in 2500 +- 150."""
        s = canonical(0.5)
        xs = sample(s.distribution, RngStream(8), 10_000)
        led = QueryLedger()
        rev, _ = query_filter(s, xs, RngStream(9), led)
        assert abs(len(rev) - 2500) <= 150
        assert led.consistent() and led.total_queries == 10_000

    def test_reveals_independent_of_location(self):
        """Chi-square: reveal indicator vs quartile of the positive region, level 0.01."""
        s = canonical(0.5)
        xs = sample(s.distribution, RngStream(10), 200_000)
        xs = xs[xs >= 0.5][:100_000]
        hit = PUOracle(s, RngStream(11)).reveal_mask(xs)
        q = np.digitize(xs, [0.625, 0.75, 0.875])
        table = np.array([[np.sum((q == k) & hit), np.sum((q == k) & ~hit)] for k in range(4)])
        assert stats.chi2_contingency(table)[1] > 0.01


class TestLedger:
    def test_phases(self):
        led = QueryLedger()
        led.record("a", 3, 1)
        led.record("b", 2, 2)
        assert led.phase_queries("a") == 3 and led.snapshot()["phases"]["b"] == [2, 2]
        assert led.consistent()

    def test_bad_entry(self):
        with pytest.raises(ValueError):
            QueryLedger().record("a", 1, 2)
