from __future__ import annotations

import numpy as np
import pytest

from activepu.errors import UnboundedCoefficient
from activepu.hypothesis import (
    ClosedInterval,
    IntervalClass,
    Threshold,
    ThresholdClass,
    disagreement_coefficient,
    parse_class,
    parse_hypothesis,
)
from activepu.scenario import Gaussian1D, Uniform

U = Uniform(0, 1)


def threshold_ratio_oracle(grid_a, radii):
    """Independent sup of Delta(B(h_a, r)) / r for thresholds on uniform [0, 1]."""
    best = 0.0
    for a in grid_a:
        for r in radii:
            lo, hi = max(a - r, 0.0), min(a + r, 1.0)
            best = max(best, (hi - lo) / r)
    return best


class TestThreshold:
    def test_analytic(self):
        r = disagreement_coefficient(ThresholdClass(), U)
        assert r.value == 2.0 and r.mode == "analytic"

    def test_grid_matches_oracle(self):
        radii = np.logspace(-4, 0, 100)
        grid = np.linspace(0, 1, 100)
        oracle = threshold_ratio_oracle(grid, radii)
        got = ThresholdClass().theta_grid(U, 100)
        assert got == pytest.approx(oracle, rel=1e-12)
        assert got == pytest.approx(2.0)

    def test_gaussian_grid(self):
        r = disagreement_coefficient(ThresholdClass(-3, 3), Gaussian1D(0, 1), mode="grid")
        assert r.value == pytest.approx(2.0, abs=1e-9)

    def test_low_resolution_rejected(self):
        with pytest.raises(ValueError):
            disagreement_coefficient(ThresholdClass(), U, mode="grid", resolution=10)


class TestInterval:
    def test_analytic_value(self):
        assert disagreement_coefficient(IntervalClass(0.1), U).value == 5.0

    @pytest.mark.parametrize("w,expected", [(0.1, 4.86), (0.05, 9.33)])
    def test_grid_frozen(self, w, expected):
        r = disagreement_coefficient(IntervalClass(w), U, mode="grid")
        assert r.value == pytest.approx(expected, abs=0.01)
        assert r.mode == "grid" and r.resolution == 100

    def test_grid_below_analytic(self):
        """A grid sup can only under-estimate the analytic sup."""
        g = disagreement_coefficient(IntervalClass(0.1), U, mode="grid").value
        assert g <= 5.0 + 1e-9

    def test_target_centered(self):
        r = disagreement_coefficient(IntervalClass(0.1), U, target=ClosedInterval(0.3, 0.6))
        assert r.target_centered == pytest.approx(4.0, abs=0.05)

    def test_zero_width_unbounded(self):
        with pytest.raises(UnboundedCoefficient):
            disagreement_coefficient(IntervalClass(0.0), U, mode="grid")

    def test_gaussian_falls_back_to_grid(self):
        r = disagreement_coefficient(IntervalClass(0.1), Gaussian1D(0.5, 0.2))
        assert r.mode == "grid" and r.value >= 1.0


class TestParsing:
    def test_parse_classes(self):
        assert parse_class("threshold") == ThresholdClass()
        assert parse_class("threshold(lo=-1, hi=2)") == ThresholdClass(-1, 2)
        assert parse_class("interval(w_min=0.2)") == IntervalClass(0.2)

    @pytest.mark.parametrize("bad", ["interval", "halfspace", "threshold(foo=1)", "finite()"])
    def test_parse_errors(self, bad):
        with pytest.raises(ValueError):
            parse_class(bad)

    def test_parse_targets(self):
        assert parse_hypothesis(ThresholdClass(), "0.5") == Threshold(0.5)
        assert parse_hypothesis(IntervalClass(0.1), "(0.2, 0.5)") == ClosedInterval(0.2, 0.5)
        with pytest.raises(ValueError):
            parse_hypothesis(ThresholdClass(), "2.0")
