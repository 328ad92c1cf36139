import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import logsumexp

from evidencer.quadrature import (DevianceCurve, EvidenceReport, InvalidCurveError, Ladder,
                                  NonFiniteSampleError, RungEstimate, corrected_trapezium,
                                  corrected_trapezium_rule, rectangle_bounds, sn_bounds,
                                  stepping_stone, trapezium, trapezium_rule)


def curve(t, f, v=None):
    return DevianceCurve.from_arrays(t, f, v)


@st.composite
def ladders(draw, max_inner=12):
    inner = draw(st.lists(st.floats(1e-6, 1 - 1e-6), max_size=max_inner, unique=True))
    t = np.unique(np.r_[0.0, sorted(inner), 1.0])
    if np.any(np.diff(t) < 1e-9):
        t = np.linspace(0.0, 1.0, t.size)
    return t


class TestOracles:
    def test_trapezium_constant(self):
        assert trapezium(curve([0, 0.1, 0.7, 1], [4.2] * 4)) == pytest.approx(4.2, abs=1e-14)

    def test_trapezium_single_panel(self):
        assert trapezium(curve([0, 1], [0, 2])) == 1.0

    def test_trapezium_square(self):
        assert trapezium(curve([0, 0.5, 1], [0, 0.25, 1])) == pytest.approx(0.375, abs=1e-15)

    def test_corrected_square_exact(self):
        assert corrected_trapezium(curve([0, 1], [0, 1], [0, 2])) == pytest.approx(1 / 3, abs=1e-15)

    def test_corrected_equal_variances_matches_trapezium(self):
        c = curve([0, 0.2, 0.6, 1], [-9, -4, -1, 0], [3, 3, 3, 3])
        assert corrected_trapezium(c) == pytest.approx(trapezium(c), abs=1e-14)

    def test_corrected_exponential_beats_trapezium(self):
        t = np.linspace(0, 1, 5)
        c = curve(t, np.exp(t), np.exp(t))
        err_c = abs(corrected_trapezium(c) - (math.e - 1))
        err_t = abs(trapezium(c) - (math.e - 1))
        assert err_c < err_t / 10

    def test_bounds_single_panel(self):
        assert sn_bounds(curve([0, 1], [0, 2])) == (0.0, 2.0, 2.0)

    def test_bounds_constant(self):
        lo, hi, s = sn_bounds(curve([0, 0.3, 1], [-2.5] * 3))
        assert lo == pytest.approx(-2.5) and hi == pytest.approx(-2.5) and s == pytest.approx(0, abs=1e-15)

    def test_bounds_square(self):
        lo, hi, s = sn_bounds(curve([0, 0.5, 1], [0, 0.25, 1]))
        np.testing.assert_allclose([lo, hi, s], [0.125, 0.625, 0.5], atol=1e-15)

    def test_stepping_stone_constant_likelihood(self):
        t = [0, 0.01, 0.2, 1]
        samples = [np.full(7, -12.0)] * 3
        assert stepping_stone(t, samples) == pytest.approx(-12.0, abs=1e-12)

    def test_stepping_stone_one_sample_per_rung(self):
        t = np.array([0, 0.25, 0.5, 1.0])
        ell = [np.array([-3.0]), np.array([-2.0]), np.array([-1.0])]
        expected = sum((t[k + 1] - t[k]) * ell[k][0] for k in range(3))
        assert stepping_stone(t, ell) == pytest.approx(expected, abs=1e-14)

    def test_stepping_stone_log_sum_exp_by_hand(self):
        ell = np.array([-1.0, -2.0, -4.0])
        expected = math.log(np.mean(np.exp(ell)))
        assert stepping_stone([0, 1], [ell]) == pytest.approx(expected, abs=1e-14)


class TestProperties:
    @settings(max_examples=200, deadline=None)
    @given(ladders(), st.lists(st.floats(-5, 5), min_size=4, max_size=4))
    def test_corrected_exact_for_cubics(self, t, coef):
        a, b, c, d = coef
        f = a + b * t + c * t ** 2 + d * t ** 3
        df = b + 2 * c * t + 3 * d * t ** 2
        exact = a + b / 2 + c / 3 + d / 4
        assert abs(corrected_trapezium_rule(t, f, df) - exact) < 1e-12

    @settings(max_examples=100, deadline=None)
    @given(ladders(), st.floats(-5, 5), st.floats(-5, 5))
    def test_trapezium_exact_for_lines(self, t, a, b):
        assert trapezium_rule(t, a + b * t) == pytest.approx(a + b / 2, abs=1e-12)

    @settings(max_examples=100, deadline=None)
    @given(ladders(), st.lists(st.floats(-100, 0), min_size=14, max_size=14))
    def test_bounds_bracket_monotone_curves(self, t, values):
        f = np.sort(np.asarray(values[: t.size]))
        lo, hi = rectangle_bounds(t, f)
        assert lo <= trapezium_rule(t, f) + 1e-9 <= hi + 2e-9

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 2 ** 32 - 1))
    def test_stepping_stone_order_invariant(self, seed):
        rng = np.random.default_rng(seed)
        t = np.array([0.0, 0.1, 0.4, 1.0])
        samples = [rng.normal(-50, 5, size=31) for _ in range(3)]
        shuffled = [rng.permutation(s) for s in samples]
        assert stepping_stone(t, samples) == stepping_stone(t, shuffled)

    def test_stepping_stone_matches_naive(self):
        rng = np.random.default_rng(0)
        t = np.array([0.0, 0.3, 1.0])
        s = [rng.normal(-5, 1, 50), rng.normal(-4, 1, 50)]
        naive = sum(logsumexp((t[k + 1] - t[k]) * s[k]) - math.log(50) for k in range(2))
        assert stepping_stone(t, s) == pytest.approx(naive, abs=1e-12)


class TestConvergence:
    @pytest.mark.parametrize("h", [1 / 8, 1 / 16, 1 / 32])
    def test_error_ratios_on_exponential(self, h):
        def errors(step):
            t = np.linspace(0, 1, round(1 / step) + 1)
            f = np.exp(t)
            exact = math.e - 1
            return (abs(corrected_trapezium_rule(t, f, f) - exact), abs(trapezium_rule(t, f) - exact))

        c2, t2 = errors(2 * h)
        c1, t1 = errors(h)
        assert 12 <= c2 / c1 <= 20
        assert 3.5 <= t2 / t1 <= 4.5


class TestValidation:
    @pytest.mark.parametrize("t", [[0.0], [0.1, 1.0], [0.0, 0.9], [0.0, 0.5, 0.5, 1.0], [0.0, 1.2]])
    def test_bad_ladders(self, t):
        with pytest.raises(InvalidCurveError):
            Ladder(t)

    def test_ladder_is_read_only(self):
        lad = Ladder([0.0, 0.5, 1.0])
        with pytest.raises(ValueError):
            lad.rungs[1] = 0.3
        assert lad.n_intervals == 2 and len(lad) == 3

    def test_curve_sorts_points(self):
        c = DevianceCurve((RungEstimate(1.0, 0.0, 1.0, 2), RungEstimate(0.0, -1.0, 1.0, 2)))
        np.testing.assert_array_equal(c.t, [0.0, 1.0])

    def test_duplicate_temperatures_rejected(self):
        pts = (RungEstimate(0.0, 0, 1, 2), RungEstimate(0.5, 0, 1, 2), RungEstimate(0.5, 0, 1, 2),
               RungEstimate(1.0, 0, 1, 2))
        with pytest.raises(InvalidCurveError):
            DevianceCurve(pts)

    def test_corrected_needs_variances(self):
        with pytest.raises(InvalidCurveError, match="variance missing"):
            corrected_trapezium(curve([0, 1], [0, 1]))

    @pytest.mark.parametrize("kwargs", [dict(t=1.5), dict(var_logdev=-1.0), dict(sample_count=1)])
    def test_bad_rung_estimate(self, kwargs):
        args = dict(t=0.5, mean_logdev=0.0, var_logdev=1.0, sample_count=10) | kwargs
        with pytest.raises(InvalidCurveError):
            RungEstimate(**args)

    def test_stepping_stone_missing_rung(self):
        with pytest.raises(InvalidCurveError, match="needs samples for 2 rungs"):
            stepping_stone([0, 0.5, 1], [np.zeros(3)])

    def test_stepping_stone_empty_rung(self):
        with pytest.raises(InvalidCurveError, match="empty"):
            stepping_stone([0, 0.5, 1], [np.zeros(3), np.array([])])

    def test_stepping_stone_non_finite_names_rung(self):
        with pytest.raises(NonFiniteSampleError) as info:
            stepping_stone([0, 0.5, 1], [np.zeros(3), np.array([0.0, np.nan])])
        assert info.value.rung == 1

    def test_stepping_stone_ignores_final_rung(self):
        s = [np.zeros(3), np.ones(3)]
        assert stepping_stone([0, 0.5, 1], s + [None]) == stepping_stone([0, 0.5, 1], s)

    def test_report_estimate_lookup(self):
        r = EvidenceReport(-1.0, -2.0, None, -3.0, 0.0, 3.0)
        assert r.estimate("modified") == -2.0 and r.estimate("stepping_stone") is None
