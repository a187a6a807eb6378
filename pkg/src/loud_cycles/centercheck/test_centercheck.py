"""Unit tests for first integrals and landing series."""

import random
from fractions import Fraction

import pytest
from scipy.optimize import brentq

from ..errors import SystemDefinitionError
from ..systems.planar import builtin_system
from .integrals import X, Y, first_integral
from .sigma import CENTER_CERTIFIED, NOT_CENTER, is_piecewise_center, sigma_series

NAMES = ["S1", "S2", "S3", "S4"]


def random_direction(rng: random.Random):
    while True:
        v = (Fraction(rng.randint(-5, 5), rng.randint(1, 4)), Fraction(rng.randint(-5, 5), rng.randint(1, 4)))
        if v != (0, 0):
            return v


class TestFirstIntegrals:
    """Test cases for the rational first integrals."""

    def test_s1_form(self):
        """Test H1 = (x^2 + y^2)/(1 + 2y)."""
        h = first_integral("S1")
        assert h.numerator == X**2 + Y**2
        assert h.denominator == 1 + 2 * Y

    def test_s3_form(self):
        """Test H3 = (9(x^2+y^2) - 24x^2 y + 16x^4)/(16y - 3)."""
        h = first_integral("S3")
        assert h.numerator == 9 * (X**2 + Y**2) - 24 * X**2 * Y + 16 * X**4
        assert h.denominator == 16 * Y - 3

    @pytest.mark.parametrize("name", NAMES)
    def test_invariance_identity(self, name):
        """Test that grad H . Z vanishes identically."""
        assert not first_integral(name).invariance_defect(builtin_system(name))

    def test_wrong_field_detected(self):
        """Test that H1 is not invariant under S3."""
        assert first_integral("S1").invariance_defect(builtin_system("S3"))

    def test_unknown_name(self):
        """Test that unknown systems are rejected."""
        with pytest.raises(SystemDefinitionError):
            first_integral("S7")


class TestSigmaSeries:
    """Test cases for the landing series."""

    @pytest.mark.parametrize("name", NAMES)
    def test_horizontal_direction_is_reflection(self, name):
        """Test that v = (1, 0) gives sigma = -lam exactly."""
        series = sigma_series(first_integral(name), (1, 0), 8)
        assert series.coefficients == [0, -1] + [0] * 7

    def test_s1_vertical(self):
        """Test S1, v = (0, 1): -lam/(1 + 2 lam) = -lam + 2lam^2 - 4lam^3 + ..."""
        series = sigma_series(first_integral("S1"), (0, 1), 6)
        assert series.coefficients == [0, -1, 2, -4, 8, -16, 32]

    def test_s2_matches_s1(self):
        """Test that S1 and S2 share their landing series."""
        rng = random.Random(21)
        for _ in range(5):
            v = random_direction(rng)
            s1 = sigma_series(first_integral("S1"), v, 8)
            s2 = sigma_series(first_integral("S2"), v, 8)
            assert s1.coefficients == s2.coefficients

    def test_order_too_small(self):
        """Test that order 1 is rejected."""
        with pytest.raises(SystemDefinitionError):
            sigma_series(first_integral("S1"), (1, 0), 1)

    def test_zero_direction(self):
        """Test that the zero direction is degenerate."""
        with pytest.raises(SystemDefinitionError):
            sigma_series(first_integral("S4"), (0, 0), 4)

    @pytest.mark.parametrize("name", NAMES)
    def test_involution(self, name):
        """Test sigma(sigma(lam)) = lam to the computed order."""
        rng = random.Random(sum(map(ord, name)))
        for _ in range(3):
            series = sigma_series(first_integral(name), random_direction(rng), 7)
            assert series.compose(series) == [0, 1] + [0] * 6

    @pytest.mark.parametrize("name", NAMES)
    def test_numeric_level_set(self, name):
        """Test sigma(1/100) against a numeric solve of the level-set equation."""
        h = first_integral(name)
        v = (Fraction(3, 5), Fraction(4, 5))
        series = sigma_series(h, v, 12)
        lam = 0.01
        level = h.evaluate(lam * 0.6, lam * 0.8)
        root = brentq(
            lambda s: h.evaluate(s * 0.6, s * 0.8) - level, -2 * lam, -lam / 2, xtol=1e-16
        )
        assert series.evaluate(lam) == pytest.approx(root, abs=1e-10)


class TestPiecewiseCenterVerdict:
    """Test cases for the mixed-pair center check."""

    def test_s1_s2_center(self):
        """Test that S1 & S2 is a center for tau = 1/2."""
        verdict = is_piecewise_center(1, 2, Fraction(1, 2), 10)
        assert verdict.is_center
        assert verdict.verdict == CENTER_CERTIFIED

    def test_s1_s3_not_center(self):
        """Test that S1 & S3 is not a center for tau = 1/2."""
        verdict = is_piecewise_center(1, 3, Fraction(1, 2), 5)
        assert not verdict.is_center
        assert verdict.verdict == NOT_CENTER
        assert verdict.first_difference is not None and verdict.first_difference <= 5

    def test_s3_s4_axis(self):
        """Test that any pair is a center on the x-axis."""
        assert is_piecewise_center(3, 4, 0, 10).is_center

    def test_s3_s4_not_center(self):
        """Test that S3 & S4 is not a center for tau = 1/2."""
        assert not is_piecewise_center(3, 4, Fraction(1, 2), 6).is_center

    def test_s1_s2_random_lines(self):
        """Test S1 & S2 at order 12 for random rational tau."""
        rng = random.Random(22)
        for _ in range(10):
            tau = Fraction(rng.randint(-9, 8), 9)
            assert is_piecewise_center("S1", "S2", tau, 12).is_center
