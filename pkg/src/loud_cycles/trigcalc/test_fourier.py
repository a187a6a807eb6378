"""Unit and randomized property tests for the theta-Fourier kernel."""

import math
import random
from fractions import Fraction

import pytest

from ..errors import KernelError
from .fourier import (
    COS,
    SIN,
    ThetaFourierPoly,
    ensure_within,
    tf_add,
    tf_derivative,
    tf_eval_numeric,
    tf_eval_pi,
    tf_from_power_basis,
    tf_integrate,
    tf_mul,
    tf_rotate,
    tf_rotate_symbolic,
)
from .rings import GENERATORS, KERNEL_RING, PI, to_qq

CASES = 1000


def cos_(j=1, coeff=1, k=0):
    return ThetaFourierPoly.cos(j, coeff, k)


def sin_(j=1, coeff=1, k=0):
    return ThetaFourierPoly.sin(j, coeff, k)


def random_tf(rng: random.Random, max_terms: int = 3, theta_free: bool = False):
    """Small random element with rational and single-symbol coefficients."""
    symbols = [KERNEL_RING.one, GENERATORS["am10"], GENERATORS["bp02"]]
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        j = rng.randint(0, 3)
        kind = COS if j == 0 else rng.choice((COS, SIN))
        k = 0 if theta_free else rng.randint(0, 2)
        coeff = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
        terms[(k, j, kind)] = rng.choice(symbols) * to_qq(coeff)
    return ThetaFourierPoly(terms)


class TestArithmetic:
    """Test cases for addition and multiplication."""

    def test_add_identity(self):
        """Test that adding zero returns the same element."""
        p = cos_(2, 3) + sin_(1, Fraction(1, 2), k=1)
        assert tf_add(p, ThetaFourierPoly()) == p

    def test_add_doubles(self):
        """Test cos + cos = 2 cos."""
        assert cos_() + cos_() == cos_(1, 2)

    def test_add_cancellation(self):
        """Test that opposite terms cancel to an empty term map."""
        total = cos_(1, 1, k=1) + cos_(1, -1, k=1)
        assert total.is_zero()
        assert total.terms == {}

    def test_cos_sin_product(self):
        """Test cos * sin = sin(2t)/2."""
        assert tf_mul(cos_(), sin_()) == sin_(2, Fraction(1, 2))

    def test_cos_squared(self):
        """Test cos^2 = 1/2 + cos(2t)/2."""
        expected = ThetaFourierPoly.constant(Fraction(1, 2)) + cos_(2, Fraction(1, 2))
        assert tf_mul(cos_(), cos_()) == expected

    def test_theta_cos_times_sin(self):
        """Test (t cos t) * sin t = t sin(2t)/2."""
        assert tf_mul(cos_(1, 1, k=1), sin_()) == sin_(2, Fraction(1, 2), k=1)

    def test_sin_difference_sign(self):
        """Test sin t * cos 2t = (sin 3t - sin t)/2."""
        expected = sin_(3, Fraction(1, 2)) + sin_(1, Fraction(-1, 2))
        assert tf_mul(sin_(1), cos_(2)) == expected

    def test_invalid_sin_zero_rejected(self):
        """Test that sin(0 t) is not a valid basis key."""
        with pytest.raises(KernelError):
            ThetaFourierPoly({(0, 0, SIN): 1})


class TestPowerBasis:
    """Test cases for linearization of cos^m sin^n."""

    def test_cos_cubed(self):
        """Test cos^3 = 3/4 cos + 1/4 cos 3t."""
        expected = cos_(1, Fraction(3, 4)) + cos_(3, Fraction(1, 4))
        assert tf_from_power_basis({(3, 0): 1}) == expected

    def test_sin_squared(self):
        """Test sin^2 = 1/2 - 1/2 cos 2t."""
        expected = ThetaFourierPoly.constant(Fraction(1, 2)) + cos_(2, Fraction(-1, 2))
        assert tf_from_power_basis({(0, 2): 1}) == expected

    def test_cos_squared_sin(self):
        """Test cos^2 sin = 1/4 sin + 1/4 sin 3t."""
        expected = sin_(1, Fraction(1, 4)) + sin_(3, Fraction(1, 4))
        assert tf_from_power_basis({(2, 1): 1}) == expected


class TestIntegration:
    """Test cases for closed-form antidifferentiation."""

    def test_integrate_cos(self):
        """Test that the antiderivative of cos is sin."""
        assert tf_integrate(cos_()) == sin_()

    def test_integrate_cos_squared(self):
        """Test int cos^2 = t/2 + sin(2t)/4."""
        p = tf_from_power_basis({(2, 0): 1})
        expected = ThetaFourierPoly({(1, 0, COS): Fraction(1, 2), (0, 2, SIN): Fraction(1, 4)})
        assert tf_integrate(p) == expected

    def test_integrate_theta_cos(self):
        """Test int t cos t = t sin t + cos t - 1."""
        expected = ThetaFourierPoly(
            {(1, 1, SIN): 1, (0, 1, COS): 1, (0, 0, COS): -1}
        )
        assert tf_integrate(cos_(1, 1, k=1)) == expected

    def test_integrate_sin_vanishes_at_zero(self):
        """Test int sin = 1 - cos."""
        expected = ThetaFourierPoly({(0, 0, COS): 1, (0, 1, COS): -1})
        assert tf_integrate(sin_()) == expected

    def test_round_trip_randomized(self):
        """Test d/dt int p = p exactly and the antiderivative vanishes at 0."""
        rng = random.Random(11)
        for _ in range(CASES):
            p = random_tf(rng)
            antiderivative = tf_integrate(p)
            assert tf_derivative(antiderivative) == p
            at_zero = sum(
                (c for (k, _, kind), c in antiderivative.items() if k == 0 and kind == COS),
                KERNEL_RING.zero,
            )
            assert at_zero == 0


class TestRingAxioms:
    """Randomized exact checks of the ring laws."""

    def test_commutative_associative_distributive(self):
        """Test commutativity, associativity and distributivity."""
        rng = random.Random(12)
        for _ in range(CASES):
            p, q, s = random_tf(rng, 2), random_tf(rng, 2), random_tf(rng, 2)
            assert tf_mul(p, q) == tf_mul(q, p)
            assert tf_mul(tf_mul(p, q), s) == tf_mul(p, tf_mul(q, s))
            assert tf_mul(p, tf_add(q, s)) == tf_add(tf_mul(p, q), tf_mul(p, s))


class TestEvaluation:
    """Test cases for evaluation at +-pi and numerically."""

    def test_sin_at_pi(self):
        """Test that sin vanishes at pi."""
        assert tf_eval_pi(sin_(), "plus") == 0

    def test_half_theta_plus_sin(self):
        """Test t/2 + sin(2t)/4 at pi is pi/2."""
        p = ThetaFourierPoly({(1, 0, COS): Fraction(1, 2), (0, 2, SIN): Fraction(1, 4)})
        assert tf_eval_pi(p, "plus") == PI * to_qq(Fraction(1, 2))

    def test_theta_squared_cos3_at_minus_pi(self):
        """Test t^2 cos 3t at -pi is -pi^2."""
        assert tf_eval_pi(cos_(3, 1, k=2), "minus") == -(PI**2)

    def test_unknown_side_rejected(self):
        """Test that sides other than plus and minus are rejected."""
        with pytest.raises(KernelError):
            tf_eval_pi(cos_(), "left")

    def test_eval_pi_matches_numeric_randomized(self):
        """Test exact evaluation at pi against floating point evaluation of the power form."""
        rng = random.Random(13)
        for _ in range(CASES):
            power = {
                (rng.randint(0, 3), rng.randint(0, 3)): Fraction(rng.randint(-4, 4), rng.randint(1, 3))
                for _ in range(rng.randint(1, 3))
            }
            p = tf_from_power_basis(power)
            for side, theta in (("plus", math.pi), ("minus", -math.pi)):
                exact = tf_eval_pi(p, side)
                value = sum(
                    float(from_exact(coeff)) * math.pi**monom[0]
                    for monom, coeff in exact.iterterms()
                )
                direct = sum(
                    float(c) * math.cos(theta) ** m * math.sin(theta) ** n
                    for (m, n), c in power.items()
                )
                assert value == pytest.approx(direct, abs=1e-12)

    def test_eval_numeric_with_symbols(self):
        """Test numeric evaluation substitutes symbol values."""
        p = cos_(1, GENERATORS["am10"] * 2)
        assert tf_eval_numeric(p, 0.0, {"am10": 0.25}) == pytest.approx(0.5)


def from_exact(coeff):
    return Fraction(int(coeff.numerator), int(coeff.denominator))


class TestRotation:
    """Test cases for the line rotation theta -> theta + a."""

    def test_tau_zero_identity(self):
        """Test that tau = 0 leaves polynomials unchanged."""
        rng = random.Random(14)
        for _ in range(CASES):
            p = random_tf(rng, theta_free=True)
            assert tf_rotate(p, 0) == p

    def test_tau_half_cos(self):
        """Test cos -> 3/5 cos - 4/5 sin at tau = 1/2."""
        expected = cos_(1, Fraction(3, 5)) + sin_(1, Fraction(-4, 5))
        assert tf_rotate(cos_(), Fraction(1, 2)) == expected

    def test_tau_half_sin(self):
        """Test sin -> 4/5 cos + 3/5 sin at tau = 1/2."""
        expected = cos_(1, Fraction(4, 5)) + sin_(1, Fraction(3, 5))
        assert tf_rotate(sin_(), Fraction(1, 2)) == expected

    def test_preserves_harmonic_degree(self):
        """Test that rotation keeps the harmonic degree."""
        p = cos_(3) + sin_(2, 5)
        assert tf_rotate(p, Fraction(-1, 3)).harmonic_degree == 3

    def test_tau_minus_one_is_vertical_line(self):
        """Test that tau = -1 (angle -pi/2) maps cos to sin."""
        assert tf_rotate(cos_(), -1) == sin_()

    def test_theta_power_rejected(self):
        """Test that rotation after integration is rejected."""
        with pytest.raises(KernelError):
            tf_rotate(cos_(1, 1, k=1), Fraction(1, 2))

    def test_symbolic_rotation_specializes(self):
        """Test that the C, S rotation specializes to the rational one."""
        p = tf_from_power_basis({(2, 1): 3, (0, 1): 1})
        symbolic = tf_rotate_symbolic(p)
        specialized = ThetaFourierPoly(
            {
                key: c.subs([(GENERATORS["C"], to_qq(Fraction(3, 5))), (GENERATORS["S"], to_qq(Fraction(4, 5)))])
                for key, c in symbolic.items()
            }
        )
        assert specialized == tf_rotate(p, Fraction(1, 2))


class TestCaps:
    """Test cases for degree caps."""

    def test_cap_exceeded_raises(self):
        """Test that exceeding the harmonic cap raises."""
        with pytest.raises(KernelError):
            ensure_within(cos_(10), theta_cap=3, harmonic_cap=9)

    def test_within_caps_passes(self):
        """Test that a small element passes the caps."""
        p = cos_(2, 1, k=1)
        assert ensure_within(p, theta_cap=1, harmonic_cap=2) is p
