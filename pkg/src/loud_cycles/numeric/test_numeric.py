"""Unit tests for the numeric oracle."""

import math
from fractions import Fraction

import numpy as np
import pytest
from pydantic import ValidationError

from ..analysis.construction import alternating_zeros
from ..analysis.ladder import independence_ladder
from ..errors import (
    EscapeError,
    NumericIntegrationError,
    SlidingError,
    SystemDefinitionError,
)
from ..expansion.difference import difference
from ..expansion.jets import expand
from ..systems.piecewise import make_case
from .checks import closure_sweep, verify_construction
from .displacement import (
    displacement,
    epsilon_scaling,
    jet_prediction,
    locate_cycles,
    loglog_slope,
    oracle_sweep,
)
from .flow import NumericParams, PiecewiseField, closure_error, half_return, sliding_segment
from .pseudo_hopf import pseudo_hopf_demo

TRACE = {"ap10": 1.0, "am10": 1.0}


def linear_field(eps=0.0, tau=0, values=None, **kwargs) -> PiecewiseField:
    params = NumericParams(values=values or {}, eps=eps, tau=tau, **kwargs)
    return PiecewiseField.from_case("linear", params)


@pytest.fixture(scope="module")
def linear_jet():
    """First-order jet of the linear center on the x-axis; exact up to r^2."""
    return difference(expand(make_case("linear", 0), 1, 3))


class TestNumericParams:
    """Test cases for the numeric parameter record."""

    def test_defaults_follow_settings(self):
        """Test integrator defaults and an exact line parameter."""
        params = NumericParams(tau="1/3")
        assert params.tau == Fraction(1, 3)
        assert params.rtol == 1e-12
        assert params.method == "DOP853"
        assert params.b == 0.0

    def test_unknown_parameter(self):
        """Test that only the twenty perturbation names are accepted."""
        with pytest.raises(ValidationError):
            NumericParams(values={"c10": 1.0})

    def test_tau_range(self):
        """Test that the line parameter must lie in [-1, 1)."""
        with pytest.raises(ValidationError):
            NumericParams(tau=1)

    def test_negative_eps(self):
        """Test that a negative perturbation size is rejected."""
        with pytest.raises(ValidationError):
            NumericParams(eps=-1e-3)

    def test_noise_floor(self):
        """Test the noise floor grows with the radius."""
        params = NumericParams(rtol=1e-12, atol=1e-12)
        assert params.noise(0.0) == pytest.approx(1e-10)
        assert params.noise(1.0) == pytest.approx(2e-10)


class TestPiecewiseField:
    """Test cases for the Cartesian piecewise field."""

    def test_line_geometry(self):
        """Test direction and normal for tau = 1/2."""
        field = PiecewiseField.from_case("s1", NumericParams(tau=Fraction(1, 2)))
        assert field.direction == pytest.approx([0.6, 0.8])
        assert field.normal == pytest.approx([-0.8, 0.6])
        assert field.switching(field.line_point(0.3)) == pytest.approx(0.0, abs=1e-15)
        assert field.switching(field.normal) > 0

    def test_case_names(self):
        """Test that fields carry the case name of the expansion."""
        assert PiecewiseField.from_case("s1s2", NumericParams()).name == "S1&S2"
        assert PiecewiseField.from_case("linear", NumericParams()).name == "L"
        with pytest.raises(SystemDefinitionError):
            PiecewiseField.from_case("s5", NumericParams())

    def test_vector_field(self):
        """Test the unperturbed part, the perturbation and the constant term."""
        field = PiecewiseField.from_case(
            "s1", NumericParams(tau=0, eps=0.5, b=0.25, values={"ap20": 2.0, "bm01": 4.0})
        )
        # S1: x' = -y + x^2 - y^2, y' = x + 2xy
        assert field.vector("plus", 1.0, 0.0) == pytest.approx([1.0 + 0.5 * 2.0, 1.0])
        assert field.vector("minus", 0.0, 1.0) == pytest.approx([-2.0, 0.5 * 4.0 + 0.25])
        assert field.vector("minus", 0.0, 0.0) == pytest.approx([0.0, 0.25])

    def test_with_params(self):
        """Test that parameter updates leave the original field untouched."""
        field = linear_field(eps=1e-3)
        other = field.with_params(eps=1e-2, b=1e-6)
        assert field.params.eps == 1e-3
        assert (other.params.eps, other.params.b) == (1e-2, 1e-6)
        assert other.name == field.name


class TestHalfReturn:
    """Test cases for single half-turns."""

    def test_linear_center(self):
        """Test that the rotation lands at -r after time pi."""
        field = linear_field()
        result = half_return(field, 0.2, "plus")
        assert result.landing == pytest.approx(-0.2, abs=1e-11)
        assert result.time == pytest.approx(math.pi, rel=1e-9)
        assert result.contact < 0

    def test_minus_half_runs_backward(self):
        """Test that the minus half lands on the opposite ray through y < 0."""
        field = linear_field(tau=Fraction(1, 2))
        result = half_return(field, 0.1, "minus")
        assert result.landing == pytest.approx(-0.1, abs=1e-11)
        assert field.switching(result.point) == pytest.approx(0.0, abs=1e-12)

    def test_non_positive_radius(self):
        """Test that the start must lie on the positive ray."""
        with pytest.raises(NumericIntegrationError):
            half_return(linear_field(), 0.0, "plus")

    def test_sliding_start(self):
        """Test that a start inside the sliding segment is rejected."""
        field = linear_field(b=-0.01)
        with pytest.raises(SlidingError):
            half_return(field, 0.005, "minus")

    def test_escape(self):
        """Test that a strongly expanding spiral leaves the disc."""
        field = linear_field(eps=1.0, values={"ap10": 1.0}, escape_radius=0.3)
        with pytest.raises(EscapeError):
            half_return(field, 0.1, "plus")


class TestCenterClosure:
    """Test cases for the full-turn return of unperturbed centers."""

    @pytest.mark.parametrize("tag, r", [("linear", 0.3), ("s1", 0.2), ("s2", 0.2), ("s4", 0.1), ("s1s2", 0.15)])
    def test_closure(self, tag, r):
        """Test that orbits close for tau = 1/2."""
        field = PiecewiseField.from_case(tag, NumericParams(tau=Fraction(1, 2)))
        assert closure_error(field, r) <= 1e-9

    def test_s3_small_annulus(self):
        """Test closure of S3 inside its smaller period annulus."""
        field = PiecewiseField.from_case("s3", NumericParams(tau=Fraction(-1, 3)))
        assert closure_error(field, 0.08) <= 1e-9

    def test_sweep(self):
        """Test a seeded sweep over random lines for S1&S2."""
        record = closure_sweep("S1", "S2", count=4, r_max=0.15)
        assert record.system == "S1&S2"
        assert len(record.samples) == 4
        assert record.closed

    @pytest.mark.slow
    @pytest.mark.parametrize(
        "plus, minus, r_max",
        [("S1", "S1", 0.2), ("S2", "S2", 0.2), ("S3", "S3", 0.08), ("S4", "S4", 0.08), ("S1", "S2", 0.15)],
    )
    def test_fifty_random_lines(self, plus, minus, r_max):
        """Test closure at fifty random (tau, r) pairs per center."""
        assert closure_sweep(plus, minus, count=50, r_max=r_max).closed

    def test_s4_annulus_edge(self):
        """Test that S4 orbits close just inside the separatrix on the negative y axis and escape past it.

        The separatrix crosses the axis at y = -(3/8)(1 - 1/sqrt 2), about -0.1098.
        """
        field = PiecewiseField.from_case("s4", NumericParams(tau=Fraction(-1)))
        assert closure_error(field, 0.09) <= 1e-9
        with pytest.raises(EscapeError):
            closure_error(field, 0.12)

    @pytest.mark.slow
    def test_s4_sweep_past_separatrix(self):
        """Test that a sweep reaching r = 0.12 leaves the S4 period annulus."""
        with pytest.raises(EscapeError):
            closure_sweep("S4", "S4", count=50, r_max=0.12)


class TestDisplacement:
    """Test cases for Delta and cycle location."""

    def test_unperturbed_center_is_closed(self):
        """Test that Delta vanishes up to the noise floor."""
        field = PiecewiseField.from_case("s1", NumericParams(tau=Fraction(1, 2)))
        sample = displacement(field, 0.2)
        assert sample.sign == 0
        assert sample.tendency == "closed"

    @pytest.mark.parametrize("tau", [0, Fraction(1, 2)])
    def test_trace_perturbation(self, tau):
        """Test Delta ~ eps pi r for a10 = 1 on both sides."""
        eps, r = 1e-4, 0.1
        sample = displacement(linear_field(eps=eps, tau=tau, values=TRACE), r)
        assert sample.delta / (eps * math.pi * r) == pytest.approx(1.0, rel=1e-2)
        assert sample.tendency == "expanding"

    def test_no_cycles_without_perturbation(self):
        """Test that an unperturbed center has no located zero."""
        field = PiecewiseField.from_case("s1", NumericParams(tau=Fraction(1, 2)))
        assert locate_cycles(field, np.linspace(0.02, 0.2, 6)) == []

    def test_designed_cycle(self):
        """Test a single crossing cycle at r = 0.1 from psi_1 = (2/3) r (r - 0.1)."""
        c = -0.1 * (2 / 3) / math.pi
        field = linear_field(eps=1e-3, values={"ap10": c, "am10": c, "bp20": 1.0})
        zeros = locate_cycles(field, np.linspace(0.02, 0.3, 15))
        assert len(zeros) == 1
        assert zeros[0].r == pytest.approx(0.1, abs=2e-3)
        assert zeros[0].slope > 0
        assert zeros[0].simple

    def test_failed_samples_are_skipped(self):
        """Test that escaping samples do not create zeros."""
        field = linear_field(eps=1.0, values={"ap10": 1.0}, escape_radius=0.3)
        assert locate_cycles(field, [0.05, 0.1, 0.15]) == []


class TestJetComparison:
    """Test cases comparing the integrator with the symbolic jets."""

    def test_prediction(self, linear_jet):
        """Test that the jet predicts eps pi r for the trace perturbation."""
        field = linear_field(eps=1e-3, values=TRACE)
        assert jet_prediction(field, linear_jet, 0.1) == pytest.approx(1e-3 * math.pi * 0.1)

    def test_jet_must_match_field(self, linear_jet):
        """Test that a jet of another line is rejected."""
        with pytest.raises(SystemDefinitionError):
            jet_prediction(linear_field(tau=Fraction(1, 2)), linear_jet, 0.1)
        with pytest.raises(SystemDefinitionError):
            jet_prediction(PiecewiseField.from_case("s1", NumericParams(tau=0)), linear_jet, 0.1)

    def test_epsilon_scaling(self, linear_jet):
        """Test that the first-order residual scales like eps^2."""
        values = {"ap10": 0.3, "bm01": -0.2, "ap11": 0.5, "bm20": -0.4, "am02": 0.7}
        field = linear_field(values=values)
        scaling = epsilon_scaling(field, linear_jet, 0.1, eps_values=(1e-2, 1e-3, 1e-4))
        assert scaling.slope >= 1.9

    def test_loglog_slope(self):
        """Test the slope of an exact power law and the positivity check."""
        assert loglog_slope([1e-1, 1e-2, 1e-3], [1e-2, 1e-4, 1e-6]) == pytest.approx(2.0)
        with pytest.raises(NumericIntegrationError):
            loglog_slope([1.0, 2.0], [0.0, 1.0])

    def test_oracle_sweep(self, linear_jet):
        """Test the sweep table columns and the first-order agreement."""
        field = linear_field(eps=1e-4, values=TRACE)
        table = oracle_sweep(field, linear_jet, [0.05, 0.1, 0.2])
        assert list(table.columns) == ["r", "delta", "eps_psi1", "eps2_psi2", "residual"]
        assert table["eps2_psi2"].isna().all()
        assert (table["residual"].abs() < 1e-7).all()

    def test_construction_signs(self, linear_jet):
        """Test that a designed zero of psi_1 shows up in the numeric signs."""
        jet = difference(expand(make_case("linear", 0), 1, 2))
        construction = alternating_zeros(independence_ladder(jet), Fraction(3, 10), jet=jet)
        check = verify_construction(construction, linear_field(), eps=1e-3)
        assert check.expected == construction.signs
        assert check.matches == len(check.expected)
        assert check.sign_changes == 1


@pytest.mark.slow
class TestPseudoHopf:
    """Test cases for the pseudo-Hopf extra cycle on the linear center."""

    @pytest.fixture
    def field(self):
        return linear_field(eps=1e-2, values=TRACE)

    def test_extra_cycle(self, field):
        """Test that b > 0 with an expanding origin creates one small cycle."""
        report = pseudo_hopf_demo(field, 1e-6)
        assert report.origin == "expanding"
        assert report.baseline == []
        assert len(report.extra) == 1
        assert report.extra[0] == pytest.approx(2e-6 / (1e-2 * math.pi), rel=0.1)
        assert report.sliding_stability == "attracting"
        assert report.sliding[0] == pytest.approx(-1e-6, rel=0.05)

    def test_opposite_sign(self, field):
        """Test that b < 0 adds no cycle and the sliding segment repels."""
        report = pseudo_hopf_demo(field, -1e-6)
        assert report.extra == []
        assert report.sliding_stability == "repelling"

    def test_no_constant(self, field):
        """Test that b = 0 adds nothing and has no sliding segment."""
        report = pseudo_hopf_demo(field, 0.0)
        assert report.extra == []
        assert report.sliding is None
        assert sliding_segment(field) is None

    def test_large_constant(self, field):
        """Test that a constant comparable to the grid is rejected."""
        with pytest.raises(NumericIntegrationError):
            pseudo_hopf_demo(field, 0.02)
