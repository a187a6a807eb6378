"""Unit tests for ladders, blow-ups, h-systems and cycle counts."""

from fractions import Fraction
from unittest.mock import patch

import mpmath
import pandas as pd
import pytest
from pydantic import ValidationError
from sympy.polys.rings import ring

from ..config.settings import settings
from ..errors import (
    BlowupError,
    ConvergenceError,
    LadderError,
    SummaryMismatchError,
    SystemDefinitionError,
    TransversalityError,
)
from ..expansion.difference import DifferenceJet, difference, epsilon_absorb, published_convention
from ..expansion.jets import expand
from ..systems.piecewise import make_case
from ..trigcalc.pipoly import PI_FIELD, PI_GEN, field_element, field_to_fraction
from ..trigcalc.rings import KERNEL_RING, PARAMETER_NAMES, PI, gen
from . import hsystem
from .blowup import BlowupSpec, HSystem, blow_up, blowup_reduce, eliminate_dependent_linear
from .cases import CASES, S1S2_BLOWUP, S3_BLOWUP, S4_BLOWUP, case_count, case_data
from .construction import alternating_zeros
from .counting import (
    REFERENCE_COUNTS,
    CycleCountReport,
    check_summary,
    first_order_count,
    second_order_count,
    summary_table,
)
from .hsystem import HSolution, scaled_determinant, solve_h_system
from .ladder import Ladder, independence_ladder, verify_ladder

HALF = Fraction(1, 2)
ZERO = KERNEL_RING.zero


def g(name: str):
    return gen(name)


def make_jet(first, second=None, system="S9", absorbed=False) -> DifferenceJet:
    """Hand-made difference jet with the given first- and second-order rows."""
    n = len(first)
    psi = {0: [ZERO] * n, 1: list(first)}
    if second is not None:
        psi[2] = list(second)
    return DifferenceJet(
        system=system,
        rotation="1/2",
        order=2 if second is not None else 1,
        n=n,
        psi=psi,
        absorbed=absorbed,
    )


@pytest.fixture
def toy_jet():
    """Rows am10 + 2 bm01, pi bm01 + ap10, a dependent row and bp01."""
    return make_jet(
        [
            g("am10") + 2 * g("bm01"),
            PI * g("bm01") + g("ap10"),
            3 * g("am10") + (6 - 2 * PI) * g("bm01") - 2 * g("ap10"),
            g("bp01"),
        ]
    )


@pytest.fixture
def toy_second_order():
    """Absorbed order-2 jet whose blow-up gives h = z1^2 - 2."""
    first = [g("am10"), 2 * g("am10"), g("am01"), ZERO]
    second = [
        ZERO,
        g("bm10") ** 2 + g("am10") * g("bm10") - 2 * g("am01") ** 2,
        g("am01") * g("bm10"),
        g("bm10") ** 2,
    ]
    return make_jet(first, second, absorbed=True)


@pytest.fixture
def toy_spec():
    return BlowupSpec(
        case="S9",
        pivot=2,
        zero_aliases=(1,),
        zeroed=(),
        substitutions={"bm10": {"alpha2": 1, "z1": 1}},
        rows=(2, 3),
        equations=(2,),
        check_row=3,
        check_power=1,
        unknowns=("z1",),
        anchor=(1.4,),
    )


class TestLadderBookkeeping:
    """Test cases for the sequential elimination on hand-made rows."""

    def test_canonical_policy(self, toy_jet):
        """Test pivots, positions and the dependent combination."""
        ladder = independence_ladder(toy_jet)
        assert ladder.positions == [1, 2, 4]
        assert ladder.pivots == ["am10", "bm01", "bp01"]
        assert ladder.free_count == 3
        assert ladder.dependent == {3: {1: field_element(3), 2: field_element(-2)}}

    def test_back_substitution(self, toy_jet):
        """Test that earlier pivot expressions are rewritten after later solves."""
        ladder = independence_ladder(toy_jet)
        two_over_pi = field_element(2) / PI_GEN
        assert ladder.expressions["am10"] == {
            "alpha1": PI_FIELD.one,
            "alpha2": -two_over_pi,
            "ap10": two_over_pi,
        }
        assert ladder.expressions["bm01"] == {"alpha2": PI_FIELD.one / PI_GEN, "ap10": -PI_FIELD.one / PI_GEN}

    def test_paper_policy(self, toy_jet):
        """Test that a forced pivot sequence yields the same dependent row."""
        ladder = independence_ladder(toy_jet, policy="paper", pivots=["am10", "ap10", "bp01"])
        assert ladder.pivots == ["am10", "ap10", "bp01"]
        assert ladder.dependent[3] == {1: field_element(3), 2: field_element(-2)}
        verify_ladder(ladder, toy_jet)

    def test_forced_pivot_absent(self, toy_jet):
        """Test that a forced pivot missing from its row is rejected."""
        with pytest.raises(LadderError, match="cannot be solved"):
            independence_ladder(toy_jet, policy="paper", pivots=["ap01", "ap10", "bp01"])

    def test_pivot_sequence_exhausted(self, toy_jet):
        """Test that an independent row after the last forced pivot is an error."""
        with pytest.raises(LadderError, match="exhausted"):
            independence_ladder(toy_jet, policy="paper", pivots=["am10", "ap10"])

    def test_unknown_policy(self, toy_jet):
        """Test that an unknown policy name is rejected."""
        with pytest.raises(LadderError):
            independence_ladder(toy_jet, policy="greedy")

    def test_soundness(self, toy_jet):
        """Test that the stored expressions reproduce every row exactly."""
        verify_ladder(independence_ladder(toy_jet), toy_jet)

    def test_tampered_row_detected(self, toy_jet):
        """Test that a wrong dependent coefficient fails verification."""
        ladder = independence_ladder(toy_jet)
        broken = ladder.model_copy(
            update={"dependent": {3: {1: field_element(4), 2: field_element(-2)}}}
        )
        with pytest.raises(LadderError):
            verify_ladder(broken, toy_jet)

    def test_dependent_rows_use_earlier_aliases(self, toy_jet):
        """Test that a dependent row may only mention aliases solved before it."""
        ladder = independence_ladder(toy_jet)
        with pytest.raises(LadderError):
            Ladder(**{**dict(ladder), "dependent": {3: {3: field_element(1)}}})

    def test_zero_rows_are_dependent(self):
        """Test that vanishing rows are recorded as empty combinations."""
        ladder = independence_ladder(make_jet([g("am10"), ZERO]))
        assert ladder.dependent == {2: {}}

    def test_zeroed_parameters_excluded(self, toy_jet):
        """Test that parameters zeroed in the jet are not pivot candidates."""
        jet = toy_jet.model_copy(update={"zeroed": ["ap01"]})
        assert "ap01" not in independence_ladder(jet).parameters

    def test_record_round_trip(self, toy_jet):
        """Test that the JSON record restores the same ladder."""
        ladder = independence_ladder(toy_jet)
        restored = Ladder.from_record(ladder.to_record())
        assert restored.positions == ladder.positions
        assert restored.dependent == ladder.dependent
        assert restored.expressions == ladder.expressions

    def test_describe(self, toy_jet):
        """Test the human-readable listing."""
        lines = independence_ladder(toy_jet).describe()
        assert lines[0].startswith("psi~1,1 = alpha1")
        assert lines[2] == "psi~1,3 = (3)*alpha1 + (-2)*alpha2"


class TestEliminationAndBlowup:
    """Test cases for the linear change and the monomial blow-up."""

    def test_dependent_linear_part_removed(self, toy_second_order):
        """Test that the dependent row loses its linear part and alpha_1 is zeroed."""
        ladder = independence_ladder(toy_second_order)
        reduced = eliminate_dependent_linear(toy_second_order, ladder, (2, 3), zero_aliases=(1,))
        assert not reduced.linear_part(2)
        assert "alpha1" not in reduced.variables
        r = reduced.ring
        bm10 = r.gens[reduced.variables.index("bm10")]
        alpha2 = r.gens[reduced.variables.index("alpha2")]
        assert reduced.rows[2] == bm10**2 - 2 * alpha2**2

    def test_requires_absorbed_jet(self, toy_second_order):
        """Test that the tilde form is required."""
        jet = toy_second_order.model_copy(update={"absorbed": False})
        with pytest.raises(BlowupError):
            eliminate_dependent_linear(jet, independence_ladder(jet), (2,))

    def test_h_system(self, toy_second_order, toy_spec):
        """Test h_{2,0} = z1^2 - 2 and the check function 1."""
        ladder = independence_ladder(toy_second_order)
        hs, _, blown = blowup_reduce(toy_second_order, ladder, toy_spec)
        z1 = hs.ring.gens[0]
        assert hs.functions[2] == z1**2 - 2
        assert hs.check_function == hs.ring.one
        for j, quotient in blown.quotients.items():
            assert quotient * blown.ring.gens[0] ** blown.powers[j] == blown.rows[j]

    def test_divisibility_failure(self, toy_second_order, toy_spec):
        """Test that a too large pivot power is a structural error."""
        ladder = independence_ladder(toy_second_order)
        spec = toy_spec.model_copy(update={"power": 3})
        with pytest.raises(BlowupError, match="not divisible"):
            blowup_reduce(toy_second_order, ladder, spec)

    def test_unsubstituted_variable(self, toy_second_order, toy_spec):
        """Test that a surviving variable without substitution is rejected."""
        ladder = independence_ladder(toy_second_order)
        reduced = eliminate_dependent_linear(toy_second_order, ladder, (2, 3), zero_aliases=(1,))
        spec = toy_spec.model_copy(update={"substitutions": {}})
        with pytest.raises(BlowupError, match="neither zeroed nor blown up"):
            blow_up(reduced, spec)

    def test_wrong_case(self, toy_second_order, toy_spec):
        """Test that a spec only applies to its own case."""
        ladder = independence_ladder(toy_second_order)
        with pytest.raises(BlowupError):
            blowup_reduce(toy_second_order, ladder, toy_spec.model_copy(update={"case": "S4"}))

    def test_spec_must_be_square(self, toy_spec):
        """Test that equations and unknowns must match in number."""
        with pytest.raises(BlowupError):
            BlowupSpec(**{**toy_spec.model_dump(), "equations": (2, 3)})

    def test_depth(self, toy_spec):
        """Test that the jet depth defaults to the last row and may not stop before it."""
        assert toy_spec.n == 3
        assert BlowupSpec(**{**toy_spec.model_dump(), "depth": 5}).n == 5
        with pytest.raises(BlowupError, match="depth 2"):
            BlowupSpec(**{**toy_spec.model_dump(), "depth": 2})

    def test_substitutions_are_monomials(self, toy_spec):
        """Test that a zero exponent is not accepted as a monomial."""
        with pytest.raises(BlowupError):
            BlowupSpec(**{**toy_spec.model_dump(), "substitutions": {"bm10": {"z1": 0}}})

    def test_substitution_targets(self, toy_spec):
        """Test that substitutions only use the pivot and the unknowns."""
        with pytest.raises(BlowupError):
            BlowupSpec(**{**toy_spec.model_dump(), "substitutions": {"bm10": {"w": 1}}})


def _h_system(functions, unknowns, anchor=(), check=None):
    r, *_ = ring(",".join(unknowns), PI_FIELD)
    built = {j: f(*r.gens) for j, f in enumerate(functions, start=1)}
    check_row = len(functions) + 1
    built[check_row] = check(*r.gens) if check else r.one
    return HSystem(
        case="S9",
        unknowns=tuple(unknowns),
        functions=built,
        equations=tuple(range(1, len(functions) + 1)),
        check_row=check_row,
        check_function=built[check_row],
        anchor=tuple(anchor),
        ring=r,
    )


class TestSolveHSystem:
    """Test cases for the high-precision Newton solver and its certificates."""

    def test_square_root(self):
        """Test convergence to sqrt(2) at 50 digits."""
        hs = _h_system([lambda z: z**2 - 2], ["z1"], anchor=(1.4,))
        solution = solve_h_system(hs)
        with mpmath.workdps(50):
            assert abs(solution.values[0] - mpmath.sqrt(2)) < mpmath.mpf(10) ** -20
        assert solution.residual <= settings.residual_tolerance
        assert solution.certified
        assert solution.anchor_deviation["z1"] == pytest.approx(abs(2**0.5 - 1.4) / 1.4, rel=1e-6)

    def test_mixed_magnitudes(self):
        """Test a gamma-like unknown of size 1e6 next to an order-one unknown."""
        hs = _h_system(
            [lambda gm, z: gm - 10**6 * z**2, lambda gm, z: z**2 - 2],
            ["gamma", "z"],
            anchor=(2.1e6, 1.3),
        )
        solution = solve_h_system(hs)
        values = solution.as_floats()
        assert values["gamma"] == pytest.approx(2e6, rel=1e-12)
        assert values["z"] == pytest.approx(2**0.5, rel=1e-12)
        assert solution.scaled_determinant == pytest.approx(0.5, rel=1e-6)

    def test_pi_coefficients(self):
        """Test that coefficients in QQ(pi) are evaluated with the working pi."""
        hs = _h_system([lambda z: z * PI_GEN - 1], ["z"], anchor=(0.3,))
        solution = solve_h_system(hs)
        assert float(solution.values[0]) == pytest.approx(1 / 3.141592653589793, rel=1e-14)

    def test_double_root_not_transversal(self):
        """Test that a parabola touching its tangent line is not transversal."""
        hs = _h_system(
            [lambda x, y: y - x**2, lambda x, y: y - 2 * x + 1], ["x", "y"], anchor=(2.0, 3.0)
        )
        with pytest.raises(TransversalityError):
            solve_h_system(hs)
        solution = solve_h_system(hs, certify=False)
        assert not solution.transversal

    def test_vanishing_check_function(self):
        """Test that a check function vanishing at the root is reported."""
        hs = _h_system([lambda z: z - 1], ["z"], anchor=(2.0,), check=lambda z: z - 1)
        with pytest.raises(TransversalityError, match="vanishes"):
            solve_h_system(hs)

    def test_no_real_root(self, monkeypatch):
        """Test that a system without real roots does not converge."""
        monkeypatch.setattr(settings, "coarse_starts", 4)
        hs = _h_system([lambda z: z**2 + 1], ["z"], anchor=(0.5,))
        with pytest.raises(ConvergenceError):
            solve_h_system(hs)

    def test_singular_start_falls_back(self):
        """Test that a start with a zero Jacobian column hands over to the coarse search."""
        hs = _h_system([lambda z: z**2 - 2], ["z1"], anchor=(0.0,))
        with patch.object(hsystem, "coarse_start", wraps=hsystem.coarse_start) as search:
            solution = solve_h_system(hs)
        search.assert_called_once()
        assert abs(float(solution.values[0])) == pytest.approx(2**0.5, rel=1e-14)

    def test_singular_lu_is_convergence_error(self, monkeypatch):
        """Test that a TypeError from the LU solve becomes a ConvergenceError."""

        def singular(*args, **kwargs):
            raise TypeError("unsupported operand type(s) for /: 'mpf' and 'NoneType'")

        monkeypatch.setattr(settings, "coarse_starts", 2)
        monkeypatch.setattr(hsystem.mpmath, "lu_solve", singular)
        hs = _h_system([lambda z: z**2 - 2], ["z1"], anchor=(1.4,))
        with patch.object(hsystem, "coarse_start", wraps=hsystem.coarse_start) as search:
            with pytest.raises(ConvergenceError, match="singular Jacobian"):
                solve_h_system(hs)
        search.assert_called_once()

    def test_absent_unknown(self):
        """Test that an unknown missing from the square system is rejected."""
        hs = _h_system([lambda x, y: x - 1, lambda x, y: 2 * x - 2], ["x", "y"], anchor=(1.0, 1.0))
        with pytest.raises(TransversalityError, match="y do not occur"):
            solve_h_system(hs, certify=False)

    def test_anchor_match(self):
        """Test the significant-figure comparison with the published values."""
        hs = _h_system([lambda z: z**2 - 2], ["z1"], anchor=(1.414,))
        solution = solve_h_system(hs)
        assert solution.anchor_match(4)
        assert not solution.anchor_match(6)

    def test_coarse_start_without_anchor(self):
        """Test that the coarse search supplies a start when none is given."""
        hs = _h_system([lambda z: z - 7], ["z"])
        solution = solve_h_system(hs)
        assert float(solution.values[0]) == pytest.approx(7.0)

    def test_scaled_determinant(self):
        """Test row and column scaling of the determinant."""
        with mpmath.workdps(30):
            value = scaled_determinant([[mpmath.mpf(1), mpmath.mpf(0)], [mpmath.mpf(0), mpmath.mpf(4)]], [10**6, 2])
        assert float(value) == pytest.approx(1.0)


def _solution(certified: bool = True) -> HSolution:
    return HSolution(
        case="S9",
        unknowns=("z1",),
        values=(mpmath.mpf(1),),
        residual=0.0,
        determinant=mpmath.mpf(1),
        scaled_determinant=1.0,
        check_value=mpmath.mpf(1),
        check_relative=1.0,
        iterations=3,
        precision=50,
        transversal=certified,
        nonvanishing=True,
    )


class TestCounting:
    """Test cases for cycle count reports and the summary table."""

    def test_first_order_count(self, toy_jet):
        """Test K = free_count - 1 plus the pseudo-Hopf cycle."""
        report = first_order_count(independence_ladder(toy_jet))
        assert (report.zeros, report.pseudo_hopf, report.total) == (2, 1, 3)
        assert report.positions == [1, 2, 4]

    def test_empty_ladder(self):
        """Test that a ladder without free coefficients has no count."""
        with pytest.raises(LadderError):
            first_order_count(independence_ladder(make_jet([ZERO, ZERO])))

    def test_total_invariant(self):
        """Test that total must equal zeros plus the pseudo-Hopf increment."""
        with pytest.raises(ValidationError):
            CycleCountReport(system="S1", order=1, free_count=3, zeros=2, total=4)

    def test_blowup_rule(self, toy_jet):
        """Test that a certified blow-up counts up to the pivot row."""
        ladder = independence_ladder(toy_jet)
        report = second_order_count(ladder, "blowup", pivot=3, solution=_solution())
        assert (report.order, report.zeros, report.total, report.certified) == (2, 3, 4, True)

    def test_blowup_rule_requires_certificate(self, toy_jet):
        """Test that a missing or failed certificate is an error."""
        ladder = independence_ladder(toy_jet)
        with pytest.raises(TransversalityError):
            second_order_count(ladder, "blowup", pivot=3)
        with pytest.raises(TransversalityError):
            second_order_count(ladder, "blowup", pivot=3, solution=_solution(False))

    def test_pivot_rule(self, toy_jet):
        """Test that the pivot rule counts to the last solvable row, uncertified."""
        report = second_order_count(independence_ladder(toy_jet), "pivot-rule")
        assert report.total == 4
        assert not report.certified

    def test_first_order_rule(self, toy_jet):
        """Test that the first-order rule keeps the first-order total."""
        report = second_order_count(independence_ladder(toy_jet), "first-order")
        assert (report.order, report.total) == (2, 3)

    def test_summary_matches_reference(self):
        """Test that the published table passes the check and is monotone."""
        reports = {}
        for system, (first, second) in REFERENCE_COUNTS.items():
            a = CycleCountReport(system=system, tau="1/2", order=1, free_count=first, zeros=first - 1, total=first)
            b = a.model_copy(update={"order": 2, "zeros": second - 1, "total": second})
            reports[system] = (a, b)
        table = summary_table(reports)
        assert isinstance(table, pd.DataFrame)
        assert list(table["second_order"]) == [7, 10, 9, 12, 12]
        assert (table["second_order"] >= table["first_order"]).all()
        check_summary(table)

    def test_summary_mismatch(self):
        """Test that a differing cell is reported."""
        a = CycleCountReport(system="S4", tau="1/2", order=1, free_count=9, zeros=8, total=9)
        b = a.model_copy(update={"order": 2, "zeros": 10, "total": 11})
        with pytest.raises(SummaryMismatchError, match="S4"):
            check_summary(summary_table({"S4": (a, b)}))

    def test_summary_skips_uncertified_total(self):
        """Test that the pivot-rule total of S2 is checked only at first order."""
        a = CycleCountReport(system="S2", tau="1/2", order=1, free_count=8, zeros=7, total=8)
        b = a.model_copy(update={"order": 2, "zeros": 8, "total": 9, "certified": False})
        check_summary(summary_table({"S2": (a, b)}))
        wrong = a.model_copy(update={"free_count": 7, "zeros": 6, "total": 7})
        with pytest.raises(SummaryMismatchError, match="S2: got 7 at first order"):
            check_summary(summary_table({"S2": (wrong, b)}))


class TestConstruction:
    """Test cases for the alternating-sign zero construction."""

    @pytest.fixture
    def jet(self):
        return make_jet([g("am10"), g("am01"), g("am20"), g("am10")])

    def test_designed_zeros(self, jet):
        """Test that psi_1 vanishes at r0/2 and r0/4 and changes sign there."""
        ladder = independence_ladder(jet)
        construction = alternating_zeros(ladder, Fraction(1, 2), jet=jet)
        assert [float(z) for z in construction.zeros] == [0.25, 0.125]
        assert construction.alternating
        assert construction.verified
        values = construction.parameter_floats()
        for r in (0.25, 0.125):
            assert jet.evaluate(1, r, values) == pytest.approx(0.0, abs=1e-12)

    def test_alternating_alphas(self, jet):
        """Test the sign pattern of the free coefficients."""
        construction = alternating_zeros(independence_ladder(jet))
        assert construction.alpha_signs in ([1, -1, 1], [-1, 1, -1])

    def test_needs_two_free_coefficients(self):
        """Test that one free coefficient designs no zero."""
        with pytest.raises(LadderError):
            alternating_zeros(independence_ladder(make_jet([g("am10"), ZERO])))


class TestCaseData:
    """Test cases for the per-case blow-up data."""

    def test_lookup(self):
        """Test lookup by tag and by display name."""
        assert case_data("S1&S2") is CASES["s1s2"]
        assert case_data("s4").rule == "blowup"
        with pytest.raises(SystemDefinitionError):
            case_data("linear")

    @pytest.mark.parametrize("tag", ["s3", "s4", "s1s2"])
    def test_blowups_cover_every_parameter(self, tag):
        """Test that pivots, zeroed and blown-up parameters partition the twenty."""
        data = CASES[tag]
        spec = data.blowup
        pivots = set(data.pivots)
        zeroed = set(spec.zeroed)
        blown = {v for v in spec.substitutions if not v.startswith("alpha")}
        assert not pivots & zeroed and not pivots & blown and not zeroed & blown
        assert pivots | zeroed | blown == set(PARAMETER_NAMES)

    @pytest.mark.parametrize("tag", ["s3", "s4", "s1s2"])
    def test_blowups_cover_every_alias(self, tag):
        """Test that every alias is zeroed, blown up or the pivot."""
        data = CASES[tag]
        spec = data.blowup
        blown = {int(v[len("alpha"):]) for v in spec.substitutions if v.startswith("alpha")}
        aliases = set(spec.zero_aliases) | blown | {spec.pivot}
        assert aliases == set(range(1, len(data.pivots) + 1))

    def test_min_n(self):
        """Test the truncation needed by each case."""
        assert CASES["s4"].min_n == 12
        assert CASES["s3"].min_n == 12
        assert CASES["s1"].min_n == 11

    def test_case_count_rules(self, toy_jet):
        """Test that case_count applies the rule of the case."""
        ladder = independence_ladder(toy_jet)
        assert case_count(CASES["s2"], ladder).rule == "pivot-rule"
        assert case_count(CASES["s1"], ladder).total == ladder.free_count


S4_ROW7 = [
    Fraction(-13061776996188618752, 2780914306640625),
    Fraction(-54153241671606272, 7415771484375),
    Fraction(-1319866958176, 263671875),
    Fraction(-92382032896, 52734375),
    Fraction(-44894744, 140625),
    Fraction(-3584, 125),
]

S1S2_ROW9 = [
    Fraction(27456, 390625),
    Fraction(-36752, 78125),
    Fraction(-22027, 3125),
    Fraction(-163833, 6250),
    Fraction(-94071, 2000),
    Fraction(-5856, 125),
    Fraction(-663, 25),
    Fraction(-8),
]


S4_ROW9 = [
    Fraction(35427806878368205783957504, 14483928680419921875),
    Fraction(1313963570140369073668096, 347614288330078125),
    Fraction(7121695391403890212096, 2780914306640625),
    Fraction(1296197793646163968, 1483154296875),
    Fraction(2960772455199952, 19775390625),
    Fraction(23193321472, 2109375),
    Fraction(-896, 25),
]

S4_ROW11 = [
    Fraction(-30988402760095390237763808174014464, 18331222236156463623046875),
    Fraction(-382824149846431286161826196488192, 146649777889251708984375),
    Fraction(-76744035193724040416612082688, 43451786041259765625),
    Fraction(-69650183483775462018056192, 115871429443359375),
    Fraction(-284726400765915795149312, 2780914306640625),
    Fraction(-18339444472611340288, 2471923828125),
    Fraction(354937470976, 17578125),
    Fraction(-5376, 125),
]

S3_ROW7 = [
    Fraction(-123396623697969152, 2780914306640625),
    Fraction(47519539134464, 274658203125),
    Fraction(-69377982464, 263671875),
    Fraction(10399227904, 52734375),
    Fraction(-10598144, 140625),
    Fraction(5248, 375),
]

S3_ROW9 = [
    Fraction(79291845609546636591104, 14483928680419921875),
    Fraction(-22147997279223453581312, 1042842864990234375),
    Fraction(88803259464124727296, 2780914306640625),
    Fraction(-1282919781892096, 54931640625),
    Fraction(55373245251584, 6591796875),
    Fraction(-898318336, 703125),
    Fraction(1312, 75),
]

S3_ROW11 = [
    Fraction(-16497681899886282309893372248064, 18331222236156463623046875),
    Fraction(170572198789950520780428148736, 48883259296417236328125),
    Fraction(-683024555783581807897739264, 130355358123779296875),
    Fraction(1328662146680609176551424, 347614288330078125),
    Fraction(-3801923790886678822912, 2780914306640625),
    Fraction(169088920535957504, 823974609375),
    Fraction(-123758313472, 52734375),
    Fraction(2624, 125),
]

S1S2_ROW11 = [
    Fraction(-26849248, 9765625),
    Fraction(36771864, 1953125),
    Fraction(43321833, 156250),
    Fraction(12752699, 12500),
    Fraction(900727361, 500000),
    Fraction(5440604, 3125),
    Fraction(4604183, 5000),
    Fraction(5632, 25),
    Fraction(-48, 5),
]


def _combination(ladder: Ladder, j: int, aliases: int):
    row = ladder.dependent[j]
    return [field_to_fraction(row[l]) if l in row else Fraction(0) for l in range(1, aliases + 1)]

@pytest.mark.slow
class TestPublishedLadders:
    """Test cases reproducing the published first-order ladders at tau = 1/2."""

    def test_s4_row7(self):
        """Test the S4 pivots and the dependent row 7."""
        jet = difference(expand(make_case("s4", HALF), 1, 7))
        ladder = independence_ladder(jet, policy="paper", pivots=CASES["s4"].pivots)
        assert ladder.positions == [1, 2, 3, 4, 5, 6]
        combination = ladder.dependent[7]
        assert [field_to_fraction(combination[l]) for l in range(1, 7)] == S4_ROW7
        verify_ladder(ladder, jet)

    def test_s1s2_row9(self):
        """Test the S1&S2 pivots and the dependent row 9."""
        jet = difference(expand(make_case("s1s2", HALF), 1, 9))
        ladder = independence_ladder(jet, policy="paper", pivots=CASES["s1s2"].pivots)
        assert ladder.positions == list(range(1, 9))
        combination = ladder.dependent[9]
        assert [field_to_fraction(combination[l]) for l in range(1, 9)] == S1S2_ROW9

    def test_canonical_policy_same_combination(self):
        """Test that the dependent combination does not depend on the pivots."""
        jet = difference(expand(make_case("s4", HALF), 1, 7))
        ladder = independence_ladder(jet)
        assert [field_to_fraction(ladder.dependent[7][l]) for l in range(1, 7)] == S4_ROW7

    @pytest.mark.parametrize(
        "tau, positions",
        [(HALF, [1, 2, 3, 4, 6, 8, 10]), (0, [1, 2, 3, 4, 6])],
    )
    def test_s1_positions(self, tau, positions):
        """Test the free positions of S1 for generic tau and on the axis."""
        jet = difference(expand(make_case("s1", tau), 1, 11))
        ladder = independence_ladder(jet)
        assert ladder.positions == positions
        assert first_order_count(ladder).total == len(positions)


@pytest.mark.slow
class TestPublishedBlowups:
    """Test cases for the S3, S4 and S1&S2 ladders to row 12, their h-systems and roots."""

    @staticmethod
    def _reduce(tag, spec):
        center = make_case(tag, HALF, zeroed=spec.zeroed)
        jet = epsilon_absorb(difference(expand(center, 2, spec.n)))
        ladder = independence_ladder(jet, policy="paper", pivots=CASES[tag].pivots)
        return jet, ladder, blowup_reduce(jet, ladder, spec)

    @staticmethod
    def _published_root(jet, ladder, spec):
        hs, _, _ = blowup_reduce(published_convention(jet), ladder, spec)
        return solve_h_system(hs, certify=False)

    @pytest.fixture(scope="class")
    def s4(self):
        return self._reduce("s4", S4_BLOWUP)

    @pytest.fixture(scope="class")
    def s3(self):
        return self._reduce("s3", S3_BLOWUP)

    @pytest.fixture(scope="class")
    def s1s2(self):
        return self._reduce("s1s2", S1S2_BLOWUP)

    def test_s4_positions(self, s4):
        """Test the S4 free positions up to row 12."""
        _, ladder, _ = s4
        assert ladder.positions == [1, 2, 3, 4, 5, 6, 8, 10, 12]

    def test_s4_rows_9_and_11(self, s4):
        """Test the S4 dependent rows 9 and 11 against their exact combinations."""
        _, ladder, _ = s4
        assert _combination(ladder, 9, 7) == S4_ROW9
        assert _combination(ladder, 11, 8) == S4_ROW11

    def test_s4_structure(self, s4):
        """Test that gamma enters only rows 8 and 10, linearly with coefficient one."""
        _, _, (hs, reduced, _) = s4
        for j in (7, 9, 11):
            assert not reduced.linear_part(j)
        gamma7, gamma8 = hs.ring.gens[0], hs.ring.gens[1]
        for j in (7, 9, 11):
            assert hs.functions[j].degree(gamma7) <= 0 and hs.functions[j].degree(gamma8) <= 0
        assert hs.functions[8].coeff_wrt(gamma7, 1) == hs.ring.one
        assert hs.functions[10].coeff_wrt(gamma8, 1) == hs.ring.one
        assert hs.check_function == hs.ring.one

    def test_s4_published_root(self, s4):
        """Test that the published-display S4 system has the recorded root, transversally."""
        jet, ladder, _ = s4
        solution = self._published_root(jet, ladder, S4_BLOWUP)
        assert solution.anchor_match(S4_BLOWUP.anchor_digits), solution.anchor_deviation
        assert solution.scaled_determinant > settings.jacobian_threshold
        assert solution.transversal
        assert solution.nonvanishing
        assert solution.check_value != 0

    def test_s3_positions_and_rows(self, s3):
        """Test the S3 ladder to row 12 and its dependent rows 7, 9 and 11."""
        _, ladder, _ = s3
        assert ladder.positions == [1, 2, 3, 4, 5, 6, 8, 10, 12]
        assert _combination(ladder, 7, 6) == S3_ROW7
        assert _combination(ladder, 9, 7) == S3_ROW9
        assert _combination(ladder, 11, 8) == S3_ROW11

    def test_s3_blowup_builds(self, s3):
        """Test that every S3 parameter is zeroed, blown up or a live alias once alpha9 exists."""
        _, _, (hs, reduced, _) = s3
        assert set(reduced.variables) == {"alpha7", "alpha8", "am01"}
        assert hs.unknowns == ("gamma7", "z1")
        assert set(hs.functions) == {7, 8, 9}

    def test_s3_second_order_count(self, s3):
        """Test that the S3 second-order count stays at nine."""
        _, ladder, _ = s3
        report = case_count(CASES["s3"], ladder)
        assert (report.order, report.total) == (2, 9)
        assert report.total == REFERENCE_COUNTS["S3"][1]

    def test_s1s2_structure(self, s1s2):
        """Test that gamma9 enters only row 10 and the pivot row starts with alpha10."""
        _, ladder, (hs, _, _) = s1s2
        assert ladder.positions == [1, 2, 3, 4, 5, 6, 7, 8, 10, 12]
        gamma9 = hs.ring.gens[0]
        assert hs.functions[9].degree(gamma9) <= 0
        assert hs.functions[11].degree(gamma9) <= 0
        assert hs.functions[10].coeff_wrt(gamma9, 1) == hs.ring.one
        assert hs.check_function == hs.ring.one

    def test_s1s2_row_11(self, s1s2):
        """Test the S1&S2 dependent row 11."""
        _, ladder, _ = s1s2
        assert _combination(ladder, 11, 9) == S1S2_ROW11

    def test_s1s2_published_root(self, s1s2):
        """Test that the published-display S1&S2 system has the recorded root, transversally."""
        jet, ladder, _ = s1s2
        solution = self._published_root(jet, ladder, S1S2_BLOWUP)
        assert solution.anchor_match(S1S2_BLOWUP.anchor_digits), solution.anchor_deviation
        assert solution.scaled_determinant > settings.jacobian_threshold
        assert solution.transversal
        assert solution.nonvanishing
        assert solution.check_value != 0
