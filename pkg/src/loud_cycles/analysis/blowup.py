"""Linear elimination of dependent rows and monomial parameter blow-ups."""

from typing import Any, Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from sympy.polys.rings import PolyElement, ring

from ..errors import BlowupError
from ..expansion.difference import DifferenceJet
from ..trigcalc.pipoly import PI_FIELD, field_from_qq
from ..trigcalc.rings import KERNEL_SYMBOLS, PARAMETER_NAMES, PARAMETER_OFFSET
from ..utils.logger import get_logger
from .ladder import Ladder, alias_name

logger = get_logger(__name__)

Monomial = Dict[str, int]


class ReducedRows(BaseModel):
    """Rows ``Psi~_j`` after the linear change and the zero reductions."""

    system: str = Field(..., description="Case tag")
    variables: Tuple[str, ...] = Field(..., description="Generators still free")
    rows: Dict[int, PolyElement] = Field(..., description="Power of r -> reduced row over QQ(pi)")
    ring: Any = Field(..., description="Polynomial ring of the reduced rows")

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    def linear_part(self, j: int) -> PolyElement:
        return self.ring.from_dict(
            {m: c for m, c in self.rows[j].iterterms() if sum(m) == 1}
        )


def _images(
    ladder: Ladder, ring_, names: Sequence[str], zero_aliases: Sequence[int], zeroed: Sequence[str]
) -> List[Optional[PolyElement]]:
    """Each kernel parameter expressed in the reduced ring (``None`` for zero)."""
    index = {name: ring_.gens[i] for i, name in enumerate(names)}
    killed = {alias_name(l) for l in zero_aliases} | set(zeroed)
    images: List[Optional[PolyElement]] = []
    for name in KERNEL_SYMBOLS[PARAMETER_OFFSET:]:
        form = {} if name in killed else ladder.parameter_form(name)
        image = ring_.zero
        for key, coefficient in form.items():
            if key in killed:
                continue
            image += index[key] * coefficient
        images.append(image if image else None)
    return images


def _convert(poly: PolyElement, images, ring_, cache: Dict) -> PolyElement:
    result = ring_.zero
    for monom, coefficient in poly.iterterms():
        if any(monom[1:PARAMETER_OFFSET]):
            raise BlowupError("rows still depend on the symbolic line; specialize tau first")
        key = tuple(
            (i, e) for i, e in enumerate(monom[PARAMETER_OFFSET:]) if e
        )
        if key not in cache:
            product = ring_.one
            for i, e in key:
                if images[i] is None:
                    product = ring_.zero
                    break
                product *= images[i] ** e
            cache[key] = product
        product = cache[key]
        if product:
            result += product * field_from_qq(coefficient, monom[0])
    return result


def eliminate_dependent_linear(
    jet: DifferenceJet,
    ladder: Ladder,
    rows: Sequence[int],
    zero_aliases: Sequence[int] = (),
    zeroed: Sequence[str] = (),
) -> ReducedRows:
    """Subtract from each dependent row its linear combination of aliased rows.

    Row ``j`` becomes ``Psi~_j - sum_l c_{j,l} Psi~_{row(l)}`` so its linear part
    vanishes; then ``alpha_l`` for ``l`` in ``zero_aliases`` and the parameters in
    ``zeroed`` are set to zero. Zeroing is a ring map, so it is applied to the
    parameter images before the quadratic parts are expanded.
    """
    if not jet.absorbed:
        raise BlowupError("eliminate the small parameter first (epsilon_absorb)")
    if jet.order < 2:
        raise BlowupError(f"second-order rows are required, jet of {jet.system} has order {jet.order}")
    unknown = [p for p in zeroed if p not in PARAMETER_NAMES]
    if unknown:
        raise BlowupError(f"cannot zero {unknown}: not perturbation parameters")
    if set(zeroed) & set(ladder.pivots):
        raise BlowupError("pivot parameters are expressed through aliases and cannot be zeroed")

    killed = set(zero_aliases)
    names = tuple(
        [alias_name(row.alias) for row in ladder.rows if row.alias not in killed]
        + [p for p in ladder.unused if p not in set(zeroed)]
    )
    ring_, *_ = ring(",".join(names), PI_FIELD)
    images = _images(ladder, ring_, names, zero_aliases, zeroed)
    cache: Dict = {}
    totals = jet.totals()

    needed = set(rows)
    for j in rows:
        needed |= {ladder.alias_row(l) for l in ladder.dependent.get(j, {})}
    converted = {j: _convert(totals[j - 1], images, ring_, cache) for j in sorted(needed)}

    reduced = {}
    for j in rows:
        row = converted[j]
        for l, c in ladder.dependent.get(j, {}).items():
            row -= converted[ladder.alias_row(l)] * c
        reduced[j] = row

    result = ReducedRows(system=jet.system, variables=names, rows=reduced, ring=ring_)
    for j in rows:
        if j in ladder.dependent and result.linear_part(j):
            raise BlowupError(f"row {j} of {jet.system} keeps a linear part after elimination")
    logger.info(
        "Dependent linear parts eliminated",
        system=jet.system,
        rows=list(rows),
        variables=list(names),
        terms={j: len(r) for j, r in reduced.items()},
    )
    return result


class BlowupSpec(BaseModel):
    """Monomial blow-up of the remaining parameters around a pivot alias."""

    case: str = Field(..., description="Case tag the blow-up belongs to")
    pivot: int = Field(..., description="Index l of the pivot alpha_l")
    power: int = Field(default=2, description="Power of the pivot dividing the equation rows")
    zero_aliases: Tuple[int, ...] = Field(..., description="Aliases set to zero")
    zeroed: Tuple[str, ...] = Field(..., description="Parameters set to zero")
    substitutions: Dict[str, Monomial] = Field(
        ..., description="Variable -> monomial in the pivot and the blow-up unknowns"
    )
    rows: Tuple[int, ...] = Field(..., description="Rows Psi~_j taking part")
    equations: Tuple[int, ...] = Field(..., description="Rows whose h_{j,0} form the square system")
    check_row: int = Field(..., description="Row carrying the non-vanishing condition")
    check_power: int = Field(..., description="Pivot power whose coefficient in the check row must not vanish")
    unknowns: Tuple[str, ...] = Field(..., description="Blow-up unknowns in solution order")
    anchor: Tuple[float, ...] = Field(default=(), description="Published approximate solution")
    anchor_digits: int = Field(default=4, ge=1, description="Significant figures of the published values")
    depth: Optional[int] = Field(
        default=None, description="Rows the ladder must reach so every pivot alias exists"
    )

    model_config = ConfigDict(frozen=True)

    @property
    def n(self) -> int:
        """Truncation of the second-order jet."""
        return self.depth or max(self.rows)

    @field_validator("substitutions")
    @classmethod
    def _monomial(cls, value: Dict[str, Monomial]) -> Dict[str, Monomial]:
        for variable, monomial in value.items():
            if not monomial or any(int(e) < 1 for e in monomial.values()):
                raise BlowupError(f"substitution for {variable} is not a monomial")
        return value

    @model_validator(mode="after")
    def _square(self) -> "BlowupSpec":
        if len(self.equations) != len(self.unknowns):
            raise BlowupError(
                f"{self.case}: {len(self.equations)} equations for {len(self.unknowns)} unknowns"
            )
        if self.anchor and len(self.anchor) != len(self.unknowns):
            raise BlowupError(f"{self.case}: anchor does not match the unknowns")
        if not set(self.equations) | {self.check_row} <= set(self.rows):
            raise BlowupError(f"{self.case}: equation rows outside the declared rows")
        if self.depth is not None and self.depth < max(self.rows):
            raise BlowupError(f"{self.case}: depth {self.depth} stops before row {max(self.rows)}")
        allowed = {self.pivot_name, *self.unknowns}
        for variable, monomial in self.substitutions.items():
            if set(monomial) - allowed:
                raise BlowupError(f"{self.case}: {variable} maps outside pivot and unknowns")
        return self

    @property
    def pivot_name(self) -> str:
        return alias_name(self.pivot)


class HSystem(BaseModel):
    """Lowest pivot-order parts ``h_{j,0}`` of the blown-up rows."""

    case: str = Field(..., description="Case tag")
    unknowns: Tuple[str, ...] = Field(..., description="Unknowns of the square system")
    functions: Dict[int, PolyElement] = Field(..., description="Row j -> h_{j,0}")
    equations: Tuple[int, ...] = Field(..., description="Rows forming the square system")
    check_row: int = Field(..., description="Row of the non-vanishing condition")
    check_function: PolyElement = Field(..., description="Function that must not vanish at the root")
    anchor: Tuple[float, ...] = Field(default=(), description="Published approximate solution")
    ring: Any = Field(..., description="Polynomial ring of the unknowns over QQ(pi)")

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @property
    def square(self) -> List[PolyElement]:
        return [self.functions[j] for j in self.equations]


class BlownRows(BaseModel):
    """Rows after the monomial substitution, with their exact quotients by the pivot power."""

    rows: Dict[int, PolyElement] = Field(..., description="Blown-up rows")
    quotients: Dict[int, PolyElement] = Field(..., description="Row j divided by pivot^power")
    powers: Dict[int, int] = Field(..., description="Power divided out of each row")
    ring: Any = Field(..., description="Ring of pivot and unknowns")

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)


def blow_up(reduced: ReducedRows, spec: BlowupSpec) -> BlownRows:
    """Substitute the monomial map and divide each row exactly by its pivot power."""
    names = (spec.pivot_name,) + spec.unknowns
    target, *_ = ring(",".join(names), PI_FIELD)
    position = {name: i for i, name in enumerate(names)}

    exponents: List[Optional[Tuple[int, ...]]] = []
    for variable in reduced.variables:
        vector = [0] * len(names)
        if variable == spec.pivot_name:
            vector[0] = 1
        elif variable in spec.substitutions:
            for symbol, e in spec.substitutions[variable].items():
                vector[position[symbol]] += int(e)
        else:
            exponents.append(None)
            continue
        exponents.append(tuple(vector))

    rows, quotients, powers = {}, {}, {}
    for j in spec.rows:
        terms = {}
        for monom, coefficient in reduced.rows[j].iterterms():
            image = [0] * len(names)
            for variable, e, vector in zip(reduced.variables, monom, exponents):
                if e and vector is None:
                    raise BlowupError(
                        f"{spec.case}: {variable} occurs in row {j} but is neither zeroed nor blown up"
                    )
                if e:
                    image = [a + e * b for a, b in zip(image, vector)]
            key = tuple(image)
            terms[key] = terms.get(key, PI_FIELD.zero) + coefficient
        row = target.from_dict({k: v for k, v in terms.items() if v})
        power = spec.check_power if j == spec.check_row else spec.power
        low = [m for m in row.itermonoms() if m[0] < power]
        if low:
            raise BlowupError(
                f"{spec.case}: row {j} is not divisible by {spec.pivot_name}^{power} "
                f"(lowest term exponent {min(m[0] for m in low)})"
            )
        quotient = target.from_dict(
            {(m[0] - power,) + m[1:]: c for m, c in row.iterterms()}
        )
        if quotient * target.gens[0] ** power != row:
            raise BlowupError(f"{spec.case}: quotient of row {j} does not reproduce the row")
        rows[j], quotients[j], powers[j] = row, quotient, power
    return BlownRows(rows=rows, quotients=quotients, powers=powers, ring=target)


def blowup_reduce(
    jet: DifferenceJet, ladder: Ladder, spec: BlowupSpec
) -> Tuple[HSystem, ReducedRows, BlownRows]:
    """Eliminate, zero, blow up and keep the pivot-free parts ``h_{j,0}``."""
    if jet.system != spec.case:
        raise BlowupError(f"blow-up for {spec.case} applied to {jet.system}")
    reduced = eliminate_dependent_linear(jet, ladder, spec.rows, spec.zero_aliases, spec.zeroed)
    blown = blow_up(reduced, spec)
    h_ring, *_ = ring(",".join(spec.unknowns), PI_FIELD)
    functions = {}
    for j, quotient in blown.quotients.items():
        functions[j] = h_ring.from_dict(
            {m[1:]: c for m, c in quotient.iterterms() if m[0] == 0}
        )
    system = HSystem(
        case=spec.case,
        unknowns=spec.unknowns,
        functions=functions,
        equations=spec.equations,
        check_row=spec.check_row,
        check_function=functions[spec.check_row],
        anchor=spec.anchor,
        ring=h_ring,
    )
    logger.info(
        "Blow-up reduced",
        case=spec.case,
        pivot=spec.pivot_name,
        unknowns=list(spec.unknowns),
        terms={j: len(h) for j, h in functions.items()},
    )
    return system, reduced, blown
