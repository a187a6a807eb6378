"""Sequential independence ladder over the first-order rows.

Row ``j`` of ``psi_1`` is rewritten in the current coordinates (the aliases
``alpha_l`` of the rows already solved plus the parameters not yet used as
pivots). When some unused parameter still occurs the row is solved for it
and becomes a new alias; otherwise it is a dependent row, an exact linear
combination of earlier aliases with coefficients in ``QQ(pi)``.
"""

from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator
from sympy.polys.rings import PolyElement

from ..errors import LadderError
from ..expansion.difference import SCHEMA, DifferenceJet
from ..trigcalc.pipoly import PI_FIELD, field_element, field_text, parameter_pi_coefficients
from ..trigcalc.rings import PARAMETER_NAMES, display_name
from ..trigcalc.serialization import decode_field, encode_field
from ..utils.logger import get_logger

logger = get_logger(__name__)

POLICIES = ("canonical", "paper")

LinearForm = Dict[str, Any]


def alias_name(index: int) -> str:
    return f"alpha{index}"


def alias_index(name: str) -> int:
    if not name.startswith("alpha"):
        raise LadderError(f"{name!r} is not an alias")
    return int(name[len("alpha") :])


def form_add(a: LinearForm, b: LinearForm, factor=None) -> LinearForm:
    """``a + factor * b`` with zero entries dropped."""
    result = dict(a)
    for key, value in b.items():
        term = value if factor is None else value * factor
        total = result.get(key, PI_FIELD.zero) + term
        if total:
            result[key] = total
        else:
            result.pop(key, None)
    return result


def form_substitute(form: LinearForm, name: str, replacement: LinearForm) -> LinearForm:
    """Replace the variable ``name`` by the linear form ``replacement``."""
    if name not in form:
        return form
    rest = {k: v for k, v in form.items() if k != name}
    return form_add(rest, replacement, form[name])


class LadderRow(BaseModel):
    """A solvable row: ``psi~_{1,j} = alpha_alias`` solved in ``symbol``."""

    j: int = Field(..., description="Power of r")
    symbol: str = Field(..., description="Pivot parameter")
    alias: int = Field(..., description="Index l of alpha_l")

    model_config = ConfigDict(frozen=True)


class Ladder(BaseModel):
    """Independence bookkeeping for one first-order difference jet."""

    system: str = Field(..., description="Case tag")
    rotation: Optional[str] = Field(default=None, description="Line parameter")
    n: int = Field(..., description="Rows examined")
    policy: str = Field(default="canonical", description="Pivot policy")
    parameters: Tuple[str, ...] = Field(..., description="Parameters taking part, in pivot order")
    rows: List[LadderRow] = Field(default_factory=list, description="Solvable rows in order")
    dependent: Dict[int, Dict[int, Any]] = Field(
        default_factory=dict, description="Row j -> {alias l: coefficient in QQ(pi)}"
    )
    expressions: Dict[str, LinearForm] = Field(
        default_factory=dict,
        description="Pivot parameter -> linear form in the aliases and the unused parameters",
    )

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @model_validator(mode="after")
    def _aliases_precede_rows(self) -> "Ladder":
        positions = {row.alias: row.j for row in self.rows}
        for j, combination in self.dependent.items():
            for alias in combination:
                if alias not in positions or positions[alias] >= j:
                    raise LadderError(f"dependent row {j} uses alpha_{alias} solved later")
        return self

    @property
    def free_count(self) -> int:
        return len(self.rows)

    @property
    def positions(self) -> List[int]:
        """Powers of r that carry a free coefficient."""
        return [row.j for row in self.rows]

    @property
    def pivots(self) -> List[str]:
        return [row.symbol for row in self.rows]

    @property
    def unused(self) -> List[str]:
        """Parameters never chosen as pivots."""
        used = set(self.pivots)
        return [p for p in self.parameters if p not in used]

    def alias_row(self, alias: int) -> int:
        for row in self.rows:
            if row.alias == alias:
                return row.j
        raise LadderError(f"alpha_{alias} does not exist (free count {self.free_count})")

    def row_form(self, j: int) -> LinearForm:
        """``psi~_{1,j}`` as a linear form in the aliases."""
        for row in self.rows:
            if row.j == j:
                return {alias_name(row.alias): PI_FIELD.one}
        if j in self.dependent:
            return {alias_name(l): c for l, c in self.dependent[j].items()}
        raise LadderError(f"row {j} is outside the ladder (n={self.n})")

    def parameter_form(self, name: str) -> LinearForm:
        """A parameter in ladder coordinates."""
        if name in self.expressions:
            return dict(self.expressions[name])
        if name in self.parameters:
            return {name: PI_FIELD.one}
        return {}

    def describe(self) -> List[str]:
        """One human-readable line per row."""
        lines = []
        for j in range(1, self.n + 1):
            solved = [row for row in self.rows if row.j == j]
            if solved:
                row = solved[0]
                lines.append(
                    f"psi~1,{j} = alpha{row.alias}  (solved in {display_name(row.symbol)})"
                )
                continue
            terms = [
                f"({field_text(c)})*alpha{l}" for l, c in sorted(self.dependent.get(j, {}).items())
            ]
            lines.append(f"psi~1,{j} = " + (" + ".join(terms) if terms else "0"))
        return lines

    def to_record(self) -> Dict[str, Any]:
        return {
            "schema": SCHEMA,
            "system": self.system,
            "rotation": self.rotation,
            "n": self.n,
            "policy": self.policy,
            "parameters": list(self.parameters),
            "rows": [row.model_dump() for row in self.rows],
            "dependent": {
                str(j): {str(l): encode_field(c) for l, c in sorted(combo.items())}
                for j, combo in sorted(self.dependent.items())
            },
            "expressions": {
                p: {k: encode_field(v) for k, v in sorted(form.items())}
                for p, form in self.expressions.items()
            },
        }

    @classmethod
    def from_record(cls, record: Mapping[str, Any]) -> "Ladder":
        if record.get("schema") != SCHEMA:
            raise LadderError(f"unsupported ladder schema {record.get('schema')!r}")
        return cls(
            system=record["system"],
            rotation=record.get("rotation"),
            n=int(record["n"]),
            policy=record.get("policy", "canonical"),
            parameters=tuple(record["parameters"]),
            rows=[LadderRow(**row) for row in record["rows"]],
            dependent={
                int(j): {int(l): decode_field(c) for l, c in combo.items()}
                for j, combo in record["dependent"].items()
            },
            expressions={
                p: {k: decode_field(v) for k, v in form.items()}
                for p, form in record["expressions"].items()
            },
        )


def row_in_coordinates(row: PolyElement, expressions: Mapping[str, LinearForm]) -> LinearForm:
    """Rewrite a linear kernel row in the current ladder coordinates."""
    form: LinearForm = {}
    for name, coefficient in parameter_pi_coefficients(row).items():
        image = expressions.get(name, {name: PI_FIELD.one})
        form = form_add(form, image, field_element(coefficient))
    return form


def independence_ladder(
    jet: DifferenceJet,
    policy: str = "canonical",
    pivots: Optional[Sequence[str]] = None,
    n: Optional[int] = None,
) -> Ladder:
    """Solve ``psi~_{1,j} = alpha_j`` row by row.

    ``canonical`` takes the first unused parameter with a non-zero coefficient
    in ``PARAMETER_NAMES`` order; ``paper`` consumes ``pivots`` in sequence and
    fails when the forced pivot is absent from an independent row.
    """
    if policy not in POLICIES:
        raise LadderError(f"unknown pivot policy {policy!r}; expected one of {POLICIES}")
    if policy == "paper" and not pivots:
        raise LadderError("policy 'paper' needs an explicit pivot sequence")
    if 1 not in jet.psi:
        raise LadderError(f"jet of {jet.system} has no first-order row")
    n = jet.n if n is None else n
    if not 1 <= n <= jet.n:
        raise LadderError(f"ladder length {n} outside 1..{jet.n}")

    parameters = tuple(p for p in PARAMETER_NAMES if p not in set(jet.zeroed))
    forced = list(pivots or [])
    unknown = [p for p in forced if p not in parameters]
    if unknown:
        raise LadderError(f"pivots {unknown} are not free parameters of {jet.system}")

    unused = list(parameters)
    expressions: Dict[str, LinearForm] = {}
    rows: List[LadderRow] = []
    dependent: Dict[int, Dict[int, Any]] = {}

    for j in range(1, n + 1):
        form = row_in_coordinates(jet.coefficient(1, j), expressions)
        candidates = [p for p in unused if p in form]
        if not candidates:
            dependent[j] = {alias_index(k): v for k, v in form.items()}
            logger.debug("Dependent row", system=jet.system, j=j, terms=len(form))
            continue
        if policy == "paper":
            if not forced:
                raise LadderError(
                    f"row {j} of {jet.system} is independent but the pivot sequence is exhausted"
                )
            pivot = forced.pop(0)
            if pivot not in form:
                raise LadderError(
                    f"row {j} of {jet.system} cannot be solved in {display_name(pivot)}"
                )
        else:
            pivot = candidates[0]

        alias = len(rows) + 1
        inverse = PI_FIELD.one / form[pivot]
        solution: LinearForm = {alias_name(alias): inverse}
        solution = form_add(
            solution, {k: v for k, v in form.items() if k != pivot}, -inverse
        )
        expressions = {p: form_substitute(e, pivot, solution) for p, e in expressions.items()}
        expressions[pivot] = solution
        unused.remove(pivot)
        rows.append(LadderRow(j=j, symbol=pivot, alias=alias))
        logger.debug("Row solved", system=jet.system, j=j, pivot=pivot, alias=alias)

    ladder = Ladder(
        system=jet.system,
        rotation=jet.rotation,
        n=n,
        policy=policy,
        parameters=parameters,
        rows=rows,
        dependent=dependent,
        expressions=expressions,
    )
    logger.info(
        "Independence ladder built",
        system=jet.system,
        rotation=jet.rotation,
        policy=policy,
        free=ladder.free_count,
        positions=ladder.positions,
    )
    return ladder


def verify_ladder(ladder: Ladder, jet: DifferenceJet) -> None:
    """Re-substitute the pivot expressions into every row and compare exactly."""
    for j in range(1, ladder.n + 1):
        form = row_in_coordinates(jet.coefficient(1, j), ladder.expressions)
        expected = ladder.row_form(j)
        if form_add(form, expected, -PI_FIELD.one):
            raise LadderError(f"row {j} of {ladder.system} does not match its ladder form")
