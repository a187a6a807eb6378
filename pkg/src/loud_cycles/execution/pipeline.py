"""Stage orchestration: expand, ladder, blow-up, count and the numeric checks."""

import json
from fractions import Fraction
from multiprocessing import Pool
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, TypeVar

import mpmath
import pandas as pd
from dotenv import dotenv_values
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from ..analysis.blowup import HSystem, blowup_reduce
from ..analysis.cases import CASES, CaseData, case_count, case_data
from ..analysis.construction import ZeroConstruction, alternating_zeros
from ..analysis.counting import CycleCountReport, first_order_count
from ..analysis.hsystem import HSolution, solve_h_system
from ..analysis.ladder import Ladder, independence_ladder, verify_ladder
from ..centercheck.sigma import is_piecewise_center
from ..config.settings import settings
from ..errors import LoudCyclesError, StageError, SystemDefinitionError
from ..expansion.difference import (
    DifferenceJet,
    difference,
    epsilon_absorb,
    published_convention,
)
from ..expansion.jets import expand
from ..models.records import RunReport, StageRecord
from ..models.run import RunConfig
from ..numeric.checks import closure_sweep
from ..numeric.displacement import epsilon_scaling, locate_cycles, oracle_sweep
from ..numeric.flow import NumericParams, PiecewiseField
from ..numeric.pseudo_hopf import pseudo_hopf_demo
from ..systems.piecewise import make_case, resolve_case
from ..utils.logger import get_logger, run_context
from .cache import ArtifactCache, digest
from .reports import Section, markdown_table, number, report_directory, write_report
from .summary import emit_summary_table

logger = get_logger(__name__)

T = TypeVar("T")

SUMMARY_TAGS = ("s1", "s2", "s3", "s4", "s1s2")
DEFAULT_PSEUDO_HOPF_VALUES = {"ap10": 1.0, "am10": 1.0}


class Outcome(BaseModel):
    """What one command produced before it is written to disk."""

    title: str
    sections: List[Tuple[str, List[str]]] = Field(default_factory=list)
    record: Dict[str, Any] = Field(default_factory=dict)
    artifact: Optional[Dict[str, Any]] = Field(default=None, description="Content of --out")
    table: Optional[pd.DataFrame] = None
    exit_code: int = 0
    lines: List[str] = Field(default_factory=list)

    model_config = ConfigDict(arbitrary_types_allowed=True)


def case_tag(system: str) -> str:
    """Registry tag of a case name (``S1&S2`` -> ``s1s2``, ``L`` -> ``linear``)."""
    return "linear" if system == "L" else system.lower().replace("&", "")


def load_parameter_values(path: Path) -> Dict[str, float]:
    """Numeric parameter values from a JSON object or a ``name=value`` text file."""
    path = Path(path)
    try:
        if path.suffix == ".json":
            raw = json.loads(path.read_text(encoding="utf-8"))
        else:
            raw = dotenv_values(path)
        return {str(k): float(v) for k, v in raw.items()}
    except (OSError, ValueError, TypeError, AttributeError) as e:
        raise SystemDefinitionError(f"unreadable parameter file {path}: {e}") from e


def load_jet(path: Path) -> DifferenceJet:
    try:
        record = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, ValueError) as e:
        raise SystemDefinitionError(f"unreadable jet file {path}: {e}") from e
    return DifferenceJet.from_record(record)


def _nstr(value: Any, digits: int = 15) -> str:
    return mpmath.nstr(value, digits)


def _construction_record(construction: ZeroConstruction) -> Dict[str, Any]:
    return {
        "zeros": [_nstr(z) for z in construction.zeros],
        "samples": [_nstr(s) for s in construction.samples],
        "signs": list(construction.signs),
        "jet_signs": construction.jet_signs,
        "alternating": construction.alternating,
        "verified": construction.verified,
        "alphas": {str(l): _nstr(v) for l, v in sorted(construction.alphas.items())},
        "parameters": {k: _nstr(v) for k, v in sorted(construction.parameters.items()) if v},
    }


def _blowup_record(
    data: CaseData, hs: HSystem, solution: HSolution, convention: str = "taylor"
) -> Dict[str, Any]:
    return {
        "case": data.system,
        "pivot": data.blowup.pivot_name,
        "convention": convention,
        "unknowns": list(hs.unknowns),
        "terms": {str(j): len(h) for j, h in sorted(hs.functions.items())},
        "anchor": list(hs.anchor),
        "anchor_match": solution.anchor_match(data.blowup.anchor_digits),
        "certified": solution.certified,
        "certificate_required": data.certify,
        "solution": solution.to_record(),
    }


class Pipeline:
    """Runs the stages of one :class:`RunConfig` against a content-addressed cache."""

    def __init__(self, config: RunConfig) -> None:
        self.config = config
        self.cache = ArtifactCache(config.cache_dir)
        self.stages: List[StageRecord] = []

    # Stage plumbing

    def _stage(self, stage: str, contract: str, compute: Callable[[], T]) -> T:
        """Run ``compute``; typed failures become a :class:`StageError` naming the contract."""
        try:
            return compute()
        except StageError:
            raise
        except (LoudCyclesError, ValidationError) as e:
            logger.error("Stage failed", stage=stage, contract=contract, error=str(e))
            raise StageError(stage, contract, str(e)) from e

    def _cached(
        self,
        stage: str,
        inputs: Dict[str, Any],
        compute: Callable[[], T],
        contract: str,
        encode: Callable[[T], Dict[str, Any]] = lambda value: value,
        decode: Callable[[Dict[str, Any]], T] = lambda record: record,
    ) -> T:
        key = self.cache.key(stage, inputs)
        record = self.cache.load(stage, key)
        if record is not None:
            try:
                value = decode(record)
            except (LoudCyclesError, ValueError, KeyError) as e:
                logger.warning("Cached artifact rejected", stage=stage, key=key[:12], error=str(e))
            else:
                self.stages.append(StageRecord(stage=stage, key=key, cached=True))
                return value
        value = self._stage(stage, contract, compute)
        self.cache.store(stage, key, encode(value))
        self.stages.append(StageRecord(stage=stage, key=key))
        return value

    def _kernel_inputs(self) -> Dict[str, Any]:
        return {
            "theta_cap_offset": settings.theta_cap_offset,
            "harmonic_cap_factor": settings.harmonic_cap_factor,
        }

    # Symbolic stages

    def difference_jet(
        self,
        tag: str,
        tau: Fraction,
        order: int,
        n: int,
        zeroed: Sequence[str] = (),
        absorbed: bool = False,
    ) -> DifferenceJet:
        inputs = {
            "case": tag,
            "tau": str(tau),
            "order": order,
            "n": n,
            "zeroed": sorted(zeroed),
            "absorbed": absorbed,
            **self._kernel_inputs(),
        }

        def compute() -> DifferenceJet:
            jet = difference(expand(make_case(tag, tau, zeroed=zeroed), order, n), zeroed=list(zeroed))
            return epsilon_absorb(jet) if absorbed else jet

        return self._cached(
            "expand",
            inputs,
            compute,
            "psi_0 vanishes and psi_i is homogeneous of degree i",
            encode=lambda jet: jet.to_record(),
            decode=DifferenceJet.from_record,
        )

    def input_jet(self, order: int) -> DifferenceJet:
        """The ``--jet`` file when given, otherwise the expansion of the configured case."""
        if self.config.jet is not None:
            return self._stage("expand", "a readable serialized jet", lambda: load_jet(self.config.jet))
        return self.difference_jet(self.config.case, self.config.tau, order, self.config.n)

    def paper_pivots(self, system: str) -> Tuple[str, ...]:
        data = self._stage("ladder", "a published pivot sequence", lambda: case_data(system))
        if not data.pivots:
            raise StageError("ladder", "a published pivot sequence", f"none recorded for {system}")
        return data.pivots

    def ladder(
        self, jet: DifferenceJet, policy: str, pivots: Optional[Sequence[str]] = None
    ) -> Ladder:
        if policy == "paper" and pivots is None:
            pivots = self.paper_pivots(jet.system)
        inputs = {"jet": digest(jet.to_record()), "policy": policy, "pivots": list(pivots or [])}

        def compute() -> Ladder:
            ladder = independence_ladder(jet, policy=policy, pivots=pivots)
            verify_ladder(ladder, jet)
            return ladder

        return self._cached(
            "ladder",
            inputs,
            compute,
            "dependent rows reproduce the solved-parameter expressions exactly",
            encode=lambda ladder: ladder.to_record(),
            decode=Ladder.from_record,
        )

    def blowup(
        self, data: CaseData, jet: Optional[DifferenceJet] = None, convention: str = "taylor"
    ) -> Tuple[Ladder, HSystem, HSolution]:
        """Order-2 tilde jet, published-pivot ladder, h-system and its certified root.

        ``convention="published"`` solves the rows with the published second-order
        display, the form the recorded anchors belong to.
        """
        spec = data.blowup
        if spec is None:
            raise StageError("blowup", "blow-up data for the case", f"none recorded for {data.system}")
        if jet is None:
            jet = self.difference_jet(
                data.tag, data.tau, 2, spec.n, zeroed=spec.zeroed, absorbed=True
            )
        elif not jet.absorbed:
            jet = epsilon_absorb(jet)
        if convention == "published":
            jet = self._stage(
                "blowup",
                "a published second-order display for the case",
                lambda: published_convention(jet),
            )
        ladder = self.ladder(jet, "paper", data.pivots)
        hs = self._stage(
            "blowup",
            "blown-up rows divisible by the declared pivot powers",
            lambda: blowup_reduce(jet, ladder, spec)[0],
        )
        solution = self._stage(
            "solve",
            "Newton residual and transversality certificates",
            lambda: solve_h_system(hs, precision=self.config.precision, certify=data.certify),
        )
        return ladder, hs, solution

    def counts(self, tag: str, tau: Fraction, order: int) -> Dict[str, Any]:
        """First-order count, designed zeros and, at order 2, the per-case second-order count."""
        cfg = self.config
        inputs = {
            "case": tag,
            "tau": str(tau),
            "order": order,
            "n": cfg.n,
            "policy": cfg.policy,
            "precision": cfg.precision,
            "r0": str(cfg.r0),
            **self._kernel_inputs(),
        }
        return self._cached(
            "count",
            inputs,
            lambda: self._compute_counts(tag, tau, order),
            "every certificate of the counting rule is present",
        )

    def _compute_counts(self, tag: str, tau: Fraction, order: int) -> Dict[str, Any]:
        cfg = self.config
        jet = self.difference_jet(tag, tau, 1, cfg.n)
        ladder = self.ladder(jet, cfg.policy)
        first = self._stage("count", "at least one free coefficient", lambda: first_order_count(ladder))
        record: Dict[str, Any] = {
            "case": tag,
            "system": jet.system,
            "tau": str(tau),
            "order": order,
            "ladder": ladder.describe(),
            "first": first.model_dump(mode="json"),
            "second": None,
            "construction": None,
            "blowup": None,
        }
        if ladder.free_count >= 2:
            construction = self._stage(
                "construction",
                "designed zeros alternate in sign",
                lambda: alternating_zeros(ladder, cfg.r0, jet=jet),
            )
            record["construction"] = _construction_record(construction)
        if order == 2:
            second, blowup = self._second_order(tag, tau, ladder)
            record["second"] = second.model_dump(mode="json")
            record["blowup"] = blowup
        return record

    def _second_order(
        self, tag: str, tau: Fraction, first_ladder: Ladder
    ) -> Tuple[CycleCountReport, Optional[Dict[str, Any]]]:
        data = self._stage("count", "second-order data for the case", lambda: case_data(tag))
        if tau != data.tau:
            raise StageError(
                "count", f"second-order analysis defined at tau = {data.tau}", f"got tau = {tau}"
            )
        blowup = None
        if data.blowup is not None and data.rule == "blowup":
            ladder, hs, solution = self.blowup(data)
            blowup = _blowup_record(data, hs, solution)
            report = self._stage(
                "count", "certified h-system root", lambda: case_count(data, ladder, solution)
            )
            return report, blowup
        if data.blowup is not None:
            # The count does not rest on this blow-up; a failure is recorded, not raised.
            try:
                _, hs, solution = self.blowup(data)
                blowup = _blowup_record(data, hs, solution)
            except StageError as e:
                logger.warning("Blow-up skipped", case=data.system, error=str(e))
                blowup = {"case": data.system, "error": str(e)}
        ladder = first_ladder
        if ladder.n < data.min_n:
            ladder = self.ladder(self.difference_jet(tag, tau, 1, data.min_n), self.config.policy)
        report = self._stage("count", "counting rule applicable", lambda: case_count(data, ladder))
        return report, blowup

    # Numeric stages

    def numeric_field(
        self, system: str, tau: Fraction, values: Dict[str, float], eps: float
    ) -> PiecewiseField:
        return self._stage(
            "verify-numeric",
            "numeric parameters valid for the case and line",
            lambda: PiecewiseField.from_case(
                case_tag(system), NumericParams(values=values, eps=eps, tau=tau)
            ),
        )

    # Commands

    def run(self) -> Outcome:
        handler = getattr(self, "command_" + self.config.command.replace("-", "_"))
        logger.info("Command started", case=self.config.case, tau=str(self.config.tau))
        outcome = handler()
        logger.info("Command finished", exit_code=outcome.exit_code, stages=len(self.stages))
        return outcome

    def command_expand(self) -> Outcome:
        cfg = self.config
        jet = self.difference_jet(cfg.case, cfg.tau, cfg.expansion_order, cfg.n)
        sections: List[Section] = []
        for i in range(1, jet.order + 1):
            if i == 1:
                body = [f"- psi_1,{j} = {c}" for j, c in enumerate(jet.row(1), start=1)]
            else:
                body = [f"- psi_{i},{j}: {len(c)} terms" for j, c in enumerate(jet.row(i), start=1)]
            sections.append((f"Order {i}", body))
        record = jet.to_record()
        return Outcome(
            title=f"Difference jet of {jet.system} at tau = {jet.rotation}",
            sections=sections,
            record={"jet": record},
            artifact=record,
            lines=[f"{jet.system} tau={jet.rotation} order={jet.order} N={jet.n}"],
        )

    def command_ladder(self) -> Outcome:
        cfg = self.config
        jet = self.input_jet(1)
        ladder = self.ladder(jet, cfg.policy)
        count = self._stage("count", "at least one free coefficient", lambda: first_order_count(ladder))
        record = ladder.to_record()
        return Outcome(
            title=f"Independence ladder of {ladder.system} at tau = {ladder.rotation}",
            sections=[("Rows", ladder.describe()), ("Count", [count.line()])],
            record={"ladder": record, "count": count.model_dump(mode="json")},
            artifact=record,
            lines=[*ladder.describe(), count.line()],
        )

    def command_blowup(self) -> Outcome:
        cfg = self.config
        data = self._stage("blowup", "blow-up data for the case", lambda: case_data(cfg.case))
        jet = self.input_jet(2) if cfg.jet is not None else None

        def compute() -> Dict[str, Any]:
            _, hs, solution = self.blowup(data, jet, cfg.convention)
            return _blowup_record(data, hs, solution, cfg.convention)

        inputs = {
            "case": data.tag,
            "convention": cfg.convention,
            "jet": digest(jet.to_record()) if jet is not None else None,
            "precision": cfg.precision,
            **self._kernel_inputs(),
        }
        record = self._cached("blowup-report", inputs, compute, "certified h-system root")
        solution = record["solution"]
        body = [f"- {name} = {value}" for name, value in solution["solution"].items()]
        body += [
            f"- residual = {number(solution['residual'])}",
            f"- scaled determinant = {number(solution['scaled_determinant'])}",
            f"- check value = {solution['check_value']}",
            f"- certified = {record['certified']}",
            f"- anchors reproduced to {data.blowup.anchor_digits} digits = {record['anchor_match']}",
        ]
        deviation = [f"- {k}: {number(v)}" for k, v in solution["anchor_deviation"].items()]
        return Outcome(
            title=f"Blow-up of {data.system} at tau = {data.tau} ({cfg.convention} rows)",
            sections=[("Solution", body), ("Relative deviation from the published values", deviation)],
            record={"blowup": record},
            artifact=record,
            lines=body,
        )

    def command_count(self) -> Outcome:
        cfg = self.config
        record = self.counts(cfg.case, cfg.tau, cfg.expansion_order)
        first = CycleCountReport.model_validate(record["first"])
        lines = [first.line()]
        if record["second"] is not None:
            lines.append(CycleCountReport.model_validate(record["second"]).line())
        sections: List[Section] = [("Counts", lines), ("Ladder", record["ladder"])]
        if record["construction"] is not None:
            construction = record["construction"]
            sections.append(
                (
                    "Designed zeros",
                    [f"- zeros: {', '.join(construction['zeros'])}",
                     f"- signs at separating points: {construction['signs']}",
                     f"- verified: {construction['verified']}"],
                )
            )
        return Outcome(
            title=f"Cycle count of {record['system']} at tau = {record['tau']}",
            sections=sections,
            record={"count": record},
            artifact=record,
            lines=lines,
        )

    def command_table(self) -> Outcome:
        cfg = self.config
        tasks = [(cfg, tag) for tag in SUMMARY_TAGS]
        if cfg.workers > 1:
            with Pool(processes=min(cfg.workers, len(tasks))) as pool:
                results = pool.map(_case_counts, tasks)
        else:
            results = [_case_counts(task) for task in tasks]

        reports, errors = {}, {}
        for tag, record, error in results:
            if record is None:
                errors[tag] = error
                continue
            first = CycleCountReport.model_validate(record["first"])
            second = CycleCountReport.model_validate(record["second"])
            reports[first.system] = (first, second)
        table = emit_summary_table(reports)
        body = table.lines()
        if errors:
            body += ["", *(f"Failed: {tag}: {error}" for tag, error in sorted(errors.items()))]
        return Outcome(
            title="Crossing limit cycles at tau = 1/2",
            sections=[("Summary", body)],
            record={
                "rows": [row.model_dump(mode="json") for row in table.rows],
                "missing": table.missing,
                "mismatches": table.mismatches,
                "errors": errors,
            },
            exit_code=0 if table.ok else 1,
            lines=body,
        )

    def command_verify_numeric(self) -> Outcome:
        cfg = self.config
        jet = self.input_jet(cfg.expansion_order)
        values = self._stage(
            "verify-numeric", "a name=value parameter file", lambda: load_parameter_values(cfg.params)
        )
        if jet.rotation in (None, "symbolic"):
            raise StageError("verify-numeric", "a jet at a concrete line parameter", "symbolic rotation")
        field = self.numeric_field(jet.system, Fraction(jet.rotation), values, cfg.eps)
        contract = "transversal half-returns inside the escape radius"
        table = self._stage("verify-numeric", contract, lambda: oracle_sweep(field, jet, cfg.radii, cfg.workers))
        scaling = self._stage(
            "verify-numeric", contract, lambda: epsilon_scaling(field, jet, cfg.r_check)
        )
        zeros = self._stage("verify-numeric", contract, lambda: locate_cycles(field, cfg.radii, cfg.workers))
        body = [
            f"- eps = {number(cfg.eps)}, grid = {cfg.grid}",
            f"- largest |residual| = {number(float(table['residual'].abs().max()))}",
            f"- epsilon-scaling slope at r = {number(cfg.r_check)}: {number(scaling.slope)}",
            f"- located zeros: {', '.join(number(z.r) for z in zeros) or 'none'}",
        ]
        return Outcome(
            title=f"Numeric check of {jet.system} at tau = {jet.rotation}",
            sections=[("Summary", body), ("Samples", markdown_table(table))],
            record={
                "system": jet.system,
                "tau": jet.rotation,
                "eps": cfg.eps,
                "grid": cfg.grid,
                "scaling": scaling.model_dump(),
                "zeros": [z.model_dump() for z in zeros],
            },
            table=table,
            lines=body,
        )

    def command_center_check(self) -> Outcome:
        cfg = self.config
        plus, minus = (cfg.plus, cfg.minus) if cfg.plus else resolve_case(cfg.case)
        verdict = self._stage(
            "center-check",
            "landing series of both halves computable to the requested order",
            lambda: is_piecewise_center(plus, minus, cfg.tau, cfg.series_order),
        )
        record: Dict[str, Any] = {
            "plus": plus,
            "minus": minus,
            "tau": str(cfg.tau),
            "order": cfg.series_order,
            "verdict": verdict.verdict,
            "first_difference": verdict.first_difference,
        }
        body = [f"- verdict: {verdict.verdict}"]
        if verdict.first_difference is not None:
            body.append(f"- landing series first differ at lambda^{verdict.first_difference}")
        exit_code = 0
        if cfg.numeric and verdict.is_center:
            r_max = 0.08 if "S3" in (plus, minus) else 0.15
            closure = self._stage(
                "center-check",
                "numeric full turns close for an accepted center",
                lambda: closure_sweep(plus, minus, count=5, r_max=r_max, seed=cfg.seed, taus=[cfg.tau]),
            )
            record["closure"] = {
                "worst": closure.worst,
                "tolerance": closure.tolerance,
                "closed": closure.closed,
                "samples": [list(s) for s in closure.samples],
            }
            body.append(f"- numeric closure: worst {number(closure.worst)} (closed={closure.closed})")
            exit_code = 0 if closure.closed else 1
        return Outcome(
            title=f"Center check of {plus}/{minus} at tau = {cfg.tau}",
            sections=[("Verdict", body)],
            record={"center": record},
            artifact=record,
            exit_code=exit_code,
            lines=body,
        )

    def command_pseudo_hopf(self) -> Outcome:
        cfg = self.config
        values = (
            self._stage("pseudo-hopf", "a name=value parameter file", lambda: load_parameter_values(cfg.params))
            if cfg.params is not None
            else dict(DEFAULT_PSEUDO_HOPF_VALUES)
        )
        field = self.numeric_field(cfg.case, cfg.tau, values, cfg.eps)
        report = self._stage(
            "pseudo-hopf",
            "the new cycle stays inside the validated neighbourhood",
            lambda: pseudo_hopf_demo(field, cfg.b, workers=cfg.workers),
        )
        lines = report.lines()
        return Outcome(
            title=f"Pseudo-Hopf run of {report.system}",
            sections=[("Summary", [f"- {line}" for line in lines])],
            record={"pseudo_hopf": report.model_dump(mode="json"), "values": values},
            artifact=report.model_dump(mode="json"),
            lines=lines,
        )


def _case_counts(task: Tuple[RunConfig, str]) -> Tuple[str, Optional[Dict[str, Any]], Optional[str]]:
    """Second-order counts of one summary case; failures become a missing row."""
    config, tag = task
    try:
        return tag, Pipeline(config).counts(tag, CASES[tag].tau, 2), None
    except LoudCyclesError as e:
        logger.error("Summary case failed", case=tag, error=str(e))
        return tag, None, str(e)


def run_pipeline(config: RunConfig) -> RunReport:
    """Run one command, write its report directory and return the exit status.

    Stage failures raise :class:`StageError` before anything is written.
    """
    pipeline = Pipeline(config)
    with run_context(command=config.command, config=config.config_hash):
        outcome = pipeline.run()
    directory = report_directory(config.results_directory, config.command, config.config_hash)
    record = {
        "command": config.command,
        "config": json.loads(config.canonical()),
        "exit_code": outcome.exit_code,
        **outcome.record,
    }
    write_report(
        directory,
        outcome.title,
        outcome.sections,
        record,
        table=outcome.table,
        display_plot=config.display_plot,
    )
    if config.out is not None:
        config.out.parent.mkdir(parents=True, exist_ok=True)
        artifact = outcome.artifact if outcome.artifact is not None else record
        config.out.write_text(json.dumps(artifact, sort_keys=True, indent=1), encoding="utf-8")
        logger.info("Artifact written", path=str(config.out))
    return RunReport(
        command=config.command,
        config_hash=config.config_hash,
        exit_code=outcome.exit_code,
        directory=directory,
        stages=pipeline.stages,
        record=record,
        lines=outcome.lines,
    )
