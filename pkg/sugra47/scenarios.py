"""
Scenario documents: loading, validation against the packaged schema, building
the geometry they describe and running their tasks into a report.
"""

import json
import logging
import os
from dataclasses import dataclass, field as dataclass_field
from enum import IntEnum
from importlib.resources import files
from typing import Callable, Dict, List, Mapping, Optional

from jsonschema import validate

from .dga import CoframeDGA, lie_from_dga
from .errors import InexactScalarError, StructuralError
from .exterior import form_from_json
from .g2 import OrbitClass, classify, induced_metric
from .homogeneous import (
    InvariantMetric,
    ReductiveSpace,
    einstein_constant,
    metric_from_bilinear,
    reductive_split,
    ricci,
)
from .lie import LieAlgebraData
from .models import (
    HomogeneousModel,
    cp2xs3_space,
    hyperbolic_space,
    hyperbolic_times_sphere_space,
    s3xt4_space,
    so7_g2_space,
    so8_so7_space,
    su2_group_space,
    torus_space,
)
from .scalars import EXACT, Field, Mode, format_scalar
from .sugra import (
    Flag,
    SpecialFormCandidate,
    maxwell_fit,
    normalize,
    solve_maxwell,
    special_form_residual,
    verify_background,
)
from .utils import read_yaml

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
DEFAULT_TOLERANCE = 1e-9

schema_text = files("sugra47").joinpath("scenario-schema.json").read_text()
SCHEMA = read_yaml(schema_text)

BUILTIN_MODELS: Dict[str, Callable[..., HomogeneousModel]] = {
    "so7-g2": so7_g2_space,
    "cp2xs3": cp2xs3_space,
    "s3xt4": s3xt4_space,
    "torus": torus_space,
    "h3xs4": hyperbolic_times_sphere_space,
    "so8-so7": so8_so7_space,
    "su2": su2_group_space,
    "hyperbolic": hyperbolic_space,
}


class ExitCode(IntEnum):
    OK = 0
    FAILED = 1
    EINSTEIN_FAILED = 2
    STRUCTURAL = 3


@dataclass
class Report:
    """Results of one scenario or demo, keyed by task."""

    name: str
    mode: Mode
    results: Dict[str, object] = dataclass_field(default_factory=dict)
    flags: List[str] = dataclass_field(default_factory=list)
    maxwell_failed: bool = False
    einstein_failed: bool = False
    check_failed: bool = False

    @property
    def exit_code(self) -> ExitCode:
        if self.maxwell_failed or self.check_failed:
            return ExitCode.FAILED
        if self.einstein_failed:
            return ExitCode.EINSTEIN_FAILED
        return ExitCode.OK

    def flag(self, flag: str) -> None:
        if flag not in self.flags:
            self.flags.append(flag)

    def check(self, name: str, passed: bool) -> None:
        """Record a named yes/no check; a failed one makes the run fail."""
        self.results.setdefault("checks", {})[name] = bool(passed)
        if not passed:
            logger.warning("Check '%s' failed on '%s'", name, self.name)
            self.check_failed = True

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "mode": self.mode.value,
            "flags": sorted(self.flags),
            "exit_code": int(self.exit_code),
            "results": self.results,
        }


def field_for(mode: Mode, tolerance: Optional[float] = None) -> Field:
    if mode is Mode.EXACT:
        return EXACT
    return Field.floating(tolerance or DEFAULT_TOLERANCE)


def run_with_fallback(run: Callable[[Field], Report], field: Field, name: str) -> Report:
    """Run in the given arithmetic; an exact run needing an irrational number is redone in float mode."""
    try:
        return run(field)
    except InexactScalarError as exception:
        if not field.exact:
            raise
        logger.warning("'%s' needs irrational numbers, running it again in float mode", name)
        logger.debug(exception)
        report = run(Field.floating(DEFAULT_TOLERANCE))
        report.flag(Flag.DEGRADED.value)
        return report


def parse_scenario(text: str, yaml: bool = False) -> dict:
    """Parse and validate a scenario.

    Raises:
        json.JSONDecodeError: if the JSON is malformed.
        jsonschema.ValidationError: if the document does not follow the schema.
    """
    data = read_yaml(text) if yaml else json.loads(text)
    validate(data, SCHEMA)
    return data


def load_scenario(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as file:
        text = file.read()
    return parse_scenario(text, yaml=os.path.splitext(path)[1] in (".yml", ".yaml"))


def _vectors(data, field: Field) -> List[list]:
    return [[field.convert(x) for x in vector] for vector in data]


def build_space(scenario: Mapping, field: Field) -> ReductiveSpace:
    """The reductive space of a scenario given by a Lie algebra or a coframe algebra."""
    name = scenario["name"]
    if "lie_algebra" in scenario:
        algebra = LieAlgebraData.from_json(scenario["lie_algebra"], field)
        h = _vectors(scenario["h"], field)
        m = scenario["m"]
        if isinstance(m, str):
            return reductive_split(algebra, h, m.split("-")[0], scenario.get("m_labels"), name)
        return ReductiveSpace(algebra, h, _vectors(m, field), scenario.get("m_labels"), name)
    dga = CoframeDGA.from_json(scenario["coframe_dga"], field)
    dga.validate()
    algebra = lie_from_dga(dga)
    labels = [dga.frame.label(i) for i in range(1, dga.frame.n + 1)]
    isotropy = list(scenario["coframe_dga"].get("isotropy", []))
    unknown = [label for label in isotropy if label not in labels]
    if unknown:
        raise StructuralError(f"Unknown isotropy generators {', '.join(unknown)}")
    units = [[field.convert(int(i == j)) for i in range(dga.frame.n)] for j in range(dga.frame.n)]
    h = [units[labels.index(label)] for label in isotropy]
    m_indices = [i for i, label in enumerate(labels) if label not in isotropy]
    return ReductiveSpace(algebra, h, [units[i] for i in m_indices], [labels[i] for i in m_indices], name)


def build_metric(data, space: ReductiveSpace, field: Field) -> InvariantMetric:
    if data is None or data == "identity":
        return InvariantMetric.identity(space.dm)
    if "diagonal" in data:
        return InvariantMetric.diagonal([field.convert(x) for x in data["diagonal"]])
    if "matrix" in data:
        return InvariantMetric.from_matrix(_vectors(data["matrix"], field))
    return metric_from_bilinear(space, data["bilinear"], field.convert(data.get("scale", -1)))


def build_model(scenario: Mapping, field: Field) -> HomogeneousModel:
    if "model" in scenario:
        model = scenario["model"]
        parameters = dict(model.get("parameters", {}))
        try:
            return BUILTIN_MODELS[model["name"]](field=field, **parameters)
        except TypeError as exception:
            logger.error("Bad parameters %s for the model '%s'", parameters, model["name"])
            raise StructuralError(f"Bad model parameters: {exception}") from exception
    space = build_space(scenario, field)
    return HomogeneousModel(space.name, space, build_metric(scenario.get("metric"), space, field))


def _ricci_result(space: ReductiveSpace, field: Field) -> dict:
    ric = ricci(space)
    constant = einstein_constant(ric, InvariantMetric.identity(space.dm), field)
    return {
        "matrix": [[format_scalar(x) for x in row] for row in ric],
        "einstein_constant": format_scalar(constant) if constant is not None else None,
    }


def _classify_result(phi, field: Field) -> dict:
    classification = classify(phi, field)
    result = classification.to_json()
    if field.exact and classification.orbit is not OrbitClass.DEGENERATE:
        try:
            metric = induced_metric(phi, field)
            result["metric"] = [[format_scalar(x) for x in row] for row in metric.g]
        except InexactScalarError as exception:
            logger.debug(exception)
    return result


def evaluate(scenario: Mapping, field: Field) -> Report:
    """Run the tasks of a validated scenario with the given arithmetic."""
    name = scenario["name"]
    report = Report(name, field.mode)
    model = build_model(scenario, field)
    space = model.orthonormal()
    tasks = scenario["tasks"]

    candidate = None
    forms = scenario.get("forms")
    if forms is not None:
        phi = form_from_json(space.frame, forms["phi"], field)
        orientation = forms.get("orientation", 1)
        if "f" in forms:
            f = field.convert(forms["f"])
        else:
            f = maxwell_fit(SpecialFormCandidate(space, phi, field.convert(0), orientation, name)).f
            report.results["fitted_f"] = format_scalar(f)
        candidate = SpecialFormCandidate(space, phi, f, orientation, name)
        if forms.get("normalize"):
            normalized = normalize(candidate)
            candidate = normalized.candidate
            report.results["normalized"] = {
                "f": format_scalar(candidate.f),
                "scale": format_scalar(normalized.scale) if normalized.scale is not None else None,
                "orientation_flipped": normalized.orientation_flipped,
            }

    if "ricci" in tasks:
        report.results["ricci"] = _ricci_result(candidate.space if candidate else space, field)

    if "classify" in tasks:
        if candidate is None:
            raise StructuralError("The classify task needs forms.phi")
        report.results["classify"] = _classify_result(candidate.phi, field)

    solution = None
    if "solve-maxwell" in tasks or ("verify" in tasks and candidate is None):
        solution = solve_maxwell(space)
        if solution.complex_count:
            report.flag(Flag.COMPLEX_DISCARDED.value)
        branch_residuals = []
        for branch in solution.branches:
            for phi in branch.forms:
                residuals = special_form_residual(SpecialFormCandidate(space, phi, branch.f))
                branch_residuals.append(residuals)
                if not residuals.vanish(field):
                    report.maxwell_failed = True
        result = solution.to_json()
        result["branch_residuals"] = [
            {"closure": format_scalar(r.closure), "maxwell": format_scalar(r.maxwell)} for r in branch_residuals
        ]
        if candidate is not None:
            residuals = special_form_residual(candidate)
            result["candidate"] = {
                "f": format_scalar(candidate.f),
                "closure": format_scalar(residuals.closure),
                "maxwell": format_scalar(residuals.maxwell),
            }
            if not residuals.vanish(field):
                report.maxwell_failed = True
        if "solve-maxwell" in tasks:
            report.results["solve-maxwell"] = result

    if "verify" in tasks:
        if candidate is not None:
            candidates = [candidate]
        else:
            candidates = [
                SpecialFormCandidate(space, phi, branch.f, 1, f"{name} (f={format_scalar(branch.f)})")
                for branch in solution.branches
                for phi in branch.forms
            ]
        declared = forms.get("lorentz_constant") if forms else None
        backgrounds = []
        for item in candidates:
            background = verify_background(item, declared)
            backgrounds.append(background)
            if not background.maxwell_ok:
                report.maxwell_failed = True
            elif not background.einstein_ok:
                report.einstein_failed = True
            for flag in background.flags:
                report.flag(flag.value)
        report.results["verify"] = [background.to_json() for background in backgrounds]
    return report


def run_scenario(scenario: Mapping, mode: Optional[str] = None, tolerance: Optional[float] = None) -> Report:
    """Run a validated scenario; the command-line mode and tolerance override the document's."""
    mode = Mode(mode or scenario.get("mode", Mode.EXACT.value))
    tolerance = tolerance or scenario.get("tolerance", DEFAULT_TOLERANCE)
    logger.info("Running scenario '%s' in %s mode", scenario["name"], mode.value)
    return run_with_fallback(lambda field: evaluate(scenario, field), field_for(mode, tolerance), scenario["name"])
