import os
import sys
import json
import logging
import click
from jsonschema import ValidationError
from ruamel.yaml.error import YAMLError
from .param_types import Tolerance
from .demos import DEMOS
from .errors import Sugra47Error, StructuralError
from .exterior import Frame, form_from_json
from .g2 import OrbitClass, classify, induced_metric
from .scalars import Mode, format_scalar
from .scenarios import (
    DEFAULT_TOLERANCE,
    ExitCode,
    Report,
    field_for,
    load_scenario,
    run_scenario,
    run_with_fallback,
)
from . import utils

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

# See https://click.palletsprojects.com/en/8.1.x/documentation/#help-texts
CONTEXT_SETTINGS = {"help_option_names": ["-h", "--help"]}


def common_options(command):
    """Options shared by every subcommand that produces a report."""
    command = click.option(
        "--report",
        "-r",
        "report_format",
        help="The format of the report. "
        "By default, text when written to the standard output and json when written to a file.",
        type=click.Choice(["json", "text"]),
    )(command)
    command = click.option(
        "--out",
        "-o",
        help="The file where the report will be stored. "
        "By default, the report will be written to the standard output.",
        type=click.Path(exists=False, file_okay=True, dir_okay=False, writable=True),
    )(command)
    command = click.option(
        "--tolerance",
        "-t",
        help=f"Absolute tolerance of float mode comparisons (default {DEFAULT_TOLERANCE}).",
        type=Tolerance(),
    )(command)
    command = click.option(
        "--mode",
        "-m",
        help="Exact rational arithmetic or floating point. "
        "By default, the mode of the scenario, or exact.",
        type=click.Choice([mode.value for mode in Mode]),
    )(command)
    return command


def emit(report: Report, out, report_format):
    """Write the report and leave with its exit code."""
    data = report.to_json()
    report_format = report_format or ("json" if out else "text")
    writer = utils.write_json if report_format == "json" else utils.write_text
    if out:
        parent = os.path.dirname(out)
        if parent != "":
            os.makedirs(parent, exist_ok=True)
        with open(out, "w", encoding="utf-8") as file:
            writer(data, file)
    else:
        writer(data, sys.stdout)
    sys.exit(int(report.exit_code))


def run_file(path, task, mode, tolerance, out, report_format):
    try:
        scenario = load_scenario(path)
        scenario["tasks"] = [task]
        report = run_scenario(scenario, mode, tolerance)
    except json.JSONDecodeError as exception:
        logger.error(
            "Could not parse '%s': %s at line %d, column %d",
            path,
            exception.msg,
            exception.lineno,
            exception.colno,
        )
        logger.debug(exception)
        sys.exit(int(ExitCode.STRUCTURAL))
    except YAMLError as exception:
        logger.error("Could not parse '%s' as YAML", path)
        logger.debug(exception)
        sys.exit(int(ExitCode.STRUCTURAL))
    except ValidationError as exception:
        location = "/".join(str(part) for part in exception.absolute_path) or "the document"
        logger.error("Invalid scenario '%s' at %s: %s", path, location, exception.message)
        logger.debug(exception)
        sys.exit(int(ExitCode.STRUCTURAL))
    except Sugra47Error as exception:
        logger.error("Could not run the scenario '%s': %s", path, exception)
        logger.debug(exception)
        sys.exit(int(ExitCode.STRUCTURAL))
    emit(report, out, report_format)


@click.group(context_settings=CONTEXT_SETTINGS)
@click.option("--verbose", "-v", help="Log debugging information.", is_flag=True)
def main(verbose):
    """Check backgrounds of eleven-dimensional supergravity of the form
    M~(3,1) x M7 with flux F = f vol + *phi, where M7 is a homogeneous space
    described by a Lie algebra or by its structure equations.

    Every subcommand writes a report to the standard output, or to the file given
    to `-o`. The exit code is 0 on success, 1 when the Maxwell equation (or a
    demo check) fails, 2 when only the Einstein equation fails and 3 on malformed
    input.

    Example of usage:
    sugra47 verify scenario.json -m exact -o report.json
    """
    if verbose:
        logging.getLogger().setLevel(logging.DEBUG)


@main.command(context_settings=CONTEXT_SETTINGS)
@common_options
@click.argument("scenario", type=click.Path(exists=True, dir_okay=False))
def verify(scenario, mode, tolerance, out, report_format):
    """Check the Maxwell, closure and Einstein equations for the forms of `SCENARIO`,
    or for every Maxwell solution when the scenario gives no forms.

    Example of usage:
    sugra47 verify so7-g2.yml -m float
    """
    run_file(scenario, "verify", mode, tolerance, out, report_format)


@main.command("solve-maxwell", context_settings=CONTEXT_SETTINGS)
@common_options
@click.argument("scenario", type=click.Path(exists=True, dir_okay=False))
def solve_maxwell(scenario, mode, tolerance, out, report_format):
    """Find every f and invariant co-closed 3-form phi with d phi = f *phi on the
    space of `SCENARIO`.

    Example of usage:
    sugra47 solve-maxwell cp2xs3.json
    """
    run_file(scenario, "solve-maxwell", mode, tolerance, out, report_format)


@main.command(context_settings=CONTEXT_SETTINGS)
@common_options
@click.argument("scenario", type=click.Path(exists=True, dir_okay=False))
def ricci(scenario, mode, tolerance, out, report_format):
    """Compute the Ricci tensor of the invariant metric of `SCENARIO` on an
    orthonormal basis.

    Example of usage:
    sugra47 ricci su2.json -r json
    """
    run_file(scenario, "ricci", mode, tolerance, out, report_format)


@main.command("classify-form", context_settings=CONTEXT_SETTINGS)
@common_options
@click.argument("form", type=click.Path(exists=True, dir_okay=False))
def classify_form(form, mode, tolerance, out, report_format):
    """Classify the 3-form on R7 stored in `FORM` ({"degree": 3, "terms": [...]}).

    Example of usage:
    sugra47 classify-form omega.json
    """
    name = os.path.basename(form)

    def run(field):
        with open(form, "r", encoding="utf-8") as file:
            data = json.load(file)
        phi = form_from_json(Frame.euclidean(7), data, field)
        if phi.degree != 3:
            raise StructuralError(f"Expected a 3-form, got degree {phi.degree}")
        classification = classify(phi, field)
        result = classification.to_json()
        if classification.orbit is not OrbitClass.DEGENERATE:
            metric = induced_metric(phi, field)
            result["metric"] = [[format_scalar(x) for x in row] for row in metric.g]
        report = Report(name, field.mode)
        report.results["classify"] = result
        return report

    try:
        report = run_with_fallback(run, field_for(Mode(mode or Mode.EXACT.value), tolerance), name)
    except json.JSONDecodeError as exception:
        logger.error(
            "Could not parse '%s': %s at line %d, column %d",
            form,
            exception.msg,
            exception.lineno,
            exception.colno,
        )
        logger.debug(exception)
        sys.exit(int(ExitCode.STRUCTURAL))
    except Sugra47Error as exception:
        logger.error("Could not classify the form in '%s': %s", form, exception)
        logger.debug(exception)
        sys.exit(int(ExitCode.STRUCTURAL))
    emit(report, out, report_format)


@main.command(context_settings=CONTEXT_SETTINGS)
@common_options
@click.argument("name", type=str)
def demo(name, mode, tolerance, out, report_format):
    """Run the built-in demonstration `NAME` (see `list-demos`).

    Example of usage:
    sugra47 demo cp2xs3 -o reports/cp2xs3.json
    """
    if name not in DEMOS:
        logger.error("Unknown demo '%s', expected one of: %s", name, ", ".join(DEMOS))
        sys.exit(int(ExitCode.STRUCTURAL))
    field = field_for(Mode(mode or Mode.EXACT.value), tolerance)
    try:
        report = run_with_fallback(DEMOS[name].run, field, name)
    except Sugra47Error as exception:
        logger.error("Could not run the demo '%s': %s", name, exception)
        logger.debug(exception)
        sys.exit(int(ExitCode.STRUCTURAL))
    emit(report, out, report_format)


@main.command("list-demos", context_settings=CONTEXT_SETTINGS)
def list_demos():
    """List the built-in demonstrations."""
    width = max(len(name) for name in DEMOS)
    for name, entry in DEMOS.items():
        click.echo(f"{name.ljust(width)}  {entry.description}")


if __name__ == "__main__":
    main()
