import json
from pathlib import Path

import pytest
from jsonschema import ValidationError

from sugra47.errors import StructuralError
from sugra47.scalars import Mode
from sugra47.scenarios import ExitCode, Report, load_scenario, parse_scenario, run_scenario
from sugra47.sugra import Flag

CANONICAL_TERMS = [
    {"indices": [1, 2, 7], "coeff": 1},
    {"indices": [3, 4, 7], "coeff": 1},
    {"indices": [5, 6, 7], "coeff": 1},
    {"indices": [1, 3, 5], "coeff": 1},
    {"indices": [2, 4, 5], "coeff": -1},
    {"indices": [1, 4, 6], "coeff": -1},
    {"indices": [2, 3, 6], "coeff": -1},
]

SO3_BRACKETS = [
    {"i": 0, "j": 1, "coeffs": {"2": 1}},
    {"i": 1, "j": 2, "coeffs": {"0": 1}},
    {"i": 0, "j": 2, "coeffs": {"1": -1}},
]


def scenario(tasks, **fields):
    data = {"schema": 1, "name": "test", "tasks": tasks}
    data.update(fields)
    return parse_scenario(json.dumps(data))


def test_schema_accepts_a_model_scenario():
    data = scenario(["ricci"], model={"name": "torus", "parameters": {"n": 7}})
    assert data["model"]["name"] == "torus"


@pytest.mark.parametrize(
    "document",
    [
        {"schema": 1, "name": "test", "model": {"name": "torus"}},
        {"schema": 2, "name": "test", "tasks": ["ricci"], "model": {"name": "torus"}},
        {"schema": 1, "name": "test", "tasks": ["plot"], "model": {"name": "torus"}},
        {"schema": 1, "name": "test", "tasks": ["ricci"]},
        {"schema": 1, "name": "test", "tasks": ["ricci"], "model": {"name": "k3"}},
        {
            "schema": 1,
            "name": "test",
            "tasks": ["ricci"],
            "model": {"name": "torus"},
            "lie_algebra": {"dim": 1, "brackets": []},
        },
        {"schema": 1, "name": "test", "tasks": ["ricci"], "lie_algebra": {"dim": 1, "brackets": []}},
        {
            "schema": 1,
            "name": "test",
            "tasks": ["verify"],
            "model": {"name": "torus"},
            "forms": {"phi": {"degree": 3, "terms": []}, "f": "one"},
        },
    ],
)
def test_schema_rejects(document):
    with pytest.raises(ValidationError):
        parse_scenario(json.dumps(document))


def test_malformed_json():
    with pytest.raises(json.JSONDecodeError):
        parse_scenario('{"schema": 1,')


def test_ricci_of_a_lie_algebra():
    data = scenario(
        ["ricci"],
        lie_algebra={"dim": 3, "brackets": SO3_BRACKETS},
        h=[],
        m=[[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        metric="identity",
    )
    report = run_scenario(data)
    assert report.results["ricci"]["einstein_constant"] == "1/2"
    assert report.exit_code is ExitCode.OK


def test_ricci_of_a_coframe_algebra():
    data = scenario(
        ["ricci"],
        coframe_dga={
            "generators": ["x", "y", "z"],
            "d": [
                {"gen": "x", "two_form": "-y^z"},
                {"gen": "y", "two_form": "-z^x"},
                {"gen": "z", "two_form": "-x^y"},
            ],
        },
    )
    report = run_scenario(data)
    assert report.results["ricci"]["matrix"][0] == ["1/2", "0", "0"]
    assert report.mode is Mode.EXACT


def test_coframe_algebra_must_square_to_zero():
    data = scenario(
        ["ricci"],
        coframe_dga={"generators": ["x", "y", "z"], "d": [{"gen": "x", "two_form": "y^z"}, {"gen": "y", "two_form": "x^y"}]},
    )
    with pytest.raises(StructuralError):
        run_scenario(data)


def test_unknown_isotropy_generator():
    data = scenario(
        ["ricci"],
        coframe_dga={"generators": ["x", "y"], "d": [], "isotropy": ["w"]},
    )
    with pytest.raises(StructuralError, match="isotropy"):
        run_scenario(data)


def test_irrational_scenarios_are_degraded():
    report = run_scenario(scenario(["ricci"], model={"name": "su2"}))
    assert Flag.DEGRADED.value in report.flags
    assert report.mode is Mode.FLOAT
    assert report.results["ricci"]["einstein_constant"] == pytest.approx(0.25)

    report = run_scenario(scenario(["ricci"], model={"name": "h3xs4"}))
    assert Flag.DEGRADED.value in report.flags


def test_float_mode_from_the_command_line():
    report = run_scenario(scenario(["ricci"], model={"name": "so8-so7"}), mode="float", tolerance=1e-8)
    assert report.mode is Mode.FLOAT
    assert report.results["ricci"]["einstein_constant"] == pytest.approx(0.5)
    assert Flag.DEGRADED.value not in report.flags


def test_verify_every_maxwell_solution():
    report = run_scenario(scenario(["verify", "solve-maxwell"], model={"name": "cp2xs3"}))
    assert report.exit_code is ExitCode.EINSTEIN_FAILED
    assert len(report.results["verify"]) == 4
    assert report.results["solve-maxwell"]["invariant_3forms"] == 4
    assert Flag.NOT_SPECIAL_EINSTEIN.value in report.flags


def test_verify_parallel_form():
    forms = {"phi": {"degree": 3, "terms": CANONICAL_TERMS}, "f": 0}
    report = run_scenario(scenario(["verify", "classify"], model={"name": "torus"}, forms=forms))
    assert report.exit_code is ExitCode.EINSTEIN_FAILED
    assert Flag.PARALLEL_TYPE_II.value in report.flags
    assert report.results["classify"]["class"] == "GenericG2"


def test_maxwell_failure():
    forms = {"phi": {"degree": 3, "terms": [{"indices": [1, 2, 3], "coeff": 1}]}, "f": 1}
    report = run_scenario(scenario(["verify"], model={"name": "torus"}, forms=forms))
    assert report.exit_code is ExitCode.FAILED


def test_fitted_f():
    terms = [{"indices": [1, 4, 5], "coeff": 1}, {"indices": [1, 6, 7], "coeff": 1}]
    report = run_scenario(scenario(["verify"], model={"name": "s3xt4"}, forms={"phi": {"degree": 3, "terms": terms}}))
    assert report.results["fitted_f"] == "1"
    assert report.results["verify"][0]["residuals"]["maxwell"] == "0"


def test_classify_needs_a_form():
    with pytest.raises(StructuralError):
        run_scenario(scenario(["classify"], model={"name": "torus"}))


def test_bad_model_parameters():
    with pytest.raises(StructuralError, match="parameters"):
        run_scenario(scenario(["ricci"], model={"name": "cp2xs3", "parameters": {"z": 1}}))
    with pytest.raises(StructuralError):
        run_scenario(scenario(["ricci"], model={"name": "cp2xs3", "parameters": {"a": -1}}))


def test_load_yaml_scenario(tmp_path):
    path = tmp_path / "torus.yml"
    path.write_text("schema: 1\nname: flat\ntasks: [ricci]\nmodel:\n  name: torus\n  parameters: {n: 3}\n")
    data = load_scenario(str(path))
    report = run_scenario(data)
    assert report.name == "flat"
    assert report.results["ricci"]["einstein_constant"] == "0"


def test_report_exit_codes():
    report = Report("test", Mode.EXACT)
    assert report.exit_code is ExitCode.OK
    report.einstein_failed = True
    assert report.exit_code is ExitCode.EINSTEIN_FAILED
    report.check("holds", True)
    assert report.exit_code is ExitCode.EINSTEIN_FAILED
    report.check("fails", False)
    assert report.exit_code is ExitCode.FAILED
    assert report.results["checks"] == {"holds": True, "fails": False}
    report.flag("x")
    report.flag("x")
    assert report.to_json()["flags"] == ["x"]
    assert report.to_json()["exit_code"] == 1


@pytest.mark.parametrize("path", sorted((Path(__file__).parent.parent / "scenarios").iterdir()))
def test_shipped_scenarios_are_valid(path):
    assert load_scenario(str(path))["schema"] == 1
