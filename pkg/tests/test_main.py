import json
import logging

import pytest
from click.testing import CliRunner

from sugra47.main import main

SO3_SCENARIO = {
    "schema": 1,
    "name": "so3",
    "tasks": ["ricci"],
    "lie_algebra": {
        "dim": 3,
        "brackets": [
            {"i": 0, "j": 1, "coeffs": {"2": 1}},
            {"i": 1, "j": 2, "coeffs": {"0": 1}},
            {"i": 2, "j": 0, "coeffs": {"1": 1}},
        ],
    },
    "h": [],
    "m": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
}

CANONICAL_FORM = {
    "degree": 3,
    "terms": [
        {"indices": [1, 2, 7], "coeff": 1},
        {"indices": [3, 4, 7], "coeff": 1},
        {"indices": [5, 6, 7], "coeff": 1},
        {"indices": [1, 3, 5], "coeff": 1},
        {"indices": [2, 4, 5], "coeff": -1},
        {"indices": [1, 4, 6], "coeff": -1},
        {"indices": [2, 3, 6], "coeff": -1},
    ],
}


@pytest.fixture
def runner():
    return CliRunner()


def write(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(data if isinstance(data, str) else json.dumps(data))
    return str(path)


def test_list_demos(runner):
    result = runner.invoke(main, ["list-demos"])
    assert result.exit_code == 0
    names = [line.split()[0] for line in result.stdout.splitlines()]
    assert names[:3] == ["canonical-g2", "cp2xs3", "s3xt4"]
    assert "parallel-g2" in names
    assert "example-2-15" in names and "hyperbolic-sphere" in names


def test_unknown_demo(runner, caplog):
    with caplog.at_level(logging.ERROR):
        result = runner.invoke(main, ["demo", "k3"])
    assert result.exit_code == 3
    assert "Unknown demo" in caplog.text


def test_canonical_demo_is_reproducible(runner, tmp_path):
    first, second = tmp_path / "a" / "report.json", tmp_path / "b.json"
    assert runner.invoke(main, ["demo", "canonical-g2", "-o", str(first)]).exit_code == 0
    assert runner.invoke(main, ["demo", "canonical-g2", "-o", str(second)]).exit_code == 0
    assert first.read_bytes() == second.read_bytes()
    report = json.loads(first.read_text())
    assert report["results"]["stabilizer_dim"] == 14
    assert report["results"]["classification"]["class"] == "GenericG2"
    assert all(report["results"]["checks"].values())


@pytest.mark.parametrize(
    "name, code",
    [
        ("cp2xs3", 2),
        ("s3xt4", 0),
        ("parallel-g2", 2),
        ("isotropy-rows", 0),
        ("torus7", 0),
        ("spin7-g2", 0),
        ("lemma-sweep", 0),
    ],
)
def test_demo_exit_codes(runner, name, code):
    result = runner.invoke(main, ["demo", name, "-r", "json"])
    assert result.exit_code == code
    assert json.loads(result.stdout)["exit_code"] == code


def test_cp2xs3_demo_checks_the_squashed_branches(runner):
    report = json.loads(runner.invoke(main, ["demo", "cp2xs3", "-r", "json"]).stdout)
    assert report["results"]["squashed_branches"] == {"1/2": 2, "1": 1}
    assert report["results"]["checks"]["squashed branches f = 1/2 of dimension 2 and f = 1 of dimension 1"]
    assert all(report["results"]["checks"].values())


@pytest.mark.parametrize("name", ["example-2-15", "hyperbolic-sphere"])
def test_hyperbolic_sphere_demo_degrades(runner, name):
    result = runner.invoke(main, ["demo", name, "-r", "json"])
    assert result.exit_code == 0
    report = json.loads(result.stdout)
    assert "degraded-to-float" in report["flags"]
    assert report["mode"] == "float"
    assert report["results"]["checks"] == {"Lambda = -1/6": True}


def test_ricci_text_report(runner, tmp_path):
    result = runner.invoke(main, ["ricci", write(tmp_path, "so3.json", SO3_SCENARIO)])
    assert result.exit_code == 0
    assert "einstein_constant: 1/2" in result.stdout


def test_subcommand_replaces_the_tasks(runner, tmp_path):
    scenario = dict(SO3_SCENARIO, tasks=["classify"])
    result = runner.invoke(main, ["ricci", write(tmp_path, "so3.json", scenario), "-r", "json"])
    assert result.exit_code == 0
    assert list(json.loads(result.stdout)["results"]) == ["ricci"]


def test_verify_exit_code(runner, tmp_path):
    scenario = {
        "schema": 1,
        "name": "parallel",
        "tasks": ["verify"],
        "model": {"name": "torus"},
        "forms": {"phi": CANONICAL_FORM, "f": 0},
    }
    result = runner.invoke(main, ["verify", write(tmp_path, "parallel.json", scenario), "-m", "float"])
    assert result.exit_code == 2


def test_solve_maxwell(runner, tmp_path):
    scenario = {"schema": 1, "name": "s3xt4", "tasks": ["verify"], "model": {"name": "s3xt4"}}
    path = write(tmp_path, "s3xt4.json", scenario)
    result = runner.invoke(main, ["solve-maxwell", path, "-r", "json"])
    report = json.loads(result.stdout)
    assert report["results"]["solve-maxwell"]["space"] == "S3xT4"


def test_malformed_json(runner, tmp_path, caplog):
    with caplog.at_level(logging.ERROR):
        result = runner.invoke(main, ["verify", write(tmp_path, "bad.json", '{"schema": 1,\n "name": ')])
    assert result.exit_code == 3
    assert "line 2" in caplog.text


def test_invalid_scenario(runner, tmp_path, caplog):
    path = write(tmp_path, "invalid.json", {"schema": 1, "name": "x", "tasks": ["ricci"]})
    with caplog.at_level(logging.ERROR):
        result = runner.invoke(main, ["ricci", path])
    assert result.exit_code == 3
    assert "Invalid scenario" in caplog.text


def test_structural_error(runner, tmp_path):
    scenario = {"schema": 1, "name": "x", "tasks": ["ricci"], "model": {"name": "cp2xs3", "parameters": {"a": 0}}}
    assert runner.invoke(main, ["ricci", write(tmp_path, "x.json", scenario)]).exit_code == 3


def test_classify_form(runner, tmp_path):
    result = runner.invoke(main, ["classify-form", write(tmp_path, "omega.json", CANONICAL_FORM), "-r", "json"])
    assert result.exit_code == 0
    report = json.loads(result.stdout)
    assert report["results"]["classify"]["class"] == "GenericG2"
    assert report["results"]["classify"]["metric"][0] == ["1", "0", "0", "0", "0", "0", "0"]


def test_classify_form_rejects_other_degrees(runner, tmp_path):
    form = {"degree": 2, "terms": [{"indices": [1, 2], "coeff": 1}]}
    assert runner.invoke(main, ["classify-form", write(tmp_path, "two.json", form)]).exit_code == 3
    assert runner.invoke(main, ["classify-form", write(tmp_path, "bad.json", "{")]).exit_code == 3
    zero_denominator = {"degree": 3, "terms": [{"indices": [1, 2, 3], "coeff": "1/0"}]}
    assert runner.invoke(main, ["classify-form", write(tmp_path, "zero.json", zero_denominator)]).exit_code == 3


def test_tolerance_must_be_positive(runner):
    result = runner.invoke(main, ["demo", "torus7", "-t", "0"])
    assert result.exit_code == 2


def test_verbose(runner):
    root = logging.getLogger()
    level = root.level
    try:
        assert runner.invoke(main, ["-v", "list-demos"]).exit_code == 0
        assert root.level == logging.DEBUG
    finally:
        root.setLevel(level)
