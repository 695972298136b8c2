import json
import os

import jsonschema
import pytest

SCHEMA_PATH = os.environ.get(
    "HTCHEEGER_SCHEMA", os.path.join(os.path.dirname(__file__), "..", "..", "schema", "report.schema.json")
)


@pytest.fixture(scope="module")
def schema():
    with open(SCHEMA_PATH) as f:
        return json.load(f)


CASES = [
    ["constants", "--lambda", "5"],
    ["cheeger-estimate", "--measure", "laplace", "--alpha", "1"],
    ["estimate", "--fn", "max", "--n", "4", "--samples", "6400", "--grad-q", "2"],
    ["verify-pareto", "--dims", "4,16,64", "--samples", "20000"],
    ["verify-tails", "--measure", "laplace", "--alpha", "1"],
    ["verify-isoperimetric", "--a-lo", "1,1", "--a-hi", "1.2,1.2", "--b-lo", "3,3", "--b-hi", "inf,inf"],
    ["verify-matrix", "--n", "4", "--trials", "200"],
    ["tightness"],
]


@pytest.mark.parametrize("args", CASES, ids=lambda a: a[0])
def test_json_output_validates(run_binary, schema, args):
    proc = run_binary(*args, "--format", "json")
    assert proc.returncode in (0, 2, 3), proc.stderr
    doc = json.loads(proc.stdout)
    jsonschema.validate(doc, schema)
    assert doc["subcommand"] == args[0]


def test_csv_header_and_env_dir(run_binary, tmp_path):
    env = dict(os.environ, HTCHEEGER_OUTPUT_DIR=str(tmp_path))
    proc = run_binary("tightness", "--format", "csv", env=env)
    assert proc.returncode == 0, proc.stderr
    text = (tmp_path / "tightness.csv").read_text()
    assert text.splitlines()[0] == (
        "theorem_id,lhs,lhs_ci_low,lhs_ci_high,rhs,tolerance,slack,comparison,verdict,config"
    )


def test_usage_error(run_binary):
    assert run_binary().returncode == 1
    assert run_binary("verify-matrix", "--n", "1").returncode == 1


def test_determinism(run_binary):
    args = ("estimate", "--fn", "max", "--n", "8", "--samples", "32000", "--seed", "4")
    assert run_binary(*args).stdout == run_binary(*args).stdout
