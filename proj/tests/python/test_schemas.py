import json
import os
import pathlib
import subprocess

import jsonschema
import pytest
from referencing import Registry, Resource

ROOT = pathlib.Path(__file__).resolve().parents[2]
SCHEMAS = ROOT / "schemas"
EXAMPLES = SCHEMAS / "examples"
KIND = {"metric": "metric", "sequence": "shift_sequence", "map": "point_map", "field": "field",
        "witness": "witness"}


def registry():
    reg = Registry()
    for path in SCHEMAS.glob("*.schema.json"):
        doc = json.loads(path.read_text())
        reg = reg.with_resource(doc["$id"], Resource.from_contents(doc))
    return reg


def validator(name):
    schema = json.loads((SCHEMAS / f"{name}.schema.json").read_text())
    jsonschema.Draft202012Validator.check_schema(schema)
    return jsonschema.Draft202012Validator(schema, registry=registry())


@pytest.mark.parametrize("path", sorted(EXAMPLES.glob("*.json")), ids=lambda p: p.name)
def test_examples_validate(path):
    kind = KIND[path.name.split("_")[0].split(".")[0]]
    validator(kind).validate(json.loads(path.read_text()))


def test_invalid_documents_are_rejected():
    with pytest.raises(jsonschema.ValidationError):
        validator("metric").validate({"form": "brinkmann", "profiles": {}})
    with pytest.raises(jsonschema.ValidationError):
        validator("shift_sequence").validate({"window": [0, 0], "values": [0.7]})


def cli(*args):
    exe = os.environ.get("PLANEWAVE_CLI")
    if not exe:
        pytest.skip("PLANEWAVE_CLI not set")
    return subprocess.run([exe, *map(str, args)], capture_output=True, text=True)


def test_cli_reports_validate():
    v = validator("report")
    for args in (["equiv", EXAMPLES / "metric_scaled_a.json", EXAMPLES / "metric_scaled_b.json"],
                 ["conformal", EXAMPLES / "metric_rotating.json"],
                 ["killing", EXAMPLES / "sequence_alpha.json"],
                 ["family", "--alpha", EXAMPLES / "sequence_alpha.json", "--shift", "-2"]):
        proc = cli(*args)
        report = json.loads(proc.stdout)
        v.validate(report)
        assert proc.returncode == (1 if report["status"] == "error" else 0)
    witness = json.loads(cli("equiv", EXAMPLES / "metric_scaled_a.json",
                             EXAMPLES / "metric_scaled_b.json").stdout)["result"]["witness"]
    validator("witness").validate(witness)
