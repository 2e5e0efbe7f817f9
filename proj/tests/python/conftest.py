import json
import pathlib

import pytest

ROOT = pathlib.Path(__file__).resolve().parents[2]
EXAMPLES = ROOT / "schemas" / "examples"


@pytest.fixture
def example():
    def load(name):
        return json.loads((EXAMPLES / name).read_text())

    return load
