import json
import os
import subprocess
from pathlib import Path

import jsonschema
import pytest

BIN = os.environ.get("TOSI_BIN", "tosi")
SCHEMAS = Path(os.environ.get("TOSI_SCHEMAS", Path(__file__).parents[2] / "schemas"))
FIXTURES = Path(os.environ.get("TOSI_FIXTURES", Path(__file__).parents[1] / "fixtures"))


def run_tosi(*args, env=None, cwd=None):
    full_env = dict(os.environ)
    if env:
        full_env.update(env)
    return subprocess.run([BIN, *map(str, args)], capture_output=True, text=True, env=full_env, cwd=cwd)


def validate(doc, schema_name):
    schema = json.loads((SCHEMAS / f"{schema_name}.schema.json").read_text())
    jsonschema.validate(doc, schema)


@pytest.fixture
def fixtures():
    return FIXTURES
