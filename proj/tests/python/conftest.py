import os
import subprocess

import pytest


@pytest.fixture
def binary():
    path = os.environ.get("HTCHEEGER_BIN")
    if not path:
        pytest.skip("HTCHEEGER_BIN not set")
    return path


@pytest.fixture
def run_binary(binary):
    def run(*args, env=None):
        return subprocess.run([binary, *map(str, args)], capture_output=True, text=True, env=env)

    return run
