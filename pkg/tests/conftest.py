import sys
from pathlib import Path

import pytest

from ezreduce.chains import simplicial_chains
from ezreduce.simplicial import bundled

sys.path.insert(0, str(Path(__file__).parent))

ACCEPTANCE_LINES: list = []


@pytest.fixture(scope="session")
def complexes():
    return {name: bundled(name) for name in ("circle", "sphere", "s3", "rp2", "torus")}


@pytest.fixture(scope="session")
def circle_chains(complexes):
    return simplicial_chains(complexes["circle"])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
