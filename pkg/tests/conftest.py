import sys
from importlib import resources

import numpy as np
import pytest

from dualdet.io import parse_matrix


def fixture_path(name: str):
    return resources.files("dualdet") / "fixtures" / f"{name}.json"


def load_fixture(name: str):
    return parse_matrix(fixture_path(name))


def rngs(seed: int, n: int):
    """n independent generators derived from one seed."""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(n)]


@pytest.fixture
def rng():
    return np.random.default_rng(20240531)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
