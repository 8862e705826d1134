import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from encube.algebra import AlgebraPresentation  # noqa: E402
from encube.cli import resolve_fixture  # noqa: E402
from encube.linalg import Coefficients  # noqa: E402

F2 = Coefficients.prime(2)
F3 = Coefficients.prime(3)
Q = Coefficients.rationals()
Z = Coefficients.integers()


def fixture(name: str) -> AlgebraPresentation:
    return AlgebraPresentation.load(resolve_fixture(name))


@pytest.fixture
def load():
    return fixture


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
