import importlib.util
import sys

import pytest

HAS_SDPAP = importlib.util.find_spec("sdpap") is not None
SOLVER_CMD = f"{sys.executable} -m leesdp.sdpa_adapter"

needs_solver = pytest.mark.skipif(not HAS_SDPAP, reason="sdpa-python not installed")


@pytest.fixture
def solver_cmd():
    if not HAS_SDPAP:
        pytest.skip("sdpa-python not installed")
    return SOLVER_CMD


# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES: dict[str, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
