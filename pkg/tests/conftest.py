import sys
from pathlib import Path

import pytest

from tbgroups import kernels

sys.path.insert(0, str(Path(__file__).parent))

from acceptance_log import LINES as ACCEPTANCE_LINES  # noqa: E402


@pytest.fixture(params=kernels.available())
def backend(request):
    """Run a test once per available kernel backend."""
    prev = kernels.backend
    kernels.set_backend(request.param)
    yield request.param
    kernels.backend = prev


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
