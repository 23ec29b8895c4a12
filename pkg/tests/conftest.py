import numpy as np
import pytest

from wavefeat import _backend


@pytest.fixture(params=_backend.available())
def backend(request):
    """Run a test once per available kernel backend."""
    previous = _backend.set_backend(request.param)
    yield request.param
    _backend.set_backend(previous)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def pytest_terminal_summary(terminalreporter):
    import sys

    lines = []
    for mod in list(sys.modules.values()):
        lines.extend(getattr(mod, "ACCEPTANCE_RESULTS", None) or [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
