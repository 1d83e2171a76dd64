import pytest
from hypothesis import settings

from inertonlab.model import ModelParams, derive_quantities

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def canonical():
    """Natural-unit canonical quantities: M0 = c = T = 1, v0 = 0.6."""
    return derive_quantities(ModelParams())


ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_log():
    """Records one PASS/FAIL line per acceptance criterion; echoed in the terminal summary."""
    def record(cid, title, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'}  {cid:<4} {title}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
