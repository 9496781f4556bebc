import pytest

from shiftconv.forms.eigenform import eigenform


@pytest.fixture(scope="session")
def delta10k():
    return eigenform(12, 10001)


@pytest.fixture(scope="session")
def delta_small():
    return eigenform(12, 2001)


_ACCEPTANCE = pytest.StashKey[dict]()


@pytest.fixture
def record_criterion(request):
    """Store one pass/fail line for the terminal summary, keyed by criterion index."""
    lines = request.config.stash.setdefault(_ACCEPTANCE, {})

    def record(index: int, line: str):
        lines[index] = line
    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, {})
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for i in sorted(lines):
        terminalreporter.write_line(lines[i])
