import pytest

_LINES = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line, then fail the test if the criterion is red."""
    lines = request.config.stash.setdefault(_LINES, [])

    def record(number: int, ok: bool, message: str) -> None:
        line = f"{'PASS' if ok else 'FAIL'} criterion {number:>2}: {message}"
        lines.append((number, line))
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
