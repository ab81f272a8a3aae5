import pytest

_LINES = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_LINES] = []


@pytest.fixture
def criterion(request):
    """``criterion(n, ok, detail)`` prints a PASS/FAIL line and returns ``ok``."""
    lines = request.config.stash[_LINES]

    def report(n, ok, detail):
        line = f"[criterion {n:>2}] {'PASS' if ok else 'FAIL'}  {detail}"
        print(line)
        lines.append((n, line))
        return ok

    return report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines, key=lambda t: t[0]):
            terminalreporter.write_line(line)
