import pytest

_LINES_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_LINES_KEY] = []


@pytest.fixture
def criterion(request):
    """Record one acceptance line; the test still asserts on ``passed`` itself."""
    lines = request.config.stash[_LINES_KEY]

    def record(number, title, passed, detail=""):
        lines.append((number, f"{'PASS' if passed else 'FAIL'}  [{number:2d}] {title}  {detail}".rstrip()))
        return passed

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_LINES_KEY, [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(lines):
        terminalreporter.write_line(line)
