import pytest

_ACCEPTANCE_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE_KEY] = []


@pytest.fixture
def acceptance(request):
    """Record one verdict line per acceptance criterion.

    Usage: ``acceptance(number, title, worst, tolerance)``; the call asserts
    ``worst <= tolerance`` after recording, so the line is written whether
    the criterion passes or fails.
    """
    lines = request.config.stash[_ACCEPTANCE_KEY]

    def record(number: int, title: str, worst: float, tolerance: float) -> None:
        ok = bool(worst <= tolerance)
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} (worst {worst:.3e}, tol {tolerance:.0e})"
        lines.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE_KEY, [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(lines, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
        terminalreporter.write_line(line)
