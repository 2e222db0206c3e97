import pytest

ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """Record one acceptance line: ``criterion(number, title, passed, seconds, limit, detail)``."""
    lines = request.config.stash.setdefault(ACCEPTANCE, [])

    def record(number, title, passed, seconds, limit, detail=""):
        status = "PASS" if passed else "FAIL"
        line = f"criterion {number:>2} {status}  {title}  ({seconds:.2f} s, limit {limit} s){'  ' + detail if detail else ''}"
        lines.append((number, line))
        print(line)

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
