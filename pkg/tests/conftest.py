import pytest

_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Record one acceptance line; all of them are repeated in the summary."""

    def record(line: str) -> None:
        _LINES.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
