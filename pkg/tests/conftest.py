import pytest

_LINES: list[str] = []


@pytest.fixture
def criterion_line():
    """Record and print the one-line verdict of an acceptance criterion."""

    def emit(number: int, title: str, ok: bool, detail: str = "") -> bool:
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d} {title}" + (f": {detail}" if detail else "")
        print(line)
        _LINES.append(line)
        return ok

    return emit


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_LINES, key=lambda s: int(s.split()[2])):
            terminalreporter.write_line(line)
