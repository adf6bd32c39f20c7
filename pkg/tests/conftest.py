import pytest

_LINES: dict[int, str] = {}
_PROPERTY_OUTCOMES: list[tuple[str, str]] = []


class AcceptanceLog:
    def record(self, criterion: int, ok: bool, text: str) -> str:
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {criterion:>2}: {text}"
        _LINES[criterion] = line
        print(line)
        return line


@pytest.fixture(scope="session")
def acceptance():
    return AcceptanceLog()


def pytest_runtest_logreport(report):
    if report.nodeid.startswith("tests/test_properties.py") and report.when == "call":
        _PROPERTY_OUTCOMES.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    lines = dict(_LINES)
    if _PROPERTY_OUTCOMES:
        failed = [name for name, outcome in _PROPERTY_OUTCOMES if outcome != "passed"]
        ok = not failed
        text = f"property suites, {len(_PROPERTY_OUTCOMES)} properties x 1000 cases"
        if failed:
            text += f"; failing: {', '.join(failed)}"
        lines[11] = f"[{'PASS' if ok else 'FAIL'}] criterion 11: {text}"
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(lines):
        terminalreporter.write_line(lines[k])
