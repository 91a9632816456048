import pytest

ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def acceptance_log():
    def record(number: int, passed: bool, elapsed: float, limit: float, note: str = ""):
        status = "PASS" if passed else "FAIL"
        ACCEPTANCE_LINES[number] = f"ACCEPTANCE {number}: {status} ({elapsed:.2f}s, limit {limit:g}s){' ' + note if note else ''}"
        print(ACCEPTANCE_LINES[number])

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
