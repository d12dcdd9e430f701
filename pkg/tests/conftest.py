import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def record_criterion():
    def record(result):
        line = result.line()
        ACCEPTANCE_LINES.append((result.number, line))
        print(line)
        return result
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)
