import pytest

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report_criterion(capsys):
    def emit(result):
        ACCEPTANCE_LINES.append(result.line())
        with capsys.disabled():
            print("\n" + result.line())
        return result

    return emit


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip("."))):
            terminalreporter.write_line(line)
