import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def report_criterion():
    """Record a one-line PASS/FAIL verdict for the acceptance summary."""

    def record(number, passed, detail):
        status = "PASS" if passed else "FAIL"
        ACCEPTANCE_LINES.append((number, f"criterion {number}: {status}  {detail}"))
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(ACCEPTANCE_LINES, key=lambda item: item[0]):
        terminalreporter.write_line(line)
