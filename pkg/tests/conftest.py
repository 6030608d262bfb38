import pytest

ACCEPTANCE = {}


@pytest.fixture
def verdict(request):
    """Record one PASS/FAIL line for an acceptance criterion, then assert."""
    def record(number, ok, detail):
        ACCEPTANCE[number] = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}"
        print(ACCEPTANCE[number])
        assert ok, detail
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
