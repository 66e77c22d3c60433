import pytest

ACCEPTANCE = {}
_TOTAL = 12


@pytest.fixture
def acceptance():
    """Recorder for one acceptance criterion: ``acceptance(k, ok, detail)``."""
    def record(k, ok, detail=""):
        line = f"ACCEPTANCE {k:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE[k] = line
        print(line)
        return ok
    ACCEPTANCE.setdefault("_ran", True)
    return record


def pytest_terminal_summary(terminalreporter):
    if "_ran" not in ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in range(1, _TOTAL + 1):
        terminalreporter.write_line(ACCEPTANCE.get(k, f"ACCEPTANCE {k:>2}: FAIL  (not run)"))
