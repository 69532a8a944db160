import pytest
from mpmath import mp

# criterion id -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE = {}


@pytest.fixture(autouse=True)
def _precision():
    """Every test starts at the default 256-bit working precision."""
    prec = mp.prec
    mp.prec = 256
    yield
    mp.prec = prec


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in ACCEPTANCE:
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"{key} {'PASS' if ok else 'FAIL'}  {detail}")
