import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

# (criterion, passed, detail) rows filled in by test_acceptance
ACCEPTANCE: list[tuple[int, bool, str]] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running checks")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n, ok, detail in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})")
