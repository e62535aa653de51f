"""Keeps the tests directory importable so test modules can share helpers."""

import sys


def pytest_terminal_summary(terminalreporter):
    # acceptance verdicts are printed inside captured stdout; replay them
    # where they are visible in a plain `pytest -v` run
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "VERDICTS", ()) if mod else ()
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
