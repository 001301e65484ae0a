"""Prints the acceptance report (one line per criterion) after the run."""

import acceptance_log


def pytest_terminal_summary(terminalreporter):
    if not acceptance_log.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in acceptance_log.lines():
        terminalreporter.write_line(line)
