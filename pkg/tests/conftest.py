"""Echo the per-criterion acceptance verdicts after capture is released."""

import sys


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    for name in ("test_acceptance", "tests.test_acceptance"):
        mod = sys.modules.get(name)
        if mod is not None and getattr(mod, "VERDICTS", None):
            terminalreporter.section("acceptance criteria")
            for line in mod.VERDICTS:
                terminalreporter.write_line(line)
            break
