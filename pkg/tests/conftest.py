import os

import hypothesis
import numpy as np
import pytest

hypothesis.settings.register_profile("default", max_examples=15, deadline=None)
hypothesis.settings.register_profile("thorough", max_examples=200, deadline=None)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def rng():
    return np.random.default_rng(0)


def pytest_terminal_summary(terminalreporter):
    """One line per acceptance criterion."""
    import re

    status = {}
    for key in ("passed", "failed", "xfailed", "xpassed", "error"):
        for rep in terminalreporter.stats.get(key, []):
            if getattr(rep, "when", "call") != "call" and key != "error":
                continue
            m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_", getattr(rep, "nodeid", ""))
            if m:
                status.setdefault(int(m.group(1)), []).append(key)
    if not status:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(status):
        keys = status[n]
        if all(k == "passed" for k in keys):
            line = "PASS"
        elif all(k in ("passed", "xfailed") for k in keys):
            line = f"FAIL (expected: {keys.count('xfailed')} sub-check(s) do not hold, see xfail reasons)"
        else:
            line = "FAIL"
        terminalreporter.write_line(f"criterion {n:2d}: {line}  [{len(keys)} checks]")
