import numpy as np
import pytest

from mwconsensus import scenarios


@pytest.fixture(scope="session")
def cluster_cfg():
    return scenarios.load_builtin("cluster_switching")


@pytest.fixture(scope="session")
def bipartite_cfg():
    return scenarios.load_builtin("bipartite_switching")


@pytest.fixture(scope="session")
def integral_cfg():
    return scenarios.load_builtin("integral_static")


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Print one pass/fail line per acceptance criterion."""
    rows = []
    for status in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(status, []):
            if getattr(rep, "when", None) != "call":
                continue
            if "test_acceptance.py" not in rep.nodeid:
                continue
            name = rep.nodeid.split("::")[-1]
            rows.append((name, "PASS" if status == "passed" else "FAIL"))
    if not rows:
        return
    try:
        from test_acceptance import CRITERIA
    except ImportError:
        CRITERIA = {}
    terminalreporter.write_sep("=", "acceptance criteria")
    for name, status in sorted(rows):
        desc = CRITERIA.get(name, name)
        terminalreporter.write_line(f"{status}  {desc}")
