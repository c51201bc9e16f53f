import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from xpforecast.xp_model import PracticeLevel, PracticeUsage, ReleaseSpec  # noqa: E402

L = PracticeLevel


@pytest.fixture
def repo_release1():
    return ReleaseSpec(15, 15.0, PracticeUsage(L.ABOUT_HALF, L.ABOUT_HALF, L.NEVER))


@pytest.fixture
def abrahamsson_release1():
    return ReleaseSpec(5, 10.0, PracticeUsage(L.ALMOST_USED, L.ABOUT_HALF, L.OCCASIONALLY))


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in module.RESULTS:
        terminalreporter.write_line(line)
