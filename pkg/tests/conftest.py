import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

from boundary_pick import build_pick_system, build_theta  # noqa: E402
from boundary_pick.fixtures import WORKED_MU, worked_example_data  # noqa: E402

import corpus as _corpus  # noqa: E402

settings.register_profile(
    "repo",
    deadline=None,
    derandomize=True,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture(scope="session")
def worked():
    sys_ = build_pick_system(worked_example_data())
    return sys_, build_theta(sys_, WORKED_MU)


@pytest.fixture(scope="session")
def problems():
    return _corpus.corpus()


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
