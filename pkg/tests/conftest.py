import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from orperc import EdgeRef, ExplicitConfig, Side, Window  # noqa: E402


def six_edge_config():
    """(0,0) has both upper edges, (1,1) none, (-1,1) only its right one."""
    w = Window(-2, 2, 0, 2)
    return ExplicitConfig.from_open_edges(w, [
        EdgeRef((0, 0), Side.LEFT), EdgeRef((0, 0), Side.RIGHT),
        EdgeRef((-1, 1), Side.RIGHT)])


def f0_config():
    """r=(1,3) with daughters a=(0,2), b=(2,2); c=(-1,1) under a; r continues to (2,4)."""
    region = Window(-10, 10, 0, 4)
    return ExplicitConfig.from_open_edges(region, [
        EdgeRef((1, 3), Side.RIGHT), EdgeRef((0, 2), Side.RIGHT),
        EdgeRef((2, 2), Side.LEFT), EdgeRef((-1, 1), Side.RIGHT)])


@pytest.fixture
def six_edge():
    return six_edge_config()


@pytest.fixture
def f0():
    from orperc import Forest
    return Forest(Window(-3, 3, 1, 3), 1, f0_config(), margin=0, below=1)


def pytest_terminal_summary(terminalreporter):
    import report
    if report.LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(report.LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
