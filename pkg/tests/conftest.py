import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

DATA = Path(__file__).parent / "data"


def random_points(rng, n, d=2, scale=10.0):
    return rng.uniform(0.0, scale, size=(n, d))


def random_sample(rng, n):
    from spatialassoc import PointSample

    coords = random_points(rng, n)
    x = rng.normal(size=n)
    y = 0.5 * x + rng.normal(size=n)
    return PointSample(coords, x, y)


@pytest.fixture
def rng():
    return np.random.default_rng(20240901)


@pytest.fixture
def data_dir():
    return DATA


_VERDICTS = []


class Verdict:
    """Record one acceptance line; ``check`` prints it and fails the test if needed."""

    def __init__(self, label):
        self.label = label

    def check(self, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'}  {self.label}: {detail}"
        _VERDICTS.append(line)
        print(line)
        assert ok, line


@pytest.fixture
def verdict(request):
    marker = request.node.get_closest_marker("criterion")
    return Verdict(marker.args[0] if marker else request.node.name)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion reported in the summary")


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in _VERDICTS:
            terminalreporter.write_line(line)
