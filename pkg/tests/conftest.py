import numpy as np
import pytest

from filastab.curve_geometry import build_curve, compute_frame


@pytest.fixture(scope="session")
def circle2():
    curve = build_curve({"family": "circle", "radius": 2.0, "turns": 1}, 2000)
    return curve, compute_frame(curve)


@pytest.fixture(scope="session")
def helix11():
    curve = build_curve({"family": "helix", "a": 1.0, "b": 1.0, "turns": 1}, 2000)
    return curve, compute_frame(curve)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    module = __import__("sys").modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number][1])
