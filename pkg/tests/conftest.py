import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20261014)


def circle_points(m):
    """``m`` equally spaced unit vectors on the half circle (degree-0 ratios
    are even, so the half circle covers every direction)."""
    th = np.linspace(0.0, np.pi, m, endpoint=False)
    return np.stack([np.cos(th), np.sin(th)], axis=1)


def sphere_points(rng, m, n):
    X = rng.standard_normal((m, n))
    return X / np.linalg.norm(X, axis=1, keepdims=True)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
