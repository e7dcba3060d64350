import numpy as np
import pytest


def central_diff(f, x, i, rel=1e-6):
    """Central difference of a float-valued f along coordinate i."""
    x = np.asarray(x, dtype=float)
    h = rel * max(1.0, abs(x[i]))
    e = np.zeros_like(x)
    e[i] = h
    return (f(x + e) - f(x - e)) / (2 * h)


def fd_gradient(f, x, rel=1e-6):
    return np.array([central_diff(f, x, i, rel) for i in range(len(x))])


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
