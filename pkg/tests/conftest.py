import numpy as np
import pytest

from leeyang.graph import generate

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def acceptance_log():
    return _ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def small_connected_graphs():
    """Connected test graphs with n <= 8 across all generator families."""
    out = [generate("path", n=n) for n in range(1, 7)]
    out += [generate("cycle", n=n) for n in (3, 4, 5, 6)]
    out += [generate("complete", n=n) for n in (2, 3, 4, 5)]
    out += [generate("grid", rows=2, cols=c) for c in (2, 3)]
    for seed in range(6):
        g = generate("gnp", n=7, p=0.5, seed=seed)
        if g.is_connected():
            out.append(g)
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
