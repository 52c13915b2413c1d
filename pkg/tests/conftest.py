import numpy as np
import pytest
from hypothesis import settings

from rainbowrc.genreg import sample_simple_regular
from rainbowrc.graphcore import SimpleGraph

settings.register_profile("fast", max_examples=10)
settings.register_profile("ci", max_examples=60, deadline=None)
settings.load_profile("ci")


def regular(n, r, seed):
    g, _ = sample_simple_regular(n, r, np.random.default_rng(seed))
    return g


@pytest.fixture(scope="session")
def g500():
    return regular(500, 4, 2024)


def triangle_with_tail(tail=3):
    """Triangle 0-1-2 with a pendant path 0-3-4-... of ``tail`` edges."""
    edges = [(0, 1), (1, 2), (0, 2), (0, 3)] + [(3 + i, 4 + i) for i in range(tail - 1)]
    return SimpleGraph.from_edges(3 + tail, edges)


def complete_binary_tree(height):
    n = 2 ** (height + 1) - 1
    return SimpleGraph.from_edges(n, [((v - 1) // 2, v) for v in range(1, n)])


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
