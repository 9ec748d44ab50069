import numpy as np
import pytest
from hypothesis import settings

from lewis_ermp.graph import build_graph, random_tree

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_connected_graph(n, extra, seed):
    """Random tree plus ``extra`` random chords."""
    r = np.random.default_rng(seed)
    T = random_tree(n, seed)
    edges = [tuple(e) for e in T.edge_list()]
    for _ in range(extra):
        a, b = r.choice(n, size=2, replace=False)
        edges.append((int(a), int(b)))
    return build_graph(edges)


# criterion lines collected by test_acceptance and printed at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
