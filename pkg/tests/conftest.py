import numpy as np
import pytest
from hypothesis import settings, strategies as st

from quasicert.graph import SimpleGraph

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@st.composite
def graphs(draw, min_n=1, max_n=9):
    n = draw(st.integers(min_n, max_n))
    bits = draw(st.lists(st.booleans(), min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2))
    adj = np.zeros((n, n), dtype=np.uint8)
    iu, ju = np.triu_indices(n, 1)
    hit = np.array(bits, dtype=bool)
    adj[iu[hit], ju[hit]] = 1
    adj[ju[hit], iu[hit]] = 1
    return SimpleGraph(adj)


def random_graph(rng, n, p=0.5):
    adj = np.zeros((n, n), dtype=np.uint8)
    iu, ju = np.triu_indices(n, 1)
    hit = rng.random(len(iu)) < p
    adj[iu[hit], ju[hit]] = 1
    adj[ju[hit], iu[hit]] = 1
    return SimpleGraph(adj)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
