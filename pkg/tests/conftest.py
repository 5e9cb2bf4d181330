import random

import pytest

from streampart.graph import StreamGraph

# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}


def random_graph(n: int, p: float, seed: int, weighted: bool = False) -> StreamGraph:
    rng = random.Random(seed)
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                edges.append((u, v, rng.randint(1, 9) if weighted else 1))
    nw = [rng.randint(1, 4) for _ in range(n)] if weighted else None
    return StreamGraph.from_edges(n, edges, node_weights=nw)


@pytest.fixture
def path3():
    return StreamGraph.from_edges(3, [(0, 1), (1, 2)])


@pytest.fixture
def triangle():
    return StreamGraph.from_edges(3, [(0, 1), (0, 2), (1, 2)])


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[num]
        terminalreporter.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {detail}")
