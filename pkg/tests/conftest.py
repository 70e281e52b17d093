import random

import pytest

from streammatch import Graph

# criterion number -> (passed, detail); filled in by test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


def random_small_bipartite(rng: random.Random, max_side: int = 4, max_edges: int = 24,
                           min_side: int = 0, dense: bool = False) -> Graph:
    nl, nr = rng.randint(min_side, max_side), rng.randint(min_side, max_side)
    pairs = [(a, nl + b) for a in range(nl) for b in range(nr)]
    top = min(len(pairs), max_edges)
    k = rng.randint(top // 3 if dense else 0, top)
    return Graph.bipartite(nl, nr, rng.sample(pairs, k))


def random_small_general(rng: random.Random, max_n: int = 8, max_edges: int = 24, w_max: int = 10,
                         min_n: int = 0, dense: bool = False) -> Graph:
    n = rng.randint(min_n, max_n)
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    top = min(len(pairs), max_edges)
    k = rng.randint(top // 3 if dense else 0, top)
    return Graph(n, [(a, b, rng.randint(1, w_max)) for a, b in rng.sample(pairs, k)])


@pytest.fixture
def rng():
    return random.Random(12345)
