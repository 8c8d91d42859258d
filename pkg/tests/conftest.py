import itertools

import pytest
from hypothesis import settings

from subdivlab.graphs import BipartiteGraph, GeneralGraph, build_bipartite

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def naive_contains(G: GeneralGraph, H: GeneralGraph) -> bool:
    """All injections V(H) -> V(G); only for tiny inputs."""
    h_edges = list(H.edges())
    for image in itertools.permutations(range(G.n), H.n):
        if all(G.has_edge(image[u], image[v]) for u, v in h_edges):
            return True
    return False


def naive_codegree(G: BipartiteGraph, u: int, v: int) -> int:
    return len(set(G.neighbours(u)) & set(G.neighbours(v)))


def complete_bipartite(a: int, b: int) -> BipartiteGraph:
    return build_bipartite(a, b, [(i, j) for i in range(a) for j in range(b)])


@pytest.fixture
def k_50_50():
    return complete_bipartite(50, 50)


ACCEPTANCE: dict[int, str] = {}


def record(criterion: int, passed: bool, detail: str) -> None:
    line = f"criterion {criterion:2d}: {'PASS' if passed else 'FAIL'} - {detail}"
    ACCEPTANCE[criterion] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
