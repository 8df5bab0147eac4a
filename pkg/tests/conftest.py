"""
Shared fixtures for the hopsets test suite.
"""

from typing import Callable, List

import networkx as nx
import numpy as np
import pytest

from hopsets.constants import INF
from hopsets.graph import Graph
from hopsets.graphio import random_graph


def nx_distances(G: Graph) -> List[List[float]]:
    """All-pairs distances from networkx's Floyd-Warshall, INF when unreachable."""
    fw = nx.floyd_warshall(G.to_networkx(), weight="weight")
    return [[fw[u][v] for v in range(G.n)] for u in range(G.n)]


def random_instance(n: int, seed: int, W: int = 10, density: int = 2) -> Graph:
    """A connected random graph with about ``density * n`` edges."""
    m = min(max(n - 1, density * n), n * (n - 1) // 2)
    return random_graph(n, m, W, seed)


def sparse_instance(n: int, seed: int, W: int = 5) -> Graph:
    """A possibly disconnected graph: each pair kept with probability 3/n."""
    rng = np.random.Generator(np.random.PCG64(seed))
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < 3 / max(n, 3):
                edges.append((u, v, int(rng.integers(1, W + 1))))
    return Graph(n, edges, W=W)


@pytest.fixture
def path3() -> Graph:
    """0 - 1 - 2 with unit weights."""
    return Graph(3, [(0, 1, 1), (1, 2, 1)])


@pytest.fixture
def path4() -> Graph:
    return Graph(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1)])


@pytest.fixture
def triangle() -> Graph:
    """Weights 0-1: 1, 1-2: 1, 0-2: 3."""
    return Graph(3, [(0, 1, 1), (1, 2, 1), (0, 2, 3)])


@pytest.fixture
def star() -> Graph:
    """Center 0 with unit edges to 1, 2 and 3."""
    return Graph(4, [(0, 1, 1), (0, 2, 1), (0, 3, 1)])


@pytest.fixture
def grid3() -> Graph:
    g = nx.convert_node_labels_to_integers(nx.grid_2d_graph(3, 3), ordering="sorted")
    return Graph(9, [(min(u, v), max(u, v), 1) for u, v in g.edges()])


@pytest.fixture
def k5() -> Graph:
    return Graph(5, [(u, v, 1) for u in range(5) for v in range(u + 1, 5)])


@pytest.fixture
def weighted_path() -> Graph:
    """0 - 1 - ... - 8 with weights 3, 1, 4, 1, 5, 2, 6, 2."""
    weights = [3, 1, 4, 1, 5, 2, 6, 2]
    return Graph(9, [(i, i + 1, w) for i, w in enumerate(weights)], W=6)


@pytest.fixture
def graph_factory() -> Callable[..., Graph]:
    """Seeded connected random graphs: ``graph_factory(n, seed, W=10)``."""
    return random_instance


@pytest.fixture
def single_threaded(monkeypatch):
    monkeypatch.setenv("HOPSET_THREADS", "1")


@pytest.fixture
def inf() -> float:
    return INF
