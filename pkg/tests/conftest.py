import numpy as np
import pytest

from gbfpum.graph import Graph, build_graph


@pytest.fixture
def p2() -> Graph:
    return build_graph(2, [(0, 1)])


@pytest.fixture
def p4() -> Graph:
    return build_graph(4, [(0, 1), (1, 2), (2, 3)])


@pytest.fixture
def p6() -> Graph:
    return build_graph(6, [(i, i + 1) for i in range(5)])


@pytest.fixture
def k4() -> Graph:
    return build_graph(4, [(u, v) for u in range(4) for v in range(u + 1, 4)])


@pytest.fixture
def two_triangles() -> Graph:
    coords = np.array(
        [[0.0, 0.0], [0.2, 0.0], [0.0, 0.2], [5.0, 5.0], [5.2, 5.0], [5.0, 5.2]]
    )
    return build_graph(
        6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)], coords=coords
    )


def random_graph(rng, n, p=0.2, ensure_edge=True) -> Graph:
    """Erdos-Renyi-style test graph with at least one edge by default."""
    edges = [
        (u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p
    ]
    if ensure_edge and not edges and n >= 2:
        edges = [(0, 1)]
    return build_graph(n, edges)


def random_partition_labels(rng, n, max_j=6) -> np.ndarray:
    return rng.integers(0, int(rng.integers(1, max_j + 1)), size=n)


def modularity_bruteforce(g: Graph, labels) -> float:
    """O(n^2) ordered-pair double sum, the independent modularity oracle."""
    a = g.adjacency_matrix()
    d = a.sum(axis=1)
    two_m = 2.0 * g.m
    q = 0.0
    for i in range(g.n):
        for j in range(g.n):
            if labels[i] == labels[j]:
                q += a[i, j] - d[i] * d[j] / two_m
    return q / two_m


def floyd_warshall_hops(g: Graph) -> np.ndarray:
    """All-pairs hop counts by Floyd-Warshall, the BFS oracle."""
    big = np.inf
    dist = np.full((g.n, g.n), big)
    np.fill_diagonal(dist, 0.0)
    for u, v in g.edges:
        dist[u, v] = dist[v, u] = 1.0
    for k in range(g.n):
        dist = np.minimum(dist, dist[:, k, None] + dist[None, k, :])
    return dist
