"""Shared test helpers: independent oracles and small instance builders."""
import numpy as np
import pytest

from kmedsample import Dataset, GraphBackend


def floyd_warshall(n, edges):
    """All-pairs shortest paths by min-plus iteration; the independent oracle
    the graph backend is checked against."""
    D = np.full((n, n), np.inf)
    np.fill_diagonal(D, 0.0)
    for u, v, w in edges:
        if w < D[u, v]:
            D[u, v] = w
            D[v, u] = w
    for k in range(n):
        D = np.minimum(D, D[:, [k]] + D[[k], :])
    return D


def random_int_graph(rng, nv, extra_edges=None):
    """Connected graph with small integer weights (exact float arithmetic)."""
    if extra_edges is None:
        extra_edges = int(rng.integers(0, nv))
    edges = {}
    order = rng.permutation(nv)
    for i in range(1, nv):
        u, v = int(order[i]), int(order[rng.integers(0, i)])
        edges[(min(u, v), max(u, v))] = int(rng.integers(1, 100))
    attempts = 0
    while len(edges) < nv - 1 + extra_edges and attempts < 10 * nv:
        u, v = int(rng.integers(0, nv)), int(rng.integers(0, nv))
        attempts += 1
        if u != v and (min(u, v), max(u, v)) not in edges:
            edges[(min(u, v), max(u, v))] = int(rng.integers(1, 100))
    edge_list = [(u, v, float(w)) for (u, v), w in sorted(edges.items())]
    return GraphBackend(nv, edge_list), nv, edge_list


def exhaustive_kmedian_1d(values, k):
    """Brute-force 1D k-median over data-point centers, in plain Python.

    Independent of the package's oracles; used to pin expected values.
    """
    from itertools import combinations

    vals = list(values)
    distinct = sorted(set(vals))
    kk = min(k, len(distinct))
    best = float("inf")
    best_set = None
    for combo in combinations(distinct, kk):
        c = sum(min(abs(x - ctr) for ctr in combo) for x in vals)
        if c < best:
            best = c
            best_set = combo
    return best, best_set


@pytest.fixture
def four_points_1d():
    return Dataset.from_points([[0.0], [1.0], [10.0], [11.0]])
