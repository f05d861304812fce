"""Generators for adversarial lower-bound families and balanced synthetics.

Two 1D adversarial families:

  * ``gen_thm3`` -- a two-cluster instance with a small cluster of
    ``floor(beta*n/2)`` points at value t (t in {1, 2}, random index set) and
    the rest at 0.  Its optimal 2-median cost is 0 and its balancedness is
    (about) beta, so any sampler using o(1/beta) points usually misses the
    small cluster and cannot recover the second center.

  * ``gen_lemma5`` -- four groups at 0, 1, w, w+f with sizes n, n, n and
    ``floor(n/(1.01*f))``; w stands in for "arbitrarily far".  The optimal
    3-median is {0, 1, w}, but any sample containing a far point forces the
    sample-optimal solution to spend a center there, which costs a constant
    factor more on the full instance.  The far-group size is rounded DOWN so
    that {0, 1, w} stays the strict optimum (rounding to nearest can tie it
    with the adversarial solutions); the descriptor records the actual count.

Plus balanced Gaussian mixtures and random connected weighted graphs for
the property suites.  Every generator is deterministic per seed and records
its parameters in an ``InstanceDescriptor`` attached to the dataset.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
import numpy as np

from .core import Dataset
from .errors import InvalidInputError
from .metric import EuclideanBackend, GraphBackend

__all__ = [
    "InstanceDescriptor",
    "gen_thm3",
    "gen_lemma5",
    "gen_gaussian_mixture",
    "gen_graph_random",
    "from_descriptor",
]


@dataclass(frozen=True)
class InstanceDescriptor:
    """Family tag, parameters, and seed of a generated instance.

    ``derived`` holds quantities fixed by the construction (group sizes,
    rounding outcomes, closed-form optima) for tests and reports.
    """

    family: str
    params: dict
    seed: int
    derived: dict = field(default_factory=dict)


def gen_thm3(n: int, beta: float, t: int = 1, seed: int = 0) -> Dataset:
    """Two-location 1D family: ``floor(beta*n/2)`` points at t, the rest at 0."""
    if not (0.0 < beta <= 1.0):
        raise InvalidInputError("beta must lie in (0, 1]")
    if t not in (1, 2):
        raise InvalidInputError("t must be 1 or 2")
    if n < 10.0 / beta:
        raise InvalidInputError(f"n must be at least 10/beta = {10.0 / beta:g}")
    # Floor of beta*n/2, nudged so exactly-integral products survive float fuzz.
    m_t = int(beta * n / 2 + 1e-9)
    rng = np.random.default_rng(seed)
    pi = rng.choice(n, size=m_t, replace=False)
    coords = np.zeros((n, 1))
    coords[pi, 0] = float(t)
    desc = InstanceDescriptor(
        family="thm3",
        params={"n": n, "beta": beta, "t": t},
        seed=seed,
        derived={
            "t_cluster_size": m_t,
            "t_cluster_ids": tuple(int(i) for i in np.sort(pi)),
            "optimal_cost": 0.0,
            "balancedness": 2 * m_t / n,
        },
    )
    return Dataset(EuclideanBackend(coords), descriptor=desc)


def gen_lemma5(n: int, f: int, w: float, seed: int = 0) -> Dataset:
    """Four-group 1D family at 0, 1, w, w+f; far group of ``floor(n/(1.01 f))``."""
    if not (3 <= f < n / 2):
        raise InvalidInputError("need 3 <= f < n/2")
    if w < 100.0 * n:
        raise InvalidInputError("w must be at least 100*n to stand in for w -> infinity")
    far = max(1, int(n / (1.01 * f) + 1e-9))
    coords = np.concatenate(
        [
            np.zeros(n),
            np.ones(n),
            np.full(n, float(w)),
            np.full(far, float(w) + float(f)),
        ]
    ).reshape(-1, 1)
    rng = np.random.default_rng(seed)
    perm = rng.permutation(coords.shape[0])
    coords = coords[perm]
    far_ids = np.nonzero(coords[:, 0] == float(w) + float(f))[0]
    desc = InstanceDescriptor(
        family="lemma5",
        params={"n": n, "f": f, "w": w},
        seed=seed,
        derived={
            "far_count": far,
            "total_size": 3 * n + far,
            "far_ids": tuple(int(i) for i in far_ids),
            "group_values": (0.0, 1.0, float(w), float(w) + float(f)),
            # cost of the optimal 3-median {0, 1, w}: every far point pays f.
            "optimal_cost": float(far * f),
        },
    )
    return Dataset(EuclideanBackend(coords), descriptor=desc)


def gen_gaussian_mixture(
    k: int,
    per_cluster: int,
    d: int = 1,
    separation: float = 100.0,
    spread: float = 1.0,
    seed: int = 0,
) -> Dataset:
    """k clusters of exactly ``per_cluster`` points on a scaled grid.

    Cluster centers sit on an axis-aligned integer grid scaled by
    ``separation`` (so pairwise center distance is at least ``separation``),
    with i.i.d. normal noise of scale ``spread`` per coordinate.
    """
    if k < 1 or per_cluster < 1 or d < 1:
        raise InvalidInputError("k, per_cluster and d must be positive")
    if separation <= 0 or spread < 0:
        raise InvalidInputError("separation must be positive and spread nonnegative")
    side = math.ceil(k ** (1.0 / d))
    grid = np.stack(np.meshgrid(*[np.arange(side)] * d, indexing="ij"), axis=-1)
    centers = grid.reshape(-1, d)[:k].astype(np.float64) * separation
    rng = np.random.default_rng(seed)
    coords = np.repeat(centers, per_cluster, axis=0)
    if spread > 0:
        coords = coords + rng.normal(scale=spread, size=coords.shape)
    desc = InstanceDescriptor(
        family="gaussian_mixture",
        params={
            "k": k,
            "per_cluster": per_cluster,
            "d": d,
            "separation": separation,
            "spread": spread,
        },
        seed=seed,
        derived={"cluster_centers": centers.tolist(), "total_size": k * per_cluster},
    )
    return Dataset(EuclideanBackend(coords), descriptor=desc)


def gen_graph_random(nv: int, ne: int, wmax: float = 1.0, seed: int = 0) -> GraphBackend:
    """Connected undirected weighted graph: random spanning tree plus extras.

    Edge weights are uniform on (0, wmax].  Connectivity holds for every
    seed by construction.
    """
    if nv < 1:
        raise InvalidInputError("graph needs at least one vertex")
    max_edges = nv * (nv - 1) // 2
    if not (nv - 1 <= ne <= max_edges):
        raise InvalidInputError(
            f"edge count must lie in [{nv - 1}, {max_edges}] for {nv} vertices"
        )
    if wmax <= 0:
        raise InvalidInputError("wmax must be positive")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(nv)
    edges = set()
    for i in range(1, nv):
        u = int(perm[i])
        v = int(perm[rng.integers(0, i)])
        edges.add((min(u, v), max(u, v)))
    while len(edges) < ne:
        u = int(rng.integers(0, nv))
        v = int(rng.integers(0, nv))
        if u != v:
            edges.add((min(u, v), max(u, v)))
    weights = (1.0 - rng.random(len(edges))) * wmax
    edge_list = [(u, v, float(w)) for (u, v), w in zip(sorted(edges), weights)]
    return GraphBackend(nv, edge_list)


def from_descriptor(desc: InstanceDescriptor):
    """Rebuild an instance from its descriptor (generator dispatch)."""
    generators = {
        "thm3": gen_thm3,
        "lemma5": gen_lemma5,
        "gaussian_mixture": gen_gaussian_mixture,
        "graph_random": gen_graph_random,
    }
    if desc.family not in generators:
        raise InvalidInputError(f"unknown instance family {desc.family!r}")
    return generators[desc.family](seed=desc.seed, **desc.params)
