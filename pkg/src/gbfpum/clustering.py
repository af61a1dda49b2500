"""Partitions of graph nodes: modularity scoring, built-in clusterers,
random cosine features, modularity-driven selection of the community count,
and import of externally computed partitions.

All clusterers are deterministic for a fixed seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DuplicateNodeError,
    EmptyEdgeSetError,
    EmptyRangeError,
    MissingCoordinatesError,
    MissingNodeError,
    ParseError,
    TooManyClustersError,
)
from .graph import Graph, LaplacianKind, laplacian
from .spectral import eigendecompose

_GAIN_TOL = 1e-12
_KMEANS_SHIFT_TOL = 1e-8
_KMEANS_MAX_ITER = 100

#: Built-in clusterer identifiers accepted by select_partition_by_modularity.
BUILTIN_METHODS = ("greedy", "spectral", "filtered")


@dataclass(frozen=True, eq=False)
class Partition:
    """Disjoint, covering community labeling: ``labels[v]`` in [0, J) with
    every community nonempty. Build through :meth:`from_labels`, which
    densifies arbitrary label values in ascending order."""

    labels: np.ndarray

    @classmethod
    def from_labels(cls, labels) -> "Partition":
        labels = np.asarray(labels, dtype=np.int64)
        if labels.ndim != 1 or labels.size == 0:
            raise ValueError("labels must be a nonempty 1-d sequence")
        _, dense = np.unique(labels, return_inverse=True)
        dense = dense.astype(np.int64)
        dense.setflags(write=False)
        return cls(labels=dense)

    @property
    def n_communities(self) -> int:
        return int(self.labels.max()) + 1

    def communities(self) -> list[np.ndarray]:
        return [
            np.flatnonzero(self.labels == c) for c in range(self.n_communities)
        ]


def modularity(g: Graph, p: Partition) -> float:
    """Newman modularity Q of a partition.

    Q = (1/2m) sum_{i,j} (A_ij - d_i d_j / 2m) [label_i == label_j], summed
    over all ordered node pairs including i = j. Always in [-1, 1].
    """
    if g.m < 1:
        raise EmptyEdgeSetError("modularity needs at least one edge")
    labels = p.labels
    if labels.shape != (g.n,):
        raise ValueError(
            f"partition labels {labels.shape} do not fit graph of size {g.n}"
        )
    two_m = 2.0 * g.m
    j = p.n_communities
    internal = np.zeros(j)
    for u, v in g.edges:
        if labels[u] == labels[v]:
            internal[labels[u]] += 2.0  # both ordered orientations
    deg_sum = np.bincount(labels, weights=g.degrees().astype(float), minlength=j)
    return float(np.sum(internal / two_m - (deg_sum / two_m) ** 2))


def greedy_modularity_partition(g: Graph, seed: int) -> Partition:
    """Greedy modularity maximization (Louvain scheme).

    Starts from singletons; repeatedly moves each node (in a seed-shuffled
    order) to the neighboring community with the largest positive modularity
    gain, then aggregates communities into supernodes and repeats until no
    move gains more than 1e-12.
    """
    if g.m < 1:
        raise EmptyEdgeSetError("community detection needs at least one edge")
    rng = np.random.default_rng(seed)

    # Level state: per-node neighbor weights (no self entries) and loop
    # weight counted as ordered pairs, so strengths always sum to 2m.
    neighbors: list[dict[int, float]] = [dict() for _ in range(g.n)]
    for u, v in g.edges:
        neighbors[u][v] = neighbors[u].get(v, 0.0) + 1.0
        neighbors[v][u] = neighbors[v].get(u, 0.0) + 1.0
    loops = [0.0] * g.n
    membership = np.arange(g.n)  # original node -> current community label

    two_m = 2.0 * g.m
    while True:
        n_level = len(neighbors)
        strength = [sum(nbrs.values()) + loops[i] for i, nbrs in enumerate(neighbors)]
        comm = list(range(n_level))
        comm_tot = strength.copy()

        order = rng.permutation(n_level)
        moved_any = False
        while True:
            moved = 0
            for i in order:
                ci = comm[i]
                k_in: dict[int, float] = {}
                for jn, w in neighbors[i].items():
                    cj = comm[jn]
                    k_in[cj] = k_in.get(cj, 0.0) + w
                comm_tot[ci] -= strength[i]
                # score(c) is 2m * m * dQ of inserting i into c, up to the
                # shared constant; differences order identically to dQ.
                stay = k_in.get(ci, 0.0) - strength[i] * comm_tot[ci] / two_m
                best_c, best_score = ci, stay
                for c, k in k_in.items():
                    score = k - strength[i] * comm_tot[c] / two_m
                    if score > best_score:
                        best_c, best_score = c, score
                gain = 2.0 * (best_score - stay) / two_m  # back to Q units
                if best_c != ci and gain > _GAIN_TOL:
                    comm[i] = best_c
                    comm_tot[best_c] += strength[i]
                    moved += 1
                else:
                    comm_tot[ci] += strength[i]
            if moved == 0:
                break
            moved_any = True

        labels_level, dense = np.unique(comm, return_inverse=True)
        n_next = labels_level.size
        if not moved_any or n_next == n_level:
            membership = dense[membership] if moved_any else membership
            break
        membership = dense[membership]

        # Aggregate communities into supernodes.
        new_neighbors: list[dict[int, float]] = [dict() for _ in range(n_next)]
        new_loops = [0.0] * n_next
        for i, nbrs in enumerate(neighbors):
            ci = dense[i]
            new_loops[ci] += loops[i]
            for jn, w in nbrs.items():
                cj = dense[jn]
                if ci == cj:
                    new_loops[ci] += w  # already ordered-pair weight
                else:
                    new_neighbors[ci][cj] = new_neighbors[ci].get(cj, 0.0) + w
        neighbors = new_neighbors
        loops = new_loops

    return Partition.from_labels(membership)


def feature_map(coords, w) -> np.ndarray:
    """Elementwise cosine of the projected coordinates, cos(X W)."""
    return np.cos(np.asarray(coords, dtype=float) @ np.asarray(w, dtype=float))


def random_feature_matrix(coords, k: int, seed: int) -> np.ndarray:
    """Random cosine feature matrix cos(X W), W a 2 x k matrix with i.i.d.
    standard-normal entries from a PCG64 generator seeded with ``seed``.
    Entries land in [-1, 1]."""
    if coords is None:
        raise MissingCoordinatesError("feature matrix needs node coordinates")
    if k < 1:
        raise ValueError(f"feature dimension must be >= 1, got {k}")
    coords = np.asarray(coords, dtype=float)
    w = np.random.default_rng(seed).standard_normal((coords.shape[1], k))
    return feature_map(coords, w)


def kmeans(points, n_clusters: int, seed: int) -> Partition:
    """Lloyd's k-means with k-means++ initialization.

    Stops when the largest centroid shift is <= 1e-8 or after 100 iterations.
    A cluster that empties is re-seeded from the point farthest from its
    assigned centroid. Labels are densified, so fewer than ``n_clusters``
    communities may come back when clusters collapse.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2:
        raise ValueError(f"points must be 2-d, got shape {pts.shape}")
    n = pts.shape[0]
    if n_clusters > n:
        raise TooManyClustersError(f"{n_clusters} clusters for {n} points")
    if n_clusters < 1:
        raise ValueError("need at least one cluster")
    rng = np.random.default_rng(seed)

    centroids = np.empty((n_clusters, pts.shape[1]))
    centroids[0] = pts[rng.integers(n)]
    d2 = ((pts - centroids[0]) ** 2).sum(axis=1)
    for c in range(1, n_clusters):
        total = d2.sum()
        if total > 0.0:
            idx = rng.choice(n, p=d2 / total)
        else:
            idx = rng.integers(n)
        centroids[c] = pts[idx]
        d2 = np.minimum(d2, ((pts - centroids[c]) ** 2).sum(axis=1))

    sq = (pts ** 2).sum(axis=1)
    labels = np.zeros(n, dtype=np.int64)
    for _ in range(_KMEANS_MAX_ITER):
        dist = np.maximum(
            sq[:, None] + (centroids ** 2).sum(axis=1)[None, :]
            - 2.0 * pts @ centroids.T,
            0.0,
        )
        labels = dist.argmin(axis=1)
        own = dist[np.arange(n), labels].copy()
        new_centroids = centroids.copy()
        for c in range(n_clusters):
            members = labels == c
            if members.any():
                new_centroids[c] = pts[members].mean(axis=0)
            else:
                far = int(own.argmax())
                new_centroids[c] = pts[far]
                labels[far] = c
                own[far] = -1.0  # keep later empty clusters off this point
        shift = np.sqrt(((new_centroids - centroids) ** 2).sum(axis=1)).max()
        centroids = new_centroids
        if shift <= _KMEANS_SHIFT_TOL:
            break
    dist = np.maximum(
        sq[:, None] + (centroids ** 2).sum(axis=1)[None, :]
        - 2.0 * pts @ centroids.T,
        0.0,
    )
    return Partition.from_labels(dist.argmin(axis=1))


def spectral_embedding_partition(g: Graph, n_clusters: int, seed: int) -> Partition:
    """Classic spectral clustering: k-means on the rows of the first
    ``n_clusters`` eigenvectors of the normalized Laplacian, each row scaled
    to unit length (zero rows left alone)."""
    if g.m < 1:
        raise EmptyEdgeSetError("spectral embedding needs at least one edge")
    basis = eigendecompose(laplacian(g, LaplacianKind.NORMALIZED))
    emb = np.array(basis.eigenvectors[:, :n_clusters])
    norms = np.sqrt((emb ** 2).sum(axis=1))
    nonzero = norms > 0
    emb[nonzero] /= norms[nonzero, None]
    return kmeans(emb, n_clusters, seed)


def filtered_feature_partition(
    g: Graph, features, n_clusters: int, t_max: int, seed: int
) -> tuple[Partition, int]:
    """Low-pass-filtered feature clustering.

    Applies the filter (I - L_n/2)^t to the feature rows iteratively for
    t = 1..t_max, clusters each filtered matrix with k-means, and keeps the
    t whose partition scores the highest modularity (ties -> smallest t).
    Returns (partition, chosen t).
    """
    if t_max < 1:
        raise ValueError(f"t_max must be >= 1, got {t_max}")
    feats = np.asarray(features, dtype=float)
    if feats.shape[0] != g.n:
        raise ValueError(
            f"feature matrix has {feats.shape[0]} rows for {g.n} nodes"
        )
    ln = laplacian(g, LaplacianKind.NORMALIZED)
    h = feats.copy()
    best: tuple[float, int, Partition] | None = None
    for t in range(1, t_max + 1):
        h = h - (ln @ h) / 2.0
        part = kmeans(h, n_clusters, seed)
        q = modularity(g, part)
        if best is None or q > best[0]:
            best = (q, t, part)
    assert best is not None
    return best[2], best[1]


def select_partition_by_modularity(
    g: Graph,
    method: str,
    j_range,
    *,
    seed: int = 0,
    features=None,
    t_max: int = 10,
) -> tuple[Partition, int, float]:
    """Sweep the community count over ``j_range`` for the given built-in
    method and keep the partition with the highest modularity.

    Ties break toward the smallest candidate J. Returns the winning
    partition, its count of nonempty communities, and its modularity. The
    "greedy" method determines its own community count, so it runs once and
    the sweep values are ignored. "filtered" requires a feature matrix.
    """
    j_values = sorted({int(j) for j in j_range})
    if not j_values:
        raise EmptyRangeError("community-count range is empty")
    for j in j_values:
        if not (1 <= j <= g.n):
            raise ValueError(f"community count {j} outside [1, {g.n}]")
    if method not in BUILTIN_METHODS:
        raise ValueError(
            f"unknown method {method!r}; expected one of {BUILTIN_METHODS}"
        )

    if method == "greedy":
        candidates = [greedy_modularity_partition(g, seed)]
    elif method == "spectral":
        candidates = [
            spectral_embedding_partition(g, j, seed) for j in j_values
        ]
    else:
        if features is None:
            raise MissingCoordinatesError(
                "filtered method needs a feature matrix"
            )
        candidates = [
            filtered_feature_partition(g, features, j, t_max, seed)[0]
            for j in j_values
        ]

    best_part, best_q = None, -np.inf
    for part in candidates:
        q = modularity(g, part)
        if q > best_q:
            best_part, best_q = part, q
    assert best_part is not None
    return best_part, best_part.n_communities, best_q


def import_partition(path, n: int) -> Partition:
    """Read a partition file: one "node_id community_id" line per node, in
    any order, '#' comments allowed. Labels are densified to [0, J).

    Raises :class:`MissingNodeError` / :class:`DuplicateNodeError` when the
    file does not label each of the ``n`` nodes exactly once.
    """
    raw = np.full(n, -1, dtype=np.int64)
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            tokens = line.split()
            if len(tokens) != 2:
                raise ParseError(
                    f"{path}:{lineno}: expected 'node_id community_id'"
                )
            try:
                node, label = int(tokens[0]), int(tokens[1])
            except ValueError:
                raise ParseError(
                    f"{path}:{lineno}: ids must be integers"
                ) from None
            if not (0 <= node < n):
                raise ParseError(
                    f"{path}:{lineno}: node {node} outside [0, {n})"
                )
            if raw[node] != -1:
                raise DuplicateNodeError(
                    f"{path}:{lineno}: node {node} labeled twice"
                )
            raw[node] = label
    missing = np.flatnonzero(raw == -1)
    if missing.size:
        raise MissingNodeError(f"{path}: node {missing[0]} has no label")
    return Partition.from_labels(raw)


def save_partition(p: Partition, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for node, label in enumerate(p.labels):
            fh.write(f"{node} {label}\n")
