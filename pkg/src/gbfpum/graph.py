"""Simple undirected graphs: construction, Laplacians, BFS, subgraphs, file I/O.

Node indices are 0-based everywhere, including the file formats. All types
are immutable after construction; every function here is pure.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import (
    CoordCountMismatchError,
    EmptyNodeSetError,
    EmptySourceSetError,
    IndexOutOfRangeError,
    LoopEdgeError,
    ParseError,
)

#: Sentinel in hop-distance arrays for nodes in another component.
UNREACHABLE = -1


@dataclass(frozen=True, eq=False)
class Graph:
    """A simple graph: ``n`` nodes, a canonical sorted tuple of edges ``(u, v)``
    with ``u < v``, and optional per-node ``(x, y)`` coordinates.

    Use :func:`build_graph` (or the generators/loaders below) instead of the
    raw constructor; they establish the canonical edge form.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    coords: np.ndarray | None = field(default=None)

    def __post_init__(self):
        if self.coords is not None:
            c = np.ascontiguousarray(self.coords, dtype=float)
            if c.shape != (self.n, 2):
                raise CoordCountMismatchError(
                    f"expected {self.n} coordinate rows, got {c.shape}"
                )
            c.setflags(write=False)
            object.__setattr__(self, "coords", c)

    @property
    def m(self) -> int:
        return len(self.edges)

    def degrees(self) -> np.ndarray:
        d = np.zeros(self.n, dtype=np.int64)
        for u, v in self.edges:
            d[u] += 1
            d[v] += 1
        return d

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for u, v in self.edges:
            a[u, v] = 1.0
            a[v, u] = 1.0
        return a

    def adjacency_lists(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj


class LaplacianKind(Enum):
    COMBINATORIAL = "combinatorial"
    NORMALIZED = "normalized"


def build_graph(n: int, edge_list, coords=None) -> Graph:
    """Build a simple graph from an edge list.

    Duplicate edges (in either orientation) are merged silently; loops are
    rejected. Raises :class:`LoopEdgeError` or :class:`IndexOutOfRangeError`.
    """
    if n < 1:
        raise ValueError(f"node count must be >= 1, got {n}")
    seen: set[tuple[int, int]] = set()
    for u, v in edge_list:
        u, v = int(u), int(v)
        if u == v:
            raise LoopEdgeError(f"loop edge ({u}, {v}) is not allowed")
        if not (0 <= u < n) or not (0 <= v < n):
            raise IndexOutOfRangeError(f"edge ({u}, {v}) outside [0, {n})")
        seen.add((u, v) if u < v else (v, u))
    return Graph(n=n, edges=tuple(sorted(seen)), coords=coords)


def laplacian(g: Graph, kind: LaplacianKind) -> np.ndarray:
    """Dense Laplacian of ``g``.

    ``COMBINATORIAL`` gives D - A. ``NORMALIZED`` gives
    I - D^(-1/2) A D^(-1/2), where an isolated node contributes an identity
    row (the 0^(-1/2) factors are taken as 0, keeping the matrix symmetric
    positive semidefinite).
    """
    a = g.adjacency_matrix()
    d = g.degrees().astype(float)
    if kind is LaplacianKind.COMBINATORIAL:
        return np.diag(d) - a
    if kind is LaplacianKind.NORMALIZED:
        with np.errstate(divide="ignore"):
            inv_sqrt = 1.0 / np.sqrt(d)
        inv_sqrt[~np.isfinite(inv_sqrt)] = 0.0
        return np.eye(g.n) - (inv_sqrt[:, None] * a) * inv_sqrt[None, :]
    raise ValueError(f"unknown Laplacian kind: {kind!r}")


def hop_distances(g: Graph, sources) -> np.ndarray:
    """Multi-source BFS hop counts from ``sources`` to every node.

    Returns an int array with :data:`UNREACHABLE` (-1) for nodes in other
    components. Raises :class:`EmptySourceSetError` on an empty source set.
    """
    src = [int(s) for s in sources]
    if not src:
        raise EmptySourceSetError("source set must be nonempty")
    for s in src:
        if not (0 <= s < g.n):
            raise IndexOutOfRangeError(f"source {s} outside [0, {g.n})")
    dist = np.full(g.n, UNREACHABLE, dtype=np.int64)
    adj = g.adjacency_lists()
    queue = deque()
    for s in src:
        if dist[s] != 0:
            dist[s] = 0
            queue.append(s)
    while queue:
        u = queue.popleft()
        du = dist[u]
        for v in adj[u]:
            if dist[v] == UNREACHABLE:
                dist[v] = du + 1
                queue.append(v)
    return dist


def induced_subgraph(g: Graph, nodes) -> tuple[Graph, np.ndarray]:
    """Subgraph induced by ``nodes`` plus the local-to-global index map.

    The map is sorted ascending, so local order follows global order. Edges
    are exactly those of ``g`` with both endpoints in ``nodes``; coordinates
    are restricted alongside.
    """
    keep = sorted({int(v) for v in nodes})
    if not keep:
        raise EmptyNodeSetError("node set must be nonempty")
    for v in keep:
        if not (0 <= v < g.n):
            raise IndexOutOfRangeError(f"node {v} outside [0, {g.n})")
    index_map = np.asarray(keep, dtype=np.int64)
    local = {glob: loc for loc, glob in enumerate(keep)}
    edges = tuple(
        (local[u], local[v]) for u, v in g.edges if u in local and v in local
    )
    coords = g.coords[index_map] if g.coords is not None else None
    return Graph(n=len(keep), edges=edges, coords=coords), index_map


def generate_grid(rows: int, cols: int) -> Graph:
    """4-neighbor lattice with integer lattice coordinates (x=col, y=row)."""
    if rows < 1 or cols < 1:
        raise ValueError("rows and cols must be >= 1")
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    coords = np.array(
        [(float(c), float(r)) for r in range(rows) for c in range(cols)]
    )
    return build_graph(rows * cols, edges, coords=coords)


def generate_geometric(n: int, radius: float, seed: int) -> Graph:
    """Random geometric graph: n nodes uniform in the unit square (PCG64
    generator seeded with ``seed``), an edge wherever the Euclidean distance
    is <= radius. Reproducible for a fixed seed.
    """
    if n < 1:
        raise ValueError(f"node count must be >= 1, got {n}")
    if radius <= 0:
        raise ValueError(f"radius must be positive, got {radius}")
    rng = np.random.default_rng(seed)
    pts = rng.random((n, 2))
    diff = pts[:, None, :] - pts[None, :, :]
    close = (diff ** 2).sum(axis=2) <= radius * radius
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if close[u, v]]
    return build_graph(n, edges, coords=pts)


def _data_lines(path):
    """Yield (line_number, tokens) for non-blank, non-comment lines."""
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            yield lineno, line.split()


def load_graph(edge_path, coords_path=None) -> Graph:
    """Load a graph from an edge-list file, optionally with coordinates.

    Edge file: one edge per line as "u v"; '#' comments and blank lines are
    ignored. An optional header (a first data line holding a single integer)
    fixes the node count; otherwise it is 1 + the largest index seen.
    Coordinates file: one "x y" line per node in index order.
    """
    n_header = None
    edges = []
    for lineno, tokens in _data_lines(edge_path):
        if len(tokens) == 1 and n_header is None and not edges:
            try:
                n_header = int(tokens[0])
            except ValueError:
                raise ParseError(
                    f"{edge_path}:{lineno}: expected an integer header, "
                    f"got {tokens[0]!r}"
                ) from None
            if n_header < 1:
                raise ParseError(
                    f"{edge_path}:{lineno}: node count must be >= 1"
                )
            continue
        if len(tokens) != 2:
            raise ParseError(
                f"{edge_path}:{lineno}: expected 'u v', got {len(tokens)} tokens"
            )
        try:
            u, v = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise ParseError(
                f"{edge_path}:{lineno}: edge endpoints must be integers"
            ) from None
        if u < 0 or v < 0:
            raise ParseError(f"{edge_path}:{lineno}: negative node index")
        edges.append((u, v))

    if n_header is not None:
        n = n_header
    elif edges:
        n = 1 + max(max(u, v) for u, v in edges)
    else:
        raise ParseError(f"{edge_path}: no edges and no node-count header")

    coords = None
    if coords_path is not None:
        rows = []
        for lineno, tokens in _data_lines(coords_path):
            if len(tokens) != 2:
                raise ParseError(
                    f"{coords_path}:{lineno}: expected 'x y', got "
                    f"{len(tokens)} tokens"
                )
            try:
                rows.append((float(tokens[0]), float(tokens[1])))
            except ValueError:
                raise ParseError(
                    f"{coords_path}:{lineno}: coordinates must be decimal reals"
                ) from None
        if len(rows) != n:
            raise CoordCountMismatchError(
                f"{coords_path}: {len(rows)} coordinate rows for {n} nodes"
            )
        coords = np.array(rows)

    return build_graph(n, edges, coords=coords)


def save_graph(g: Graph, edge_path, coords_path=None) -> None:
    """Write ``g`` as an edge-list file (with a node-count header line) and,
    when requested and available, its coordinates file."""
    with open(edge_path, "w", encoding="utf-8") as fh:
        fh.write(f"{g.n}\n")
        for u, v in g.edges:
            fh.write(f"{u} {v}\n")
    if coords_path is not None:
        if g.coords is None:
            raise ValueError("graph has no coordinates to save")
        with open(coords_path, "w", encoding="utf-8") as fh:
            for x, y in g.coords:
                fh.write(f"{x:.17g} {y:.17g}\n")
