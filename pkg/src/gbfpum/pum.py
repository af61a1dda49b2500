"""Partition-of-unity localization of kernel interpolation.

Communities grow by an R-hop BFS radius into overlapping subdomains; Shepard
weights built from linear distance-decay bumps blend the per-subdomain
interpolants into one global signal. Subdomain solves are independent pure
computations, so the blend is deterministic however they are scheduled.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .clustering import Partition
from .errors import IndexOutOfRangeError, SolveFailureError
from .gbf import GBFSpec, SampleSet, gbf_interpolate
from .graph import Graph, LaplacianKind, hop_distances, induced_subgraph, laplacian
from .spectral import eigendecompose


class EmptySubdomainWarning(UserWarning):
    """A subdomain received no samples; its local interpolant is zero."""


@dataclass(frozen=True, eq=False)
class Cover:
    """Overlapping subdomains grown from the core partition by ``radius``
    hops. Each core community is contained in its subdomain and every node
    is covered (at least by its own community's subdomain)."""

    subdomains: tuple[np.ndarray, ...]
    core: Partition
    radius: int


@dataclass(frozen=True, eq=False)
class PartitionOfUnity:
    """Blend weights, one row per subdomain: nonnegative, zero outside the
    subdomain, and summing to one at every node."""

    weights: np.ndarray


def enlarge_cover(g: Graph, p: Partition, radius: int) -> Cover:
    """Grow every community into the set of nodes within ``radius`` hops.

    Nodes in other components stay out of foreign subdomains; they are
    covered by their own community's subdomain regardless.
    """
    if radius < 0:
        raise ValueError(f"enlargement radius must be >= 0, got {radius}")
    if p.labels.shape != (g.n,):
        raise ValueError(
            f"partition labels {p.labels.shape} do not fit graph of size {g.n}"
        )
    subdomains = []
    for core_nodes in p.communities():
        dist = hop_distances(g, core_nodes)
        subdomains.append(np.flatnonzero((dist >= 0) & (dist <= radius)))
    return Cover(subdomains=tuple(subdomains), core=p, radius=radius)


def pou_weights(g: Graph, cover: Cover) -> PartitionOfUnity:
    """Shepard partition of unity over the cover.

    Bump psi_j(v) = max(0, 1 - dist(v, C_j)/(R+1)) vanishes exactly where
    v leaves V_j and equals 1 on the core community, so the normalization
    denominator is always >= 1. With R = 0 the weights reduce to community
    indicators.
    """
    r = cover.radius
    j = len(cover.subdomains)
    psi = np.zeros((j, g.n))
    for idx, core_nodes in enumerate(cover.core.communities()):
        dist = hop_distances(g, core_nodes)
        reachable = dist >= 0
        bump = np.where(
            reachable, np.maximum(0.0, 1.0 - dist / (r + 1.0)), 0.0
        )
        inside = np.zeros(g.n, dtype=bool)
        inside[cover.subdomains[idx]] = True
        psi[idx] = np.where(inside, bump, 0.0)
    weights = psi / psi.sum(axis=0)
    weights.setflags(write=False)
    return PartitionOfUnity(weights=weights)


def pum_interpolate(
    g: Graph,
    cover: Cover,
    pou: PartitionOfUnity,
    spec: GBFSpec,
    samples: SampleSet,
) -> np.ndarray:
    """Blend per-subdomain kernel interpolants into a global signal.

    Each subdomain solves its own interpolation problem on the induced
    subgraph (own normalized Laplacian, own spectrum, shared kernel
    parameters) using the samples that fall inside it; the results are
    combined as sum_j phi_j * x_j. A subdomain without samples contributes
    zero and raises :class:`EmptySubdomainWarning`. The blend stays exact at
    every sample node.
    """
    if samples.nodes.max() >= g.n or samples.nodes.min() < 0:
        raise IndexOutOfRangeError(f"sample nodes outside [0, {g.n})")
    result = np.zeros(g.n)
    for idx, subdomain in enumerate(cover.subdomains):
        in_sub = np.isin(samples.nodes, subdomain)
        if not in_sub.any():
            warnings.warn(
                f"subdomain {idx} contains no samples; "
                "its local interpolant is zero",
                EmptySubdomainWarning,
                stacklevel=2,
            )
            continue
        sub, index_map = induced_subgraph(g, subdomain)
        basis = eigendecompose(laplacian(sub, LaplacianKind.NORMALIZED))
        local_nodes = np.searchsorted(index_map, samples.nodes[in_sub])
        local_samples = SampleSet(
            nodes=local_nodes, values=samples.values[in_sub]
        )
        try:
            local = gbf_interpolate(basis, spec, local_samples)
        except SolveFailureError as exc:
            raise SolveFailureError(f"subdomain {idx}: {exc}") from exc
        result[index_map] += pou.weights[idx, index_map] * local.signal
    return result
