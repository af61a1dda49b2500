"""Positive-definite graph-kernel interpolation.

A basis signal f with strictly positive Fourier coefficients fhat yields the
kernel K(v, w) = sum_k fhat_k u_k(v) u_k(w); interpolating N samples means
solving the N x N system K_WW c = x_W and evaluating K_VW c everywhere. The
variational spline family fhat_k = (eps + lambda_k)^(-s) is the one kernel
shipped here, equivalent to K = (eps I + L_n)^(-s).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    IndexOutOfRangeError,
    NonPositiveFhatError,
    NonPositiveShiftError,
    ParseError,
    SolveFailureError,
)
from .spectral import SpectralBasis

_EIGENVALUE_CLAMP = -1e-10
_JITTER_SCALE = 1e-12
_JITTER_GROWTH = 100.0
_JITTER_RETRIES = 3

VARIATIONAL_SPLINE = "variational_spline"


@dataclass(frozen=True)
class GBFSpec:
    """Kernel family descriptor. ``epsilon`` shifts the spectrum, ``s`` is
    the spline exponent; fhat_k = (epsilon + lambda_k)^(-s)."""

    epsilon: float
    s: float
    kind: str = VARIATIONAL_SPLINE

    def __post_init__(self):
        if self.kind != VARIATIONAL_SPLINE:
            raise ValueError(f"unknown kernel kind: {self.kind!r}")


@dataclass(frozen=True, eq=False)
class SampleSet:
    """Sampled signal values: distinct node indices and one value each."""

    nodes: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=np.int64)
        values = np.asarray(self.values, dtype=float)
        if nodes.ndim != 1 or nodes.size == 0:
            raise ValueError("sample set must contain at least one node")
        if values.shape != nodes.shape:
            raise ValueError(
                f"{values.shape[0] if values.ndim else 0} values for "
                f"{nodes.size} sample nodes"
            )
        if np.unique(nodes).size != nodes.size:
            raise ValueError("sample nodes must be distinct")
        nodes.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.nodes.size


@dataclass(frozen=True, eq=False)
class Interpolant:
    """Solved interpolation: coefficients of the kernel translates and the
    evaluated signal over all nodes (exact at the sample nodes)."""

    coefficients: np.ndarray
    signal: np.ndarray


def spline_fourier(eigenvalues, spec: GBFSpec) -> np.ndarray:
    """Spline kernel transform (eps + lambda_k)^(-s), strictly positive.

    Eigenvalues in [-1e-10, 0) are clamped to 0 first, so tiny negative
    round-off from the eigensolver cannot flip positivity.
    """
    lam = np.asarray(eigenvalues, dtype=float).copy()
    lam[(lam >= _EIGENVALUE_CLAMP) & (lam < 0.0)] = 0.0
    shifted = spec.epsilon + lam
    if np.any(shifted <= 0.0):
        raise NonPositiveShiftError(
            f"epsilon + lambda <= 0 (epsilon={spec.epsilon}, "
            f"min lambda={lam.min()})"
        )
    return shifted ** (-spec.s)


def kernel_matrix(basis: SpectralBasis, fhat, rows, cols) -> np.ndarray:
    """Kernel block K[v, w] = sum_k fhat_k u_k(v) u_k(w) for v in ``rows``,
    w in ``cols``, assembled without materializing the full n x n kernel.
    Symmetric positive definite whenever rows == cols."""
    fhat = np.asarray(fhat, dtype=float)
    if fhat.shape != (basis.n,):
        raise ValueError(
            f"fhat of shape {fhat.shape} for a basis of size {basis.n}"
        )
    if np.any(fhat <= 0.0):
        raise NonPositiveFhatError("kernel transform must be strictly positive")
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    u = basis.eigenvectors
    return (u[rows] * fhat) @ u[cols].T


def _solve_spd(k: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, float]:
    """Cholesky solve with jitter retries.

    On factorization failure, adds delta = 1e-12 * trace(K)/N to the
    diagonal and retries up to 3 times, growing delta 100x each time.
    Returns the solution and the jitter that was finally used.
    """
    n = k.shape[0]
    delta = _JITTER_SCALE * np.trace(k) / n
    jitter = 0.0
    for attempt in range(1 + _JITTER_RETRIES):
        try:
            factor = scipy.linalg.cho_factor(k + jitter * np.eye(n))
            return scipy.linalg.cho_solve(factor, b), jitter
        except np.linalg.LinAlgError:
            jitter = delta if attempt == 0 else jitter * _JITTER_GROWTH
    raise SolveFailureError(
        f"kernel system of order {n} stayed singular after "
        f"{_JITTER_RETRIES} jitter retries (last jitter {jitter:g})"
    )


def gbf_interpolate(
    basis: SpectralBasis, spec: GBFSpec, samples: SampleSet
) -> Interpolant:
    """Interpolate the sampled values over the whole graph.

    Solves K_WW c = x_W by Cholesky (with jitter retries on numerically
    singular systems, then :class:`SolveFailureError`) and evaluates
    K_VW c at every node.
    """
    nodes = samples.nodes
    if nodes.max() >= basis.n or nodes.min() < 0:
        raise IndexOutOfRangeError(
            f"sample nodes outside [0, {basis.n})"
        )
    fhat = spline_fourier(basis.eigenvalues, spec)
    k_ww = kernel_matrix(basis, fhat, nodes, nodes)
    coeff, _ = _solve_spd(k_ww, samples.values)
    k_vw = kernel_matrix(basis, fhat, np.arange(basis.n), nodes)
    return Interpolant(coefficients=coeff, signal=k_vw @ coeff)


def load_sample_set(path) -> SampleSet:
    """Read a sample-set file: one "node_id value" line per sample, '#'
    comments and blank lines ignored."""
    nodes, values = [], []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            tokens = line.split()
            if len(tokens) != 2:
                raise ParseError(f"{path}:{lineno}: expected 'node_id value'")
            try:
                nodes.append(int(tokens[0]))
                values.append(float(tokens[1]))
            except ValueError:
                raise ParseError(
                    f"{path}:{lineno}: bad sample line {raw.strip()!r}"
                ) from None
    if not nodes:
        raise ParseError(f"{path}: no samples found")
    return SampleSet(nodes=np.array(nodes), values=np.array(values))


def save_sample_set(samples: SampleSet, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for node, value in zip(samples.nodes, samples.values):
            fh.write(f"{node} {value:.17g}\n")
