"""Symmetric eigendecomposition and graph Fourier machinery.

Signals are plain 1-d float arrays indexed by node. The Fourier transform of
a signal x is U^T x, where U collects the orthonormal eigenvectors of (most
commonly) the normalized Laplacian, with eigenvalues ascending and a fixed
sign convention so results are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from .errors import (
    CountOutOfRangeError,
    DimensionMismatchError,
    NoConvergenceError,
    NotSymmetricError,
    ParseError,
)

_SYMMETRY_TOL = 1e-12
_SIGN_TOL = 1e-12
_JACOBI_REL_TOL = 1e-12
_JACOBI_MAX_SWEEPS = 100


@dataclass(frozen=True, eq=False)
class SpectralBasis:
    """Eigenvalues (ascending) and orthonormal eigenvectors of a symmetric
    matrix; column k of ``eigenvectors`` belongs to ``eigenvalues[k]``.

    The first component of each eigenvector with magnitude above 1e-12 is
    made positive, so the basis is a deterministic function of the input.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]


@numba.njit(cache=True)
def _jacobi_rotate(a: np.ndarray, ut: np.ndarray) -> tuple[int, bool]:
    """Cyclic Jacobi sweeps on ``a`` in place, accumulating rotations in
    ``ut`` (transposed: row k of ``ut`` is eigenvector k, which keeps the
    updates contiguous). Only the upper triangle of ``a`` is read or
    written. Sweeps run in fixed row order (p < q) and every branch depends
    only on the matrix values, so the result is a deterministic function of
    the input. Returns (sweeps used, converged).
    """
    n = a.shape[0]
    frob = 0.0
    for i in range(n):
        for j in range(n):
            frob += a[i, j] * a[i, j]
    threshold = _JACOBI_REL_TOL * np.sqrt(frob)
    # Entries this small can never lift the off-diagonal Frobenius norm
    # above the threshold even if every pair holds one; rotating them away
    # is wasted work.
    floor = threshold / np.sqrt(2.0 * n * max(n - 1, 1))

    sweeps_done = _JACOBI_MAX_SWEEPS
    converged = False
    for sweep in range(_JACOBI_MAX_SWEEPS):
        off2 = 0.0
        abs_sum = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off2 += a[p, q] * a[p, q]
                abs_sum += np.abs(a[p, q])
        if np.sqrt(2.0 * off2) <= threshold:
            sweeps_done = sweep
            converged = True
            break
        # Early sweeps skip rotations on small entries (they get mopped up
        # once the large ones are gone); later sweeps rotate everything
        # above the convergence floor.
        if sweep < 4:
            tresh = 0.2 * abs_sum / (n * n)
            if tresh < floor:
                tresh = floor
        else:
            tresh = floor

        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if np.abs(apq) <= tresh:
                    continue
                app = a[p, p]
                aqq = a[q, q]
                tau = (aqq - app) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                a[p, q] = 0.0
                for k in range(p):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(p + 1, q):
                    apk = a[p, k]
                    akq = a[k, q]
                    a[p, k] = c * apk - s * akq
                    a[k, q] = s * apk + c * akq
                for k in range(q + 1, n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
                for k in range(n):
                    ukp = ut[p, k]
                    ukq = ut[q, k]
                    ut[p, k] = c * ukp - s * ukq
                    ut[q, k] = s * ukp + c * ukq

    if not converged:
        off2 = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off2 += a[p, q] * a[p, q]
        converged = np.sqrt(2.0 * off2) <= threshold
    return sweeps_done, converged


def eigendecompose(m: np.ndarray) -> SpectralBasis:
    """Full eigendecomposition of a symmetric matrix by cyclic Jacobi
    rotations (fixed sweep order, convergence when the off-diagonal
    Frobenius norm falls below 1e-12 times the input norm, capped at 100
    sweeps). Eigenvalues are sorted ascending with stable tie order.

    Raises :class:`NotSymmetricError` if ``max|M - M^T|`` exceeds 1e-12 and
    :class:`NoConvergenceError` if the sweep cap is hit.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if m.size and np.max(np.abs(m - m.T)) > _SYMMETRY_TOL:
        raise NotSymmetricError(
            f"matrix is not symmetric within {_SYMMETRY_TOL:g}"
        )
    a = np.ascontiguousarray(0.5 * (m + m.T))
    ut = np.eye(a.shape[0])
    sweeps, converged = _jacobi_rotate(a, ut)
    if not converged:
        raise NoConvergenceError(
            f"Jacobi eigensolver did not converge in {sweeps} sweeps"
        )
    raw = np.diag(a).copy()
    order = np.argsort(raw, kind="stable")
    eigvals = raw[order]
    eigvecs = _fix_signs(np.ascontiguousarray(ut[order].T))
    eigvals.setflags(write=False)
    eigvecs.setflags(write=False)
    return SpectralBasis(eigenvalues=eigvals, eigenvectors=eigvecs)


def _fix_signs(u: np.ndarray) -> np.ndarray:
    """Flip columns so the first entry with |value| > 1e-12 is positive."""
    u = np.array(u)
    for k in range(u.shape[1]):
        col = u[:, k]
        nz = np.flatnonzero(np.abs(col) > _SIGN_TOL)
        if nz.size and col[nz[0]] < 0:
            u[:, k] = -col
    return u


def _check_length(x: np.ndarray, basis: SpectralBasis) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (basis.n,):
        raise DimensionMismatchError(
            f"signal of shape {x.shape} does not fit a basis of size {basis.n}"
        )
    return x


def fourier(x, basis: SpectralBasis) -> np.ndarray:
    """Graph Fourier transform U^T x."""
    x = _check_length(x, basis)
    return basis.eigenvectors.T @ x


def inverse_fourier(xhat, basis: SpectralBasis) -> np.ndarray:
    """Inverse transform U xhat."""
    xhat = _check_length(xhat, basis)
    return basis.eigenvectors @ xhat


def convolve(x, y, basis: SpectralBasis) -> np.ndarray:
    """Spectral convolution: the transform of the result is xhat * yhat
    componentwise, so the operation is commutative.
    """
    x = _check_length(x, basis)
    y = _check_length(y, basis)
    u = basis.eigenvectors
    return u @ ((u.T @ x) * (u.T @ y))


def leading_sum_signal(basis: SpectralBasis, count: int) -> np.ndarray:
    """Sum of the first ``count`` eigenvectors, the standard smooth test
    signal. With repeated eigenvalues the individual eigenvectors are only
    determined up to the solver's (deterministic) choice of basis.
    """
    if not (1 <= count <= basis.n):
        raise CountOutOfRangeError(
            f"count must be in [1, {basis.n}], got {count}"
        )
    return basis.eigenvectors[:, :count].sum(axis=1)


def load_signal(path) -> np.ndarray:
    """Read a signal file: one decimal value per line in node-index order,
    '#' comments and blank lines ignored."""
    values = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            tokens = line.split()
            if len(tokens) != 1:
                raise ParseError(
                    f"{path}:{lineno}: expected one value per line"
                )
            try:
                values.append(float(tokens[0]))
            except ValueError:
                raise ParseError(
                    f"{path}:{lineno}: not a decimal real: {tokens[0]!r}"
                ) from None
    return np.asarray(values, dtype=float)


def save_signal(x, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for value in np.asarray(x, dtype=float):
            fh.write(f"{value:.17g}\n")
