"""Finite-difference magnetic Laplacian on the unit torus.

The line bundle has degree p, i.e. constant field strength B = 2 pi p.  The
lattice operator uses Peierls phases in Landau gauge: y-links of column i
carry phase B i h^2 and the wrap-around x-links of row j carry
-2 pi p j / m, so every plaquette encloses flux B h^2 and the operator is
periodic.  Continuum Landau levels are B (2k + 1), each p-fold degenerate;
after the shift by B the spectrum clusters at 4 pi p k.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import eigsh


class ResolutionError(ValueError):
    """The grid cannot resolve the magnetic length."""


@dataclass(frozen=True)
class TorusSpec:
    flux: int
    grid: int

    def __post_init__(self):
        if self.flux < 1:
            raise ValueError("flux must be a positive integer")
        if self.grid < 8 * np.sqrt(self.flux):
            raise ResolutionError(
                f"grid {self.grid} too coarse for flux {self.flux}; need at least {int(np.ceil(8 * np.sqrt(self.flux)))}")


def magnetic_laplacian(spec: TorusSpec) -> sp.csr_matrix:
    """Sparse Hermitian (nabla^L)^* nabla^L - 2 pi p on the m x m periodic grid."""
    p, m = spec.flux, spec.grid
    h = 1.0 / m
    B = 2 * np.pi * p
    idx = lambda i, j: (i % m) * m + (j % m)
    rows, cols, vals = [], [], []
    for i in range(m):
        for j in range(m):
            k = idx(i, j)
            # y-direction link (i, j) -> (i, j + 1)
            ph = np.exp(1j * B * i * h * h)
            rows += [k, idx(i, j + 1)]
            cols += [idx(i, j + 1), k]
            vals += [-ph, -np.conj(ph)]
            # x-direction link (i, j) -> (i + 1, j), twisted across the seam
            ph = np.exp(-2j * np.pi * p * j / m) if i == m - 1 else 1.0
            rows += [k, idx(i + 1, j)]
            cols += [idx(i + 1, j), k]
            vals += [-ph, -np.conj(ph)]
    hop = sp.csr_matrix((vals, (rows, cols)), shape=(m * m, m * m), dtype=complex)
    lap = (4 * sp.identity(m * m, dtype=complex) + hop) / h ** 2
    return (lap - B * sp.identity(m * m)).tocsr()


def plaquette_flux(spec: TorusSpec) -> np.ndarray:
    """Flux through every plaquette, read off the link phases (for testing the gauge)."""
    p, m = spec.flux, spec.grid
    H = magnetic_laplacian(spec).tolil()
    h2 = (1.0 / m) ** 2
    link = lambda a, b: -H[a, b] * h2
    idx = lambda i, j: (i % m) * m + (j % m)
    out = np.empty((m, m))
    for i in range(m):
        for j in range(m):
            prod = (link(idx(i, j), idx(i + 1, j)) * link(idx(i + 1, j), idx(i + 1, j + 1))
                    * link(idx(i + 1, j + 1), idx(i, j + 1)) * link(idx(i, j + 1), idx(i, j)))
            out[i, j] = np.angle(prod)
    return out


@dataclass
class TorusResult:
    flux: int
    grid: int
    eigenvalues: np.ndarray
    low_cluster: int
    gap: float
    discretization_error: float

    @property
    def expected_gap(self) -> float:
        return 4 * np.pi * self.flux

    @property
    def gap_relative_error(self) -> float:
        return abs(self.gap - self.expected_gap) / self.expected_gap


def torus_gap(flux: int, grid: int = 64, extra: int = 4) -> TorusResult:
    """Low spectrum of the shifted lattice operator: cluster size and gap.

    The low cluster is every eigenvalue closer to 0 than to 4 pi p.  The
    discretization error is the spread of the low cluster about zero; a
    :class:`ResolutionError` is raised when the gap is not at least ten times
    that error.
    """
    spec = TorusSpec(flux, grid)
    H = magnetic_laplacian(spec)
    k = min(2 * flux + extra, grid * grid - 2)
    vals = np.sort(eigsh(H, k=k, which="SA", return_eigenvectors=False, tol=1e-10).real)
    half = 2 * np.pi * flux
    low = vals[vals < half]
    high = vals[vals >= half]
    if len(low) == 0 or len(high) == 0:
        raise ResolutionError("could not separate the lowest Landau cluster")
    err = float(np.abs(low).max())
    gap = float(high.min() - low.max())
    if gap < 10 * err:
        raise ResolutionError(f"gap {gap:.4g} not resolved against discretization error {err:.4g}")
    return TorusResult(flux, grid, vals, len(low), gap, err)
