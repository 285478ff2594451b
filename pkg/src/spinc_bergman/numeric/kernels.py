"""Closed-form model kernels and their Fock-space counterparts.

Points of R^{2n} are arrays of shape (npts, 2n) ordered (x_1, y_1, ...,
x_n, y_n) with z_j = x_j + i y_j, so that sum |z_j|^2 = |Z|^2.  On the j-th
plane J acts as (a_j / 2 pi) times the rotation (x, y) -> (-y, x).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..exterior_clifford import ModelParams, omega_d
from .fock import (
    FockBasisSpec, L0_matrix, L02_matrix, basis_values, lowest_levels,
    sector_eigh, sector_expm,
)


def _params(params) -> ModelParams:
    return params if isinstance(params, ModelParams) else ModelParams(tuple(params))


def _points(Z, n) -> np.ndarray:
    Z = np.atleast_2d(np.asarray(Z, dtype=float))
    if Z.shape[1] != 2 * n:
        raise ValueError(f"points need {2 * n} real coordinates")
    return Z


def _plane(Z, j):
    return Z[:, 2 * j][:, None], Z[:, 2 * j + 1][:, None]


def bergman_kernel_closed(params, Z, Zp) -> np.ndarray:
    """Scalar Bergman kernel P(Z, Z') of the magnetic Laplacian, shape (len Z, len Z')."""
    params = _params(params)
    Z, Zp = _points(Z, params.n), _points(Zp, params.n)
    out = np.ones((len(Z), len(Zp)), dtype=complex)
    for j, a in enumerate(params.a):
        lam = abs(a) / (2 * np.pi)
        x, y = _plane(Z, j)
        xp, yp = (c.T for c in _plane(Zp, j))
        dist2 = (x - xp) ** 2 + (y - yp) ** 2
        sympl = (a / (2 * np.pi)) * (x * yp - y * xp)
        out *= lam * np.exp(-np.pi / 2 * lam * dist2 - 1j * np.pi * sympl)
    return out


def mehler_kernel_closed(params, u: float, Z, Zp, exterior: bool = False) -> np.ndarray:
    """Heat kernel exp(-u L_{2,C})(Z, Z'); with ``exterior`` times exp(2 u omega_d).

    The exterior version has shape (len Z, len Z', 2^n, 2^n) in the wbar_S basis.
    """
    if u <= 0:
        raise ValueError("u must be positive")
    params = _params(params)
    Z, Zp = _points(Z, params.n), _points(Zp, params.n)
    out = np.ones((len(Z), len(Zp)), dtype=complex)
    for j, a in enumerate(params.a):
        lam = abs(a) / (2 * np.pi)
        theta = 2 * np.pi * u * lam
        x, y = _plane(Z, j)
        xp, yp = (c.T for c in _plane(Zp, j))
        r2, rp2 = x ** 2 + y ** 2, xp ** 2 + yp ** 2
        dot = x * xp + y * yp
        rot = x * yp - y * xp
        expo = (-0.5 * np.pi * lam / np.tanh(theta) * (r2 + rp2)
                + np.pi * lam / np.tanh(theta) * dot
                - 1j * np.pi * lam * np.sign(a) * rot)
        out *= lam / (-np.expm1(-2 * theta)) * np.exp(expo)
    if not exterior:
        return out
    twist = np.diag(np.exp(2 * u * np.diag(omega_d(params).matrix)))
    return out[:, :, None, None] * twist[None, None]


def kernel_projector(params) -> np.ndarray:
    """Orthogonal projector of the exterior factor onto Ker omega_d."""
    params = _params(params)
    v = omega_d(params).kernel_vector
    return np.outer(v, v.conj())


# --------------------------------------------------------------------------
# Fock-space kernels
# --------------------------------------------------------------------------

def position_kernel(M, spec: FockBasisSpec, params, Z, Zp) -> np.ndarray:
    """Schwartz kernel of a Fock operator M at point pairs.

    Scalar spec: shape (len Z, len Z'); exterior spec: (len Z, len Z', 2^n, 2^n).
    """
    params = _params(params)
    M = M.toarray() if hasattr(M, "toarray") else np.asarray(M)
    phi = basis_values(spec, _points(Z, spec.n), params)
    phip = basis_values(spec, _points(Zp, spec.n), params)
    if not spec.include_exterior:
        return phi @ M @ phip.T
    e = spec.ext_size
    M4 = M.reshape(spec.fock_size, e, spec.fock_size, e)
    return np.einsum("pa,aibj,qb->pqij", phi, M4, phip)


def spectral_projector(spec: FockBasisSpec, params=None, exterior: bool | None = None,
                       tol: float = 1e-8) -> np.ndarray:
    """Projector onto the numerically zero eigenspace of L_0 (or L^0_2)."""
    ext = spec.include_exterior if exterior is None else exterior
    spec = FockBasisSpec(spec.n, spec.cutoff, ext)
    m = L02_matrix(spec, params) if ext else L0_matrix(spec, params)
    vals, vecs = sector_eigh(m, spec)
    keep = np.abs(vals) < tol * max(1.0, np.abs(vals).max())
    v = vecs[:, keep]
    return v @ v.conj().T


def numeric_bergman_kernel(params, Z, Zp, cutoff: int = 40, exterior: bool = False) -> np.ndarray:
    params = _params(params)
    spec = FockBasisSpec(params.n, cutoff, exterior)
    return position_kernel(spectral_projector(spec, params), spec, params, Z, Zp)


def numeric_heat_kernel(params, u: float, Z, Zp, cutoff: int = 80,
                        exterior: bool = False) -> np.ndarray:
    """exp(-u L) via block-wise matrix exponentials of the truncated Fock matrix."""
    params = _params(params)
    spec = FockBasisSpec(params.n, cutoff, exterior)
    m = L02_matrix(spec, params) if exterior else L0_matrix(spec, params)
    return position_kernel(sector_expm(m, spec, u), spec, params, Z, Zp)


def grid(n: int, side: int = 5, radius: float = 1.0) -> np.ndarray:
    """Points of a side^2 grid in the first complex plane (other coordinates zero)."""
    t = np.linspace(-radius, radius, side)
    xs, ys = np.meshgrid(t, t, indexing="ij")
    pts = np.zeros((side * side, 2 * n))
    pts[:, 0], pts[:, 1] = xs.ravel(), ys.ravel()
    return pts


# --------------------------------------------------------------------------
# quadrature
# --------------------------------------------------------------------------

def compose_kernels(k1, k2, Z, Zp, n: int, scale=np.pi, order: int = 40) -> np.ndarray:
    """int k1(Z, W) k2(W, Z') dW by tensor Gauss-Hermite quadrature.

    ``scale`` is the Gaussian decay rate of the integrand in W, either one
    number or one per complex direction.
    """
    scales = np.broadcast_to(np.asarray(scale, dtype=float), (n,))
    t, w = np.polynomial.hermite.hermgauss(order)
    nodes, weights = [], []
    for s in np.repeat(scales, 2):
        nodes.append(t / np.sqrt(s))
        weights.append(w * np.exp(t ** 2) / np.sqrt(s))
    W = np.stack([g.ravel() for g in np.meshgrid(*nodes, indexing="ij")], axis=1)
    wts = np.ones(len(W))
    for g in np.meshgrid(*weights, indexing="ij"):
        wts *= g.ravel()
    return (k1(Z, W) * wts[None, :]) @ k2(W, Zp)


def _decay(params) -> np.ndarray:
    return np.array([abs(a) / 2 for a in params.a])


def reproducing_error(params, Z, order: int = 40) -> float:
    """max |int P(Z, W) P(W, Z') dW - P(Z, Z')| over the point pairs."""
    params = _params(params)
    P = lambda A, B: bergman_kernel_closed(params, A, B)
    comp = compose_kernels(P, P, Z, Z, params.n, scale=_decay(params), order=order)
    return float(np.abs(comp - P(Z, Z)).max())


def semigroup_error(params, u: float, v: float, Z, order: int = 40) -> float:
    """max |int K_u(Z, W) K_v(W, Z') dW - K_{u+v}(Z, Z')|."""
    params = _params(params)
    K = lambda s: (lambda A, B: mehler_kernel_closed(params, s, A, B))
    comp = compose_kernels(K(u), K(v), Z, Z, params.n, scale=_decay(params), order=order)
    return float(np.abs(comp - K(u + v)(Z, Z)).max())


# --------------------------------------------------------------------------
# leading coefficient and spectral gap
# --------------------------------------------------------------------------

def bergman_at_origin(params) -> np.ndarray:
    """P^{L^0_2}(0, 0) from the closed forms: det(|J|) times the Ker omega_d projector."""
    params = _params(params)
    origin = np.zeros((1, 2 * params.n))
    return bergman_kernel_closed(params, origin, origin)[0, 0] * kernel_projector(params)


def numeric_b0(params, cutoff: int = 6) -> np.ndarray:
    """P^{L^0_2}(0, 0) from the numerically assembled spectral projector."""
    params = _params(params)
    origin = np.zeros((1, 2 * params.n))
    return numeric_bergman_kernel(params, origin, origin, cutoff=cutoff, exterior=True)[0, 0]


def kernel_leakage(params, cutoff: int = 6) -> float:
    """Norm of the numerical Ker L^0_2 outside the Ker omega_d exterior component."""
    params = _params(params)
    spec = FockBasisSpec(params.n, cutoff, True)
    P = spectral_projector(spec, params)
    keep = np.kron(np.ones(spec.fock_size), np.abs(omega_d(params).kernel_vector) > 0.5)
    return float(np.linalg.norm(P[~keep.astype(bool)]))


@dataclass
class RateResult:
    slope: float
    expected: float
    us: np.ndarray
    distances: np.ndarray

    @property
    def relative_error(self) -> float:
        return abs(-self.slope - self.expected) / self.expected


def heat_to_bergman_rate(params, us=None, cutoff: int = 6) -> RateResult:
    """Fit log ||exp(-u L^0_2)(0,0) - P^{L^0_2}(0,0)|| against u.

    The expected rate is the smallest nonzero eigenvalue of the dense
    truncated L^0_2.
    """
    params = _params(params)
    us = np.linspace(1.0, 3.0, 9) if us is None else np.asarray(us, dtype=float)
    origin = np.zeros((1, 2 * params.n))
    P0 = bergman_at_origin(params)
    d = np.array([np.linalg.norm(mehler_kernel_closed(params, u, origin, origin, True)[0, 0] - P0, 2)
                  for u in us])
    slope = np.polyfit(us, np.log(d), 1)[0]
    levels = lowest_levels(FockBasisSpec(params.n, cutoff), params, count=2, exterior=True,
                           check_convergence=False)
    return RateResult(float(slope), float(levels[1]), us, d)
