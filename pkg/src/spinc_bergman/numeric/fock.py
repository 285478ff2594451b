"""Truncated Fock-space matrices of the model operators.

Each complex direction j carries two real oscillator modes (x_j, y_j) with
Hermite functions in ``xi = sqrt(s_j) x`` where ``s_j = |a_j| / 2``.  The
circular modes

    A_j = (a_x + i sigma_j a_y) / sqrt2,   C_j = (a_x - i sigma_j a_y) / sqrt2

(sigma_j the sign of a_j) realise the generators

    b_j = sqrt(4 s_j) A_j^+,   b_j^+ = sqrt(4 s_j) A_j,
    z_j = (A_j + C_j^+) / sqrt(s_j),   zbar_j = (A_j^+ + C_j) / sqrt(s_j)

(z and zbar exchanged when a_j < 0).  At a_j = 2 pi these are the
generators of the symbolic algebra.  The basis is all occupation vectors
with total occupation at most ``cutoff``; every generator changes the
total by one, so a word of degree d acts exactly on states with total at
most ``cutoff - d``.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from ..exterior_clifford import (
    ModelParams, annihilation_matrix, creation_matrix, omega_d, projector_matrix,
)
from ..tensor_symbols import Expr, is_dummy, iter_assignments


class TruncationWarning(UserWarning):
    pass


@dataclass(frozen=True)
class FockBasisSpec:
    n: int
    cutoff: int
    include_exterior: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.cutoff < 1:
            raise ValueError("cutoff must be at least 1")

    @property
    def fock_size(self) -> int:
        return comb(self.cutoff + 2 * self.n, 2 * self.n)

    @property
    def ext_size(self) -> int:
        return 2 ** self.n if self.include_exterior else 1

    @property
    def size(self) -> int:
        return self.fock_size * self.ext_size

    def occupations(self) -> np.ndarray:
        return _occupations(self.n, self.cutoff)

    def totals(self) -> np.ndarray:
        """Total occupation of every basis vector (repeated over the exterior factor)."""
        return np.repeat(self.occupations().sum(axis=1), self.ext_size)


@lru_cache(maxsize=None)
def _occupations(n: int, cutoff: int) -> np.ndarray:
    modes = 2 * n
    rows = [occ for total in range(cutoff + 1)
            for occ in _compositions(total, modes)]
    return np.array(rows, dtype=int)


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _index(n: int, cutoff: int) -> dict:
    return {tuple(o): k for k, o in enumerate(_occupations(n, cutoff))}


@lru_cache(maxsize=None)
def mode_lowering(n: int, cutoff: int, mode: int) -> sp.csr_matrix:
    """Real-mode annihilation operator on the truncated basis (mode = 2j or 2j+1)."""
    occ = _occupations(n, cutoff)
    idx = _index(n, cutoff)
    rows, cols, vals = [], [], []
    for k, o in enumerate(occ):
        if o[mode] == 0:
            continue
        t = list(o)
        t[mode] -= 1
        rows.append(idx[tuple(t)])
        cols.append(k)
        vals.append(np.sqrt(o[mode]))
    size = len(occ)
    return sp.csr_matrix((vals, (rows, cols)), shape=(size, size), dtype=complex)


def _params(params, n) -> ModelParams:
    if params is None:
        return ModelParams((2 * np.pi,) * n)
    if not isinstance(params, ModelParams):
        params = ModelParams(tuple(params))
    if params.n != n:
        raise ValueError(f"params have n={params.n}, basis has n={n}")
    return params


def generator_matrices(spec: FockBasisSpec, params=None) -> dict:
    """Sparse Fock matrices ``{(kind, j): M}`` for kinds B, BP, Z, ZB and j = 1..n."""
    params = _params(params, spec.n)
    out = {}
    for j in range(spec.n):
        ax = mode_lowering(spec.n, spec.cutoff, 2 * j)
        ay = mode_lowering(spec.n, spec.cutoff, 2 * j + 1)
        a = params.a[j]
        sigma, s = np.sign(a), abs(a) / 2
        A = (ax + 1j * sigma * ay) / np.sqrt(2)
        C = (ax - 1j * sigma * ay) / np.sqrt(2)
        Ad, Cd = A.conj().T.tocsr(), C.conj().T.tocsr()
        hol = ((A + Cd) / np.sqrt(s)).tocsr()
        anti = ((Ad + C) / np.sqrt(s)).tocsr()
        out[("B", j + 1)] = (np.sqrt(4 * s) * Ad).tocsr()
        out[("BP", j + 1)] = (np.sqrt(4 * s) * A).tocsr()
        out[("Z", j + 1)] = hol if sigma > 0 else anti
        out[("ZB", j + 1)] = anti if sigma > 0 else hol
        out[("A", j + 1)] = A.tocsr()
        out[("C", j + 1)] = C.tocsr()
    return out


def ext_op_matrix(kind: str, label: int, n: int) -> np.ndarray:
    if kind == "c":
        return creation_matrix(label, n)
    if kind == "a":
        return annihilation_matrix(label, n)
    return projector_matrix(n)


def word_matrix(gens, ops, spec: FockBasisSpec, params=None, mats=None) -> sp.csr_matrix:
    """Matrix of the ordered product ``gens`` (Fock) tensored with ``ops`` (exterior)."""
    mats = mats or generator_matrices(spec, params)
    size = spec.fock_size
    m = sp.identity(size, dtype=complex, format="csr")
    for g in gens:
        m = m @ mats[g]
    if not spec.include_exterior:
        if ops:
            raise ValueError("exterior factors need include_exterior=True")
        return m.tocsr()
    e = np.identity(2 ** spec.n, dtype=complex)
    for kind, lab in ops:
        e = e @ ext_op_matrix(kind, lab, spec.n)
    return sp.kron(m, sp.csr_matrix(e), format="csr")


def _number(x) -> complex:
    return complex(x.evaluate()) if hasattr(x, "evaluate") else complex(x)


def fock_matrix(op: Expr, spec: FockBasisSpec, params=None, components=None) -> sp.csr_matrix:
    """Matrix of a symbolic operator; tensor atoms are evaluated through ``components``.

    Exterior words are written in the coordinate basis dzbar_S.
    """
    from ..tensor_symbols import Raw
    mats = generator_matrices(spec, params)
    out = sp.csr_matrix((spec.size, spec.size), dtype=complex)
    for t in op.terms():
        raw = Raw.from_term(t)
        dummies = [l for l in dict.fromkeys(raw.labels()) if is_dummy(l)]
        for assign in iter_assignments(dummies, spec.n):
            r = raw.substitute(assign)
            c = _number(r.coeff)
            for a in r.atoms:
                if components is None:
                    raise ValueError(f"no numeric value for atom {a}")
                c *= _number(components[a.head](a.slots))
            if c == 0:
                continue
            out = out + c * word_matrix(r.gens, [(k, l) for k, l in r.ops], spec, params, mats)
    return out.tocsr()


def to_orthonormal_exterior(m, spec: FockBasisSpec):
    """Change the exterior factor from the dzbar_S basis to the orthonormal wbar_S basis."""
    if not spec.include_exterior:
        return m
    g = np.array([2.0 ** (bin(s).count("1") / 2) for s in range(2 ** spec.n)])
    d = np.tile(g, spec.fock_size)
    return (sp.diags(d) @ m @ sp.diags(1 / d)).tocsr()


# --------------------------------------------------------------------------
# model operators
# --------------------------------------------------------------------------

def L0_matrix(spec: FockBasisSpec, params=None) -> sp.csr_matrix:
    """``sum_j b_j b_j^+`` on the Fock factor (identity on the exterior factor)."""
    params = _params(params, spec.n)
    mats = generator_matrices(spec, params)
    m = sum(mats[("B", j)] @ mats[("BP", j)] for j in range(1, spec.n + 1))
    if spec.include_exterior:
        m = sp.kron(m, sp.identity(2 ** spec.n), format="csr")
    return m.tocsr()


def L02_matrix(spec: FockBasisSpec, params=None) -> sp.csr_matrix:
    """``L_0 - 2 omega_d`` on Fock (x) exterior (orthonormal exterior basis)."""
    params = _params(params, spec.n)
    if not spec.include_exterior:
        raise ValueError("L^0_2 needs include_exterior=True")
    om = omega_d(params).matrix
    return (L0_matrix(spec, params)
            - 2 * sp.kron(sp.identity(spec.fock_size), sp.csr_matrix(om), format="csr")).tocsr()


def sector_keys(spec: FockBasisSpec) -> np.ndarray:
    """Per-direction occupation totals plus exterior index for every basis vector.

    ``A_j`` and ``C_j`` mix only the two real modes of direction j, so the model
    operators (and omega_d) are block diagonal with respect to these keys.
    """
    occ = spec.occupations()
    plane = occ[:, 0::2] + occ[:, 1::2]
    plane = np.repeat(plane, spec.ext_size, axis=0)
    ext = np.tile(np.arange(spec.ext_size), spec.fock_size)[:, None]
    return np.hstack([plane, ext])


def sectors(spec: FockBasisSpec) -> list[np.ndarray]:
    """Index sets of the invariant blocks of the model operators."""
    keys = sector_keys(spec)
    _, inverse = np.unique(keys, axis=0, return_inverse=True)
    inverse = np.ravel(inverse)
    order = np.argsort(inverse, kind="stable")
    splits = np.flatnonzero(np.diff(inverse[order])) + 1
    return np.split(order, splits)


def _check_sectors(m, spec):
    keys = sector_keys(spec)
    c = sp.coo_matrix(m)
    bad = np.any(keys[c.row] != keys[c.col], axis=1) & (np.abs(c.data) > 1e-12)
    if bad.any():
        raise ValueError("operator does not preserve the occupation sectors")


def sector_eigh(m, spec: FockBasisSpec, vectors: bool = True):
    """Eigen-decomposition block by block over occupation sectors.

    Returns ``(values, vectors)``; vectors is a dense (size x size) array, or
    None when ``vectors`` is false.
    """
    m = sp.csr_matrix(m)
    _check_sectors(m, spec)
    vals = np.empty(spec.size)
    vecs = np.zeros((spec.size, spec.size), dtype=complex) if vectors else None
    pos = 0
    for idx in sectors(spec):
        block = m[idx][:, idx].toarray()
        k = len(idx)
        if vectors:
            w, v = scipy.linalg.eigh(block)
            vecs[idx, pos:pos + k] = v
        else:
            w = scipy.linalg.eigvalsh(block)
        vals[pos:pos + k] = w
        pos += k
    order = np.argsort(vals, kind="stable")
    return vals[order], (vecs[:, order] if vectors else None)


def sector_expm(m, spec: FockBasisSpec, u: float) -> np.ndarray:
    """``exp(-u m)`` computed block by block with scipy's matrix exponential."""
    m = sp.csr_matrix(m)
    _check_sectors(m, spec)
    out = np.zeros((spec.size, spec.size), dtype=complex)
    for idx in sectors(spec):
        out[np.ix_(idx, idx)] = scipy.linalg.expm(-u * m[idx][:, idx].toarray())
    return out


def distinct_levels(values, tol=1e-6) -> list[tuple[float, int]]:
    """Cluster sorted eigenvalues into ``(value, multiplicity)`` pairs."""
    out = []
    for v in np.sort(values):
        if out and abs(v - out[-1][0]) <= tol * max(1.0, abs(v)):
            val, mult = out[-1]
            out[-1] = ((val * mult + v) / (mult + 1), mult + 1)
        else:
            out.append((float(v), 1))
    return out


def lowest_levels(spec: FockBasisSpec, params=None, count: int = 10, exterior: bool = False,
                  check_convergence: bool = True, tol: float = 1e-8) -> np.ndarray:
    """Lowest ``count`` distinct eigenvalues of L_0 (or L^0_2 with ``exterior``)."""
    def levels(s):
        m = L02_matrix(s, params) if exterior else L0_matrix(s, params)
        vals, _ = sector_eigh(m, s, vectors=False)
        return np.array([v for v, _ in distinct_levels(vals)])

    spec = FockBasisSpec(spec.n, spec.cutoff, exterior)
    lv = levels(spec)[:count]
    if check_convergence:
        ref = levels(FockBasisSpec(spec.n, spec.cutoff + 10, exterior))[:count]
        if len(ref) != len(lv) or np.max(np.abs(ref - lv)) > tol * max(1.0, np.abs(lv).max()):
            warnings.warn("eigenvalues not converged against cutoff + 10", TruncationWarning)
    return lv


def level_multiplicity_count(n: int, cutoff: int, level: int) -> int:
    """Number of (alpha, beta) in N^n x N^n with |alpha| = level, |alpha| + |beta| <= cutoff."""
    if level > cutoff:
        return 0
    ways_alpha = comb(level + n - 1, n - 1)
    ways_beta = sum(comb(b + n - 1, n - 1) for b in range(cutoff - level + 1))
    return ways_alpha * ways_beta


# --------------------------------------------------------------------------
# position representation
# --------------------------------------------------------------------------

def hermite_functions(nmax: int, xi: np.ndarray) -> np.ndarray:
    """Orthonormal Hermite functions psi_0..psi_nmax at points xi (three-term recursion)."""
    xi = np.asarray(xi, dtype=float)
    out = np.zeros((nmax + 1,) + xi.shape)
    out[0] = np.pi ** -0.25 * np.exp(-xi ** 2 / 2)
    if nmax >= 1:
        out[1] = np.sqrt(2.0) * xi * out[0]
    for k in range(1, nmax):
        out[k + 1] = np.sqrt(2.0 / (k + 1)) * xi * out[k] - np.sqrt(k / (k + 1)) * out[k - 1]
    return out


def basis_values(spec: FockBasisSpec, points: np.ndarray, params=None) -> np.ndarray:
    """Values of the Fock basis functions at real points (shape (npts, 2n)).

    Returns an array (npts, fock_size); normalisation is with respect to
    Lebesgue measure on R^{2n}.
    """
    params = _params(params, spec.n)
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    occ = spec.occupations()
    vals = np.ones((pts.shape[0], len(occ)))
    for mode in range(2 * spec.n):
        s = abs(params.a[mode // 2]) / 2
        h = hermite_functions(spec.cutoff, np.sqrt(s) * pts[:, mode]) * s ** 0.25
        vals *= h[occ[:, mode]].T
    return vals
