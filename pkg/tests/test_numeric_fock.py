import math
import warnings

import numpy as np
import pytest
from scipy.special import comb

from spinc_bergman.exterior_clifford import ModelParams
from spinc_bergman.numeric.fock import (
    FockBasisSpec, L0_matrix, L02_matrix, TruncationWarning, distinct_levels, generator_matrices,
    hermite_functions, level_multiplicity_count, lowest_levels, sector_eigh, sector_expm,
    to_orthonormal_exterior,
)

TWO_PI = 2 * math.pi


@pytest.mark.parametrize("n,cutoff", [(1, 5), (2, 4), (3, 3)])
def test_basis_size(n, cutoff):
    spec = FockBasisSpec(n, cutoff)
    assert spec.fock_size == comb(cutoff + 2 * n, 2 * n, exact=True)
    assert len(spec.occupations()) == spec.fock_size
    assert FockBasisSpec(n, cutoff, True).size == spec.fock_size * 2 ** n


@pytest.mark.parametrize("a", [(TWO_PI,), (-TWO_PI,), (TWO_PI, -3 * TWO_PI)])
def test_generator_commutators(a):
    p = ModelParams(a)
    spec = FockBasisSpec(p.n, 8)
    g = generator_matrices(spec, p)
    low = np.flatnonzero(spec.totals() <= spec.cutoff - 2)
    for j in range(p.n):
        b, bp = g["B", j + 1].toarray(), g["BP", j + 1].toarray()
        comm = (bp @ b - b @ bp)[:, low]
        assert np.allclose(comm, 2 * abs(a[j]) * np.eye(spec.fock_size)[:, low])
        z, zb = g["Z", j + 1].toarray(), g["ZB", j + 1].toarray()
        assert np.allclose((z @ zb - zb @ z)[:, low], 0)
        assert np.allclose(g["BP", j + 1].toarray().conj().T, b)


def test_l0_spectrum_n1():
    lv = lowest_levels(FockBasisSpec(1, 40), count=10)
    assert np.allclose(lv, 4 * np.pi * np.arange(10), atol=1e-8)


def test_l0_spectrum_mixed_signs():
    p = ModelParams((TWO_PI, -2 * TWO_PI))
    lv = lowest_levels(FockBasisSpec(2, 12), p, count=4, check_convergence=False)
    assert np.allclose(lv, [0, 4 * np.pi, 8 * np.pi, 12 * np.pi], atol=1e-8)


def test_multiplicities_match_counting():
    spec = FockBasisSpec(2, 10)
    vals, _ = sector_eigh(L0_matrix(spec), spec, vectors=False)
    levels = distinct_levels(vals, 1e-6)
    for k, (val, mult) in enumerate(levels[:4]):
        assert math.isclose(val, 4 * math.pi * k, abs_tol=1e-8)
        assert mult == level_multiplicity_count(2, 10, k)


def test_truncation_warning():
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        lowest_levels(FockBasisSpec(1, 3), count=6)
    assert any(issubclass(x.category, TruncationWarning) for x in w)


def test_l02_kernel_and_gap():
    p = ModelParams((-TWO_PI,))
    spec = FockBasisSpec(1, 6, True)
    vals, _ = sector_eigh(L02_matrix(spec, p), spec, vectors=False)
    nonzero = np.sort(vals[np.abs(vals) > 1e-8])
    assert nonzero[0] >= 2 * p.mu0 - 1e-8


def test_sector_expm_matches_dense():
    from scipy.linalg import expm
    spec = FockBasisSpec(1, 6)
    m = L0_matrix(spec)
    assert np.allclose(sector_expm(m, spec, 0.03), expm(-0.03 * m.toarray()))


def test_orthonormal_exterior_hermitian():
    p = ModelParams((TWO_PI,))
    spec = FockBasisSpec(1, 4, True)
    m = to_orthonormal_exterior(L02_matrix(spec, p), spec)
    m = m.toarray() if hasattr(m, "toarray") else m
    assert np.allclose(m, m.conj().T)


def test_hermite_orthonormal():
    x, w = np.polynomial.hermite.hermgauss(60)
    h = hermite_functions(8, x) * np.sqrt(w * np.exp(x ** 2))[None, :]
    assert np.allclose(h @ h.T, np.eye(9), atol=1e-12)
