import math

import numpy as np
import pytest

from spinc_bergman.numeric.torus import ResolutionError, TorusSpec, magnetic_laplacian, plaquette_flux, torus_gap


def test_resolution_guard():
    with pytest.raises(ResolutionError):
        TorusSpec(16, 16)


@pytest.mark.parametrize("p", [1, 2, 3])
def test_plaquette_flux_uniform(p):
    spec = TorusSpec(p, 32)
    phi = plaquette_flux(spec)
    assert np.allclose(phi, 2 * math.pi * p / 32 ** 2)


def test_laplacian_hermitian():
    H = magnetic_laplacian(TorusSpec(2, 24))
    assert abs(H - H.conj().T).max() < 1e-12


@pytest.mark.parametrize("p", [1, 2, 3, 4, 5, 6])
def test_low_cluster_and_gap(p):
    r = torus_gap(p, 64)
    assert r.low_cluster == p
    assert r.gap_relative_error < 0.05


def test_gap_converges_with_grid():
    coarse, fine = torus_gap(2, 32), torus_gap(2, 64)
    assert fine.gap_relative_error < coarse.gap_relative_error
