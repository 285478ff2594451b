import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spinc_bergman.exterior_clifford import ModelParams
from spinc_bergman.expansion_pipeline import compute_b0
from spinc_bergman.numeric import kernels as K

TWO_PI = 2 * math.pi


def scaled_grid(a, side=5):
    return K.grid(len(a), side, radius=math.sqrt(TWO_PI / abs(a[0])))


@pytest.mark.parametrize("a", [(TWO_PI,), (-TWO_PI,), (3 * TWO_PI,)])
def test_bergman_closed_vs_fock(a):
    p = ModelParams(a)
    G = scaled_grid(a)
    assert np.abs(K.bergman_kernel_closed(p, G, G) - K.numeric_bergman_kernel(p, G, G, 40)).max() < 1e-6


@pytest.mark.parametrize("u", [0.1, 0.5, 1.0])
@pytest.mark.parametrize("a", [(TWO_PI,), (-TWO_PI,)])
def test_mehler_closed_vs_fock(a, u):
    p = ModelParams(a)
    G = K.grid(1, 3)
    assert np.abs(K.mehler_kernel_closed(p, u, G, G) - K.numeric_heat_kernel(p, u, G, G, 80)).max() < 1e-6


def test_bergman_hermitian_symmetry():
    p = ModelParams((TWO_PI, -2 * TWO_PI))
    rng = np.random.default_rng(1)
    Z, W = rng.normal(size=(6, 4)), rng.normal(size=(5, 4))
    assert np.allclose(K.bergman_kernel_closed(p, Z, W), K.bergman_kernel_closed(p, W, Z).conj().T)


def test_bergman_diagonal_is_density():
    a = (TWO_PI, -3 * TWO_PI)
    p = ModelParams(a)
    Z = np.random.default_rng(2).normal(size=(4, 4))
    diag = np.diag(K.bergman_kernel_closed(p, Z, Z))
    assert np.allclose(diag, np.prod([abs(x) / TWO_PI for x in a]))


@pytest.mark.parametrize("a", [(TWO_PI,), (-TWO_PI, 2 * TWO_PI)])
def test_reproducing(a):
    p = ModelParams(a)
    assert K.reproducing_error(p, scaled_grid(a, 3), order=40 if p.n == 1 else 20) < 1e-6


@settings(max_examples=8, deadline=None)
@given(st.floats(0.05, 1.0), st.floats(0.05, 1.0))
def test_semigroup_property(u, v):
    p = ModelParams((TWO_PI,))
    assert K.semigroup_error(p, u, v, K.grid(1, 3), order=40) < 1e-6


def test_mehler_tends_to_bergman():
    p = ModelParams((TWO_PI,))
    G = K.grid(1, 3)
    diff = np.abs(K.mehler_kernel_closed(p, 4.0, G, G) - K.bergman_kernel_closed(p, G, G)).max()
    assert diff < 1e-10


@pytest.mark.parametrize("a", [(TWO_PI,), (-TWO_PI,), (TWO_PI, -TWO_PI), (-TWO_PI, -2 * TWO_PI)])
def test_b0_numeric_and_leakage(a):
    p = ModelParams(a)
    assert np.abs(K.numeric_b0(p) - compute_b0(p).matrix).max() < 1e-8
    assert np.allclose(K.bergman_at_origin(p), compute_b0(p).matrix)
    assert K.kernel_leakage(p) < 1e-8


@pytest.mark.parametrize("a", [(TWO_PI,), (-TWO_PI, 3 * TWO_PI)])
def test_heat_to_bergman_rate(a):
    r = K.heat_to_bergman_rate(ModelParams(a))
    assert r.relative_error < 0.05
    assert np.all(np.diff(r.distances) < 0)


def test_invalid_time():
    with pytest.raises(ValueError):
        K.mehler_kernel_closed(ModelParams((TWO_PI,)), 0.0, K.grid(1, 2), K.grid(1, 2))
