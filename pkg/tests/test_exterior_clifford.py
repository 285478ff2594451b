import math
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spinc_bergman.exterior_clifford import (
    InvalidParams, ModelParams, Vec, annihilation_matrix, clifford_word, creation_matrix,
    ext_adjoint, ext_matrix, ext_word, gram_matrix, lambda_trace, omega_d, projector_matrix,
)
from spinc_bergman.expansion_pipeline import compute_b0
from spinc_bergman.validation import clifford_curvature_sides, validate_clifford_curvature

TWO_PI = 2 * math.pi


@pytest.mark.parametrize("n", [1, 2, 3])
def test_car_relations(n):
    eye = np.eye(2 ** n)
    for l in range(1, n + 1):
        for m in range(1, n + 1):
            c, a = creation_matrix(m, n), annihilation_matrix(l, n)
            assert np.allclose(a @ c + c @ a, eye * (l == m))
            cl = creation_matrix(l, n)
            assert np.allclose(cl @ c + c @ cl, 0)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.sampled_from(["w", "wb"]), min_size=2, max_size=2),
       st.integers(1, 2), st.integers(1, 2))
def test_clifford_relation(kinds, l, m):
    # c(u) c(v) + c(v) c(u) = -2 <u, v> on the orthonormal frame
    u, v = Vec(kinds[0], l), Vec(kinds[1], m)
    anti = ext_matrix(clifford_word([u, v]), 2) + ext_matrix(clifford_word([v, u]), 2)
    expected = -2 * (l == m) * (kinds[0] != kinds[1])
    assert np.allclose(anti, expected * np.eye(4))


def test_adjoint_against_gram_matrix():
    n = 2
    G = gram_matrix(n)
    for e in (ext_word(cre=[1]), ext_word(ann=[2]), ext_word(cre=[1, 2], ann=[2])):
        t = e.terms()[0]
        m = ext_matrix(e, n)
        madj = ext_matrix(type(e)([ext_adjoint(t)]), n)
        assert np.allclose(madj, np.linalg.inv(G) @ m.conj().T @ G)


def test_trace_through_projector():
    e = ext_word(cre=[1], proj=True, ann=[1])
    assert lambda_trace(e).equals(type(e).of(1))
    assert np.allclose(ext_matrix(ext_word(proj=True), 2), projector_matrix(2))


@pytest.mark.parametrize("a", [(TWO_PI,), (-TWO_PI, 2 * TWO_PI), (TWO_PI, -3 * TWO_PI, -TWO_PI)])
def test_omega_d_spectrum(a):
    p = ModelParams(a)
    om = omega_d(p)
    d = np.diag(om.matrix)
    assert np.isclose(om.tau, sum(abs(x) for x in a))
    assert np.isclose(om.mu0, min(abs(x) for x in a))
    ker = np.flatnonzero(np.abs(d) < 1e-12)
    assert len(ker) == 1 and om.kernel_vector[ker[0]] == 1
    assert d[np.abs(d) > 1e-12].max() <= -om.mu0 + 1e-12


def test_invalid_params():
    with pytest.raises(InvalidParams):
        ModelParams((TWO_PI, 0.0))
    with pytest.raises(InvalidParams):
        ModelParams(())


def test_clifford_curvature_symbolic():
    lhs, rhs = clifford_curvature_sides()
    assert lhs.equals(rhs)


def test_clifford_curvature_exact_instances():
    assert validate_clifford_curvature(2, 5, seed=3).passed


@pytest.mark.parametrize("a", [(TWO_PI,), (-TWO_PI,), (TWO_PI, -2 * TWO_PI), (-TWO_PI, -TWO_PI)])
def test_b0_is_projector_onto_kernel(a):
    p = ModelParams(a)
    b0 = compute_b0(p)
    assert math.isclose(b0.det, np.prod([abs(x) / TWO_PI for x in a]))
    P = b0.matrix / b0.det
    v = omega_d(p).kernel_vector
    assert np.allclose(P, np.outer(v, v))


def test_b0_random_scales():
    rng = random.Random(5)
    for _ in range(5):
        a = tuple(rng.choice([-1, 1]) * rng.uniform(0.5, 20) for _ in range(2))
        b0 = compute_b0(ModelParams(a))
        assert np.isclose(np.trace(b0.matrix), b0.det)
