import pytest
from hypothesis import given, settings, strategies as st

from spinc_bergman.coefficient import Coefficient
from spinc_bergman.tensor_symbols import Expr
from spinc_bergman.weyl_fock_algebra import (
    DivisionByZeroEigenvalue, act, apply_to_PN, commutator, formal_adjoint, gen, multiply,
    multiply_all, resolvent_apply,
)

N = 2
KINDS = ("B", "BP", "Z", "ZB")


def test_canonical_commutators():
    b, bp = gen("B", 1), gen("BP", 1)
    assert commutator(bp, b, N).equals(Expr.of(Coefficient.const(4, pi=1)))
    assert commutator(gen("Z", 1), b, N).equals(Expr.of(2))
    assert commutator(bp, gen("ZB", 1), N).equals(Expr.of(2))


@pytest.mark.parametrize("x,y", [("B", "BP"), ("Z", "B"), ("BP", "ZB")])
def test_different_directions_commute(x, y):
    assert commutator(gen(x, 1), gen(y, 2), N).is_zero()


@pytest.mark.parametrize("x,y", [("B", "B"), ("Z", "ZB"), ("Z", "BP"), ("ZB", "B"), ("Z", "Z")])
def test_commuting_pairs(x, y):
    assert commutator(gen(x, 1), gen(y, 1), N).is_zero()


words = st.lists(st.tuples(st.sampled_from(KINDS), st.integers(1, N)), min_size=1, max_size=3)


def as_expr(w):
    return multiply_all(*[gen(k, l) for k, l in w], n=N) if len(w) > 1 else gen(*w[0])


@settings(max_examples=40, deadline=None)
@given(words, words, words)
def test_associativity(u, v, w):
    a, b, c = as_expr(u), as_expr(v), as_expr(w)
    assert multiply(multiply(a, b, N), c, N).equals(multiply(a, multiply(b, c, N), N))


@settings(max_examples=40, deadline=None)
@given(words)
def test_adjoint_is_involution(w):
    e = as_expr(w)
    assert formal_adjoint(formal_adjoint(e, N), N).equals(e)


@settings(max_examples=30, deadline=None)
@given(words, words)
def test_adjoint_reverses_products(u, v):
    a, b = as_expr(u), as_expr(v)
    assert formal_adjoint(multiply(a, b, N), N).equals(
        multiply(formal_adjoint(b, N), formal_adjoint(a, N), N))


def test_annihilator_kills_projector():
    assert apply_to_PN(gen("BP", 1), N).is_zero()


def test_creation_state_and_resolvent():
    state = apply_to_PN(gen("B", 1), N)
    assert not state.is_zero()
    # L0 acts by 4 pi on b_i P, so the resolvent rescales by 1/(4 pi)
    back = act(gen("BP", 1), resolvent_apply(state), N)
    assert back.equals(apply_to_PN(Expr.of(1), N))


def test_resolvent_rejects_kernel():
    with pytest.raises(DivisionByZeroEigenvalue):
        resolvent_apply(apply_to_PN(Expr.of(1), N))
