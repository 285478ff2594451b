from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from spinc_bergman.tensor_symbols import (
    ANTI, HOLO, Expr, atom, conjugate, evaluate_scalar, fresh, iter_assignments,
)


def ricci_like(i, j):
    return Expr.of(1, atoms=[atom("RTX", (i, ANTI), (i, HOLO), (j, ANTI), (j, HOLO))])


def test_dummy_relabeling_is_invisible():
    e1 = ricci_like(fresh("i"), fresh("j"))
    e2 = ricci_like(fresh("k"), fresh("l"))
    assert e1.equals(e2)
    assert e1.canonical().to_text() == e2.canonical().to_text()


@settings(max_examples=30, deadline=None)
@given(st.permutations(["p", "q", "r", "s"]))
def test_canonical_form_independent_of_names(names):
    labels = [fresh(x) for x in names]
    e = Expr.of(1, atoms=[atom("NABLAJ", (labels[0], ANTI), (labels[1], ANTI), (labels[2], ANTI)),
                          atom("NABLAJ", (labels[0], HOLO), (labels[1], HOLO), (labels[2], HOLO))])
    ref = Expr.of(1, atoms=[atom("NABLAJ", ("a", ANTI), ("b", ANTI), ("c", ANTI)),
                            atom("NABLAJ", ("a", HOLO), ("b", HOLO), ("c", HOLO))])
    ref = Expr([t.substitute({"a": fresh(), "b": fresh(), "c": fresh()}) for t in ref.terms()])
    assert e.equals(ref)


def test_antisymmetry_cancels():
    i, j = fresh("i"), fresh("j")
    e = Expr.of(1, atoms=[atom("RL", (i, HOLO), (j, ANTI))])
    swapped = Expr.of(1, atoms=[atom("RL", (j, ANTI), (i, HOLO))])
    assert (e + swapped).canonical().is_zero()


def test_addition_and_scaling():
    e = ricci_like(fresh("i"), fresh("j"))
    assert (e + e).equals(e.scale(2))
    assert (e - e).canonical().is_zero()
    assert e.scale(Fraction(1, 3)).scale(3).equals(e)


def test_conjugation_is_involution():
    e = ricci_like(fresh("i"), fresh("j")).scale(3)
    assert conjugate(conjugate(e)).equals(e)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_assignment_count(n):
    assert len(list(iter_assignments(["x", "y"], n))) == n ** 2


def test_evaluate_scalar_contracts_dummies():
    i = fresh("i")
    e = Expr.of(1, atoms=[atom("RL", (i, HOLO), (i, ANTI))])
    from spinc_bergman.coefficient import Coefficient
    comps = {"RL": lambda slots: Coefficient.const(slots[0][0] if slots[0][1] == HOLO else -slots[0][0])}
    assert evaluate_scalar(e, 3, comps).evaluate() == pytest.approx(6)
