"""Published closed forms of the intermediate and final b_1 expressions.

Each function builds the expression exactly as displayed (coordinate frame
d/dz, d/dzbar unless the name says otherwise), without simplification
beyond normal ordering.  The mapping from these names to their published
labels and formula text lives in ``data/anchors.json``.
"""
from __future__ import annotations

from fractions import Fraction

from .coefficient import Coefficient, I, PI
from .notation import build, frame_pairs, vec_inner
from .tensor_symbols import Expr, expr_sum, fresh

IM = Coefficient.const(I)
PROJ = ("I", None)
_J = {"h": IM, "a": -IM}


def _rj_commutator(u, v, x, y, c=1, ops=()) -> Expr:
    """``c <[R(u, v), J] x, y>`` for coordinate slots x, y (J = sqrt-1 on T^(1,0))."""
    k = _J[x[0]] + _J[y[0]]
    if not k:
        return Expr()
    return build(k * c, [("RTX", u, v, x, y)], ops=ops)


# --------------------------------------------------------------------------
# first-order calculus
# --------------------------------------------------------------------------

def q1_on_projector() -> Expr:
    """Kernel state of Q_1 P^N."""
    i, j, k, l, m = (fresh(s) for s in "ijklm")
    cc = [("c", l), ("c", m), PROJ]
    return (build(IM * Fraction(-2, 3), [("NABLAJ", ("a", j), "zbp", ("a", i))],
                  gens=[("B", i), ("B", j)], ops=[PROJ])
            + build(IM * PI(1) * Fraction(-4, 3), [("NABLAJ", "zbp", "zbp", ("a", i))],
                    gens=[("B", i)], ops=[PROJ])
            + build(-IM, [("NABLAJ", ("a", k), ("a", l), ("a", m))], gens=[("B", k)], ops=cc)
            + build(-IM * PI(1) * 2, [("NABLAJ", ("a", k), ("a", l), ("a", m))],
                    gens=[("ZBP", k)], ops=cc))


def resolvent_q1_on_projector() -> Expr:
    """Kernel state of (L^0_2)^{-1} P^perp Q_1 P^N."""
    i, j, k, l, m = (fresh(s) for s in "ijklm")
    cc = [("c", l), ("c", m), PROJ]
    return (build(-IM * PI(-1) * Fraction(1, 12), [("NABLAJ", ("a", j), "zbp", ("a", i))],
                  gens=[("B", i), ("B", j)], ops=[PROJ])
            + build(-IM * Fraction(1, 3), [("NABLAJ", "zbp", "zbp", ("a", i))],
                    gens=[("B", i)], ops=[PROJ])
            + build(-IM * PI(-1) * Fraction(1, 12), [("NABLAJ", ("a", k), ("a", l), ("a", m))],
                    gens=[("B", k)], ops=cc)
            + build(-IM * Fraction(1, 4), [("NABLAJ", ("a", k), ("a", l), ("a", m))],
                    gens=[("ZBP", k)], ops=cc))


def resolvent_at_origin_left() -> Expr:
    """(P^perp (L^0_2)^{-1} Q_1 P^N)(0, Z') as a polynomial in zbar'."""
    l, m = fresh("l"), fresh("m")
    return build(-IM * Fraction(1, 12), [("NABLAJ", "zbp", ("a", l), ("a", m))],
                 ops=[("c", l), ("c", m), PROJ])


def resolvent_at_origin_right() -> Expr:
    """(P^perp (L^0_2)^{-1} Q_1 P^N)(Z, 0) as a polynomial in zbar."""
    l, m = fresh("l"), fresh("m")
    return build(-IM * Fraction(1, 6), [("NABLAJ", "zb", ("a", l), ("a", m))],
                 ops=[("c", l), ("c", m), PROJ])


def adjoint_at_origin_left() -> Expr:
    """(P^N Q_1 (L^0_2)^{-1} P^perp)(Z', 0) as a polynomial in z'."""
    l, m = fresh("l"), fresh("m")
    return build(IM * Fraction(1, 3), [("NABLAJ", "zp", ("h", l), ("h", m))],
                 ops=[PROJ, ("a", m), ("a", l)])


def adjoint_at_origin_right() -> Expr:
    """(P^N Q_1 (L^0_2)^{-1} P^perp)(0, Z) exactly as printed (coefficient 2 sqrt-1 / 3 pi)."""
    l, m = fresh("l"), fresh("m")
    return build(IM * PI(-1) * Fraction(2, 3), [("NABLAJ", "z", ("h", l), ("h", m))],
                 ops=[PROJ, ("a", m), ("a", l)])


def quadratic_through_kernel() -> Expr:
    """(P^perp L^-1 Q_1 P^N Q_1 L^-1 P^perp)(0, 0)."""
    i, j, k, l, m = (fresh(s) for s in "ijklm")
    return build(PI(-1) * Fraction(1, 36),
                 [("NABLAJ", ("a", k), ("a", l), ("a", m)), ("NABLAJ", ("h", k), ("h", i), ("h", j))],
                 ops=[("c", l), ("c", m), PROJ, ("a", j), ("a", i)])


def quadratic_through_complement() -> Expr:
    """-(P^N Q_1 P^perp L^-2 Q_1 P^N)(0, 0), first printed form."""
    i, j, k, l, m = (fresh(s) for s in "ijklm")
    return build(-PI(-1) * Fraction(1, 9),
                 [("NABLAJ", ("h", k), ("h", i), ("h", j)), ("NABLAJ", ("a", k), ("a", l), ("a", m))],
                 ops=[PROJ, ("a", j), ("a", i), ("c", l), ("c", m), PROJ])


def quadratic_through_complement_contracted() -> Expr:
    """Second printed form: -1/(9 pi) <(nabla_dzb_k J) dzb_l, (nabla_dz_k J) dz_l> (times I)."""
    k, l = fresh("k"), fresh("l")
    return vec_inner(("a", k), ("a", l), ("h", k), ("h", l), c=-PI(-1) * Fraction(1, 9), ops=[PROJ])


def iterated_q1() -> Expr:
    """((L^0_2)^{-1} P^perp Q_1 (L^0_2)^{-1} P^perp Q_1 P^N)(0, 0)."""
    k, l = fresh("k"), fresh("l")
    return vec_inner(("h", k), ("h", l), ("a", k), ("a", l), c=-PI(-1) * Fraction(1, 3), ops=[PROJ])


# --------------------------------------------------------------------------
# second-order calculus
# --------------------------------------------------------------------------

def q2_origin_with_commutators() -> Expr:
    """-((L^0_2)^{-1} P^perp (Q_2 - O_2) P^N)(0,0) written with [R, J] terms."""
    i, l, m = fresh("i"), fresh("l"), fresh("m")
    hi, ai, hl, al, am = ("h", i), ("a", i), ("h", l), ("a", l), ("a", m)
    cc = [("c", l), ("c", m), PROJ]
    p = PI(-1)
    out = [build(p * Fraction(1, 4), [("TRT10", hi, ai)], ops=[PROJ])]
    # -1/(2 pi) <(R - sqrt-1 (2 N2J(dz_i, dzb_i) - [R, J])) dz_l, dzb_l>
    out.append(build(-p * Fraction(1, 2), [("RTX", hi, ai, hl, al)], ops=[PROJ]))
    out.append(build(p * IM, [("NABLA2J", hi, ai, hl, al)], ops=[PROJ]))
    out.append(_rj_commutator(hi, ai, hl, al, c=-p * IM * Fraction(1, 2), ops=[PROJ]))
    # -1/(24 pi) <(R - sqrt-1 (2 N2J(dzb_i, dz_i) + [R, J])) dzb_l, dzb_m> c_l c_m
    out.append(build(-p * Fraction(1, 24), [("RTX", hi, ai, al, am)], ops=cc))
    out.append(build(p * IM * Fraction(1, 12), [("NABLA2J", ai, hi, al, am)], ops=cc))
    out.append(_rj_commutator(hi, ai, al, am, c=p * IM * Fraction(1, 24), ops=cc))
    # -1/(8 pi) (R^E + 1/2 tr R^{T(1,0)})(dzb_l, dzb_m) c_l c_m
    out.append(build(-p * Fraction(1, 8), [("RE", al, am)], ops=cc))
    out.append(build(-p * Fraction(1, 16), [("TRT10", al, am)], ops=cc))
    return expr_sum(out)


def q2_origin_simplified() -> Expr:
    """Same quantity after the second-derivative identities, first printed form."""
    i, l, m = fresh("i"), fresh("l"), fresh("m")
    hi, ai, hl, al, am = ("h", i), ("a", i), ("h", l), ("a", l), ("a", m)
    cc = [("c", l), ("c", m), PROJ]
    p = PI(-1)
    return expr_sum([
        build(p * Fraction(1, 4), [("TRT10", hi, ai)], ops=[PROJ]),
        build(-p * Fraction(1, 2), [("RTX", hi, ai, hl, al)], ops=[PROJ]),
        build(p * IM, [("NABLA2J", hi, ai, hl, al)], ops=[PROJ]),
        build(p * Fraction(1, 24), [("RTX", hi, ai, al, am)], ops=cc),
        build(-p * Fraction(1, 8), [("RE", al, am)], ops=cc),
        build(-p * Fraction(1, 16), [("TRT10", al, am)], ops=cc),
    ])


def q2_origin_final() -> Expr:
    """Same quantity, final printed form in nabla J, R and R^E."""
    j, l, m, i = fresh("j"), fresh("l"), fresh("m"), fresh("i")
    cc = [("c", l), ("c", m), PROJ]
    p = PI(-1)
    return (vec_inner(("h", l), ("h", j), ("a", l), ("a", j), c=p * Fraction(3, 8), ops=[PROJ])
            + build(-p * Fraction(1, 12), [("RTX", ("a", l), ("a", m), ("h", i), ("a", i))], ops=cc)
            + build(-p * Fraction(1, 8), [("RE", ("a", l), ("a", m))], ops=cc))


def o2_origin_lemma() -> Expr:
    """-(L_0^{-1} P^perp O_2 P^N)(0,0) = 1/(2 pi) {<R(dz_i, dzb_j) dz_j, dzb_i> + R^E(dz_i, dzb_i)} I."""
    i, j = fresh("i"), fresh("j")
    c = PI(-1) * Fraction(1, 2)
    return (build(c, [("RTX", ("h", i), ("a", j), ("h", j), ("a", i))], ops=[PROJ])
            + build(c, [("RE", ("h", i), ("a", i))], ops=[PROJ]))


# --------------------------------------------------------------------------
# final coefficient
# --------------------------------------------------------------------------

def b1_coordinate_frame() -> Expr:
    """b_1 in the coordinate frame, before eliminating the mixed Ricci term."""
    i, j, k, l, m = (fresh(s) for s in "ijklm")
    p = PI(-1)
    cc = [("c", l), ("c", m), PROJ]
    aa = [PROJ, ("a", m), ("a", l)]
    return expr_sum([
        build(p, [("RTX", ("h", i), ("a", j), ("h", j), ("a", i))], ops=[PROJ]),
        build(p, [("RE", ("h", j), ("a", j))], ops=[PROJ]),
        vec_inner(("a", k), ("a", l), ("h", k), ("h", l), c=-p * Fraction(1, 36), ops=[PROJ]),
        build(p * Fraction(1, 36),
              [("NABLAJ", ("a", k), ("a", l), ("a", m)), ("NABLAJ", ("h", k), ("h", i), ("h", j))],
              ops=[("c", l), ("c", m), PROJ, ("a", j), ("a", i)]),
        build(-p * Fraction(1, 12), [("RTX", ("a", l), ("a", m), ("h", i), ("a", i))], ops=cc),
        build(-p * Fraction(1, 8), [("RE", ("a", l), ("a", m))], ops=cc),
        build(p * Fraction(1, 3), [("RTX", ("h", l), ("h", m), ("h", i), ("a", i))], ops=aa),
        build(p * Fraction(1, 2), [("RE", ("h", l), ("h", m))], ops=aa),
    ])


def norm_nablaJ_sq() -> Expr:
    """``|nabla J|^2 = sum_ij |(nabla_{e_i} J) e_j|^2`` over a real orthonormal frame."""
    out = []
    for f1, s1, t1 in frame_pairs():
        for f2, s2, t2 in frame_pairs():
            out.append(vec_inner(s1, s2, t1, t2, c=f1 * f2))
    return expr_sum(out)


def hermitian_scalar_part() -> Expr:
    """``r^X + 1/4 |nabla J|^2 + 4 R^E(w_j, wbar_j)`` (scalar)."""
    j = fresh("j")
    return (build(1, [("RX",)]) + norm_nablaJ_sq().scale(Fraction(1, 4))
            + build(4, [("RE", ("w", j), ("wb", j))]))


def b1_orthonormal_frame() -> Expr:
    """b_1 in an orthonormal frame w_j of T^(1,0)."""
    i, j, k, l, m = (fresh(s) for s in "ijklm")
    p = PI(-1)
    cc = [("wc", l), ("wc", m), PROJ]
    aa = [PROJ, ("wa", m), ("wa", l)]
    lead = expr_sum(Expr([t.with_(ext=((), True, ()))]) for t in hermitian_scalar_part().terms())
    return expr_sum([
        lead.scale(p * Fraction(1, 8)),
        vec_inner(("w", k), ("w", l), ("wb", k), ("wb", l), c=-p * Fraction(1, 144), ops=[PROJ]),
        build(p * Fraction(1, 288),
              [("NABLAJ", ("wb", k), ("wb", l), ("wb", m)), ("NABLAJ", ("w", k), ("w", i), ("w", j))],
              ops=[("wc", l), ("wc", m), PROJ, ("wa", j), ("wa", i)]),
        build(-p * Fraction(1, 24), [("RTX", ("wb", l), ("wb", m), ("w", i), ("wb", i))], ops=cc),
        build(-p * Fraction(1, 8), [("RE", ("wb", l), ("wb", m))], ops=cc),
        build(p * Fraction(1, 24), [("RTX", ("w", l), ("w", m), ("w", i), ("wb", i))], ops=aa),
        build(p * Fraction(1, 8), [("RE", ("w", l), ("w", m))], ops=aa),
    ])


def trace_b1() -> Expr:
    """Trace of b_1 over the exterior algebra: (1/8 pi) [r^X + 1/4 |nabla J|^2 + 4 R^E(w_j, wbar_j)]."""
    return hermitian_scalar_part().scale(PI(-1) * Fraction(1, 8))


def kahler_trace_b1() -> Expr:
    """Trace in the Kahler case: (1/8 pi) [r^X + 4 R^E(w_j, wbar_j)]."""
    j = fresh("j")
    return (build(1, [("RX",)]) + build(4, [("RE", ("w", j), ("wb", j))])).scale(PI(-1) * Fraction(1, 8))
