"""Model operators of the rescaled Dirac-square expansion and the b_1 calculus.

Everything is specialised to the case where the curvature endomorphism
``J`` equals the almost-complex structure (all a_j = 2 pi), so that
``L^0_2 = sum b_j b_j^+ + 4 pi dzbar_j ^ i_{d/dzbar_j}``.  Operators are
:class:`Expr` objects whose generators are b, b+, z, zbar; kernel values
are expressions in z, zbar, z', zbar' with an exterior word.
"""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources

import numpy as np

from . import reference_forms as ref
from .coefficient import Coefficient, I, PI
from .exterior_clifford import (
    PROJECTOR, ModelParams, clifford_pair, ext_matrix, ext_word, lambda_trace,
)
from .identities import IdentityRuleSet, apply_identities
from .notation import build, frame_pairs
from .tensor_symbols import HOLO, Expr, Raw, expr_sum, fresh
from .weyl_fock_algebra import (
    act, apply_to_PN, commutator, dagger, eigen_degree, eval_origin, gaussian_integrate,
    multiply, normal_order_raw, position_form, project_perp, resolvent_apply,
)

IM = Coefficient.const(I)


def _nabla0(slot):
    """``nabla_{0, v}`` for a coordinate slot: d/dz_i -> -b_i/2, d/dzbar_i -> b_i^+/2."""
    kind, lab = slot
    return (Fraction(-1, 2), ("B", lab)) if kind == "h" else (Fraction(1, 2), ("BP", lab))


def _typed_to_spec(s):
    lab, typ = s
    return ("h" if typ == HOLO else "a", lab)


# --------------------------------------------------------------------------
# L_0 and L^0_2
# --------------------------------------------------------------------------

def build_L0() -> Expr:
    j = fresh("j")
    return build(1, gens=[("B", j), ("BP", j)])


def build_L02() -> Expr:
    """``L_0 + 4 pi * (exterior number operator)``."""
    j = fresh("j")
    return build_L0() + build(PI(1) * 4, ops=[("c", j), ("a", j)])


# --------------------------------------------------------------------------
# first order
# --------------------------------------------------------------------------

def build_O1_general() -> Expr:
    """First-order operator from the Taylor data of R^L and tau (before identities).

    ``-2/3 (d R^L)(R, R, e_i) nabla_{0,e_i} - 1/3 (d R^L)(e_i, R, e_i) - d_R tau`` with
    ``d_R tau = -2 pi sqrt-1 <(nabla_R J) w_i, wbar_i>``.
    """
    out = []
    for f, s1, s2 in frame_pairs():
        k, g = _nabla0(s2)
        out.append(build(Fraction(-2, 3) * f * k, [("D1RL", "R", "R", s1)], gens=[g]))
        out.append(build(Fraction(-1, 3) * f, [("D1RL", s1, "R", s2)]))
    i = fresh("i")
    out.append(build(PI(1) * IM * 4, [("NABLAJ", "R", ("h", i), ("a", i))]))
    return expr_sum(out)


def build_O1(rules: IdentityRuleSet | None = None) -> Expr:
    """First-order operator after the R^L-derivative identities (canonical form)."""
    rules = rules or IdentityRuleSet.load()
    return apply_identities(build_O1_general(), rules)


def build_O1_displayed() -> Expr:
    """Closed form in creation/annihilation operators."""
    i = fresh("i")
    c = PI(1) * IM * Fraction(4, 3)
    return (build(-c, [("NABLAJ", "zb", "zb", ("a", i))], gens=[("B", i)])
            + build(c, [("NABLAJ", "z", "z", ("h", i))], gens=[("BP", i)]))


def _clifford_nablaJ_R() -> Expr:
    """``<(nabla_R J) e_l, e_m> c(e_l) c(e_m)``."""
    return clifford_pair(lambda s1, s2: build(
        1, [("NABLAJ", "R", _typed_to_spec(s1), _typed_to_spec(s2))]))


def build_Q1_general(rules: IdentityRuleSet | None = None) -> Expr:
    """``O_1 - pi sqrt-1 <(nabla_R J) e_l, e_m> c(e_l) c(e_m) + d_R tau``."""
    i = fresh("i")
    dtau = build(PI(1) * IM * -4, [("NABLAJ", "R", ("h", i), ("a", i))])
    e = build_O1_general() + _clifford_nablaJ_R().scale(-PI(1) * IM) + dtau
    return apply_identities(e, rules or IdentityRuleSet.load())


def build_Q1() -> Expr:
    """Displayed form: O_1 - 2 pi sqrt-1 [<(nabla_zb J) dzb_l, dzb_m> c_l c_m + 4 <(nabla_z J) dz_l, dz_m> a_l a_m]."""
    l, m = fresh("l"), fresh("m")
    k = -PI(1) * IM * 2
    return (build_O1_displayed()
            + build(k, [("NABLAJ", "zb", ("a", l), ("a", m))], ops=[("c", l), ("c", m)])
            + build(k * 4, [("NABLAJ", "z", ("h", l), ("h", m))], ops=[("a", l), ("a", m)]))


# --------------------------------------------------------------------------
# second order
# --------------------------------------------------------------------------

def _commute_gen(e: Expr, g, c) -> Expr:
    """``c [e, g]`` for a single generator ``g`` whose label is shared with ``e``."""
    out = []
    for t in e.terms():
        r = Raw.from_term(t)
        out.extend(normal_order_raw(r.copy(coeff=r.coeff * c, gens=r.gens + [g])))
        out.extend(normal_order_raw(r.copy(coeff=r.coeff * -c, gens=[g] + r.gens)))
    return Expr(out)


def _d_dz(e: Expr, i) -> Expr:
    """Derivative of a coordinate polynomial: d/dz_i g = [g, b_i] / 2."""
    return _commute_gen(e, ("B", i), Fraction(1, 2))


def _d_dzb(e: Expr, i) -> Expr:
    """d/dzbar_i g = -[g, b_i^+] / 2."""
    return _commute_gen(e, ("BP", i), Fraction(-1, 2))


def build_O2() -> Expr:
    """Second-order operator of the scalar Bochner-Laplacian expansion (literal form).

    The second Taylor coefficients of R^L and tau stay opaque (D2RL, D2TAU atoms).
    """
    out = []
    # 1/3 <R(R, e_i) R, e_j> nabla_{0,e_i} nabla_{0,e_j}
    for f1, s1, t1 in frame_pairs():
        for f2, s2, t2 in frame_pairs():
            k1, g1 = _nabla0(t1)
            k2, g2 = _nabla0(t2)
            out.append(build(Fraction(1, 3) * f1 * f2 * k1 * k2,
                             [("RTX", "R", s1, "R", s2)], gens=[g1, g2]))
    # [2/3 <R(R, e_j) e_j, e_i> - (1/2 * 1/2 D2RL(R,R;R,e_i) + R^E(R, e_i))] nabla_{0,e_i}
    for f1, s1, t1 in frame_pairs():
        k1, g1 = _nabla0(t1)
        for f2, s2, t2 in frame_pairs():
            out.append(build(Fraction(2, 3) * f1 * f2 * k1, [("RTX", "R", s2, t2, s1)], gens=[g1]))
        out.append(build(Fraction(-1, 4) * f1 * k1, [("D2RL", "R", "R", "R", s1)], gens=[g1]))
        out.append(build(-f1 * k1, [("RE", "R", s1)], gens=[g1]))
    # -1/4 e_i( 1/2 D2RL(R,R;R,e_i) )
    for f1, s1, t1 in frame_pairs():
        g = build(Fraction(1, 2), [("D2RL", "R", "R", "R", t1)])
        lab = s1[1]
        d = _d_dz(g, lab) if s1[0] == "h" else _d_dzb(g, lab)
        out.append(d.scale(Fraction(-1, 4) * f1))
    # -1/9 sum_i [D1RL(R, R, e_i)]^2
    for f1, s1, t1 in frame_pairs():
        a = build(1, [("D1RL", "R", "R", s1)])
        b = build(1, [("D1RL", "R", "R", t1)])
        out.append(multiply(a, b).scale(Fraction(-1, 9) * f1))
    # -1/12 [L_0, <R(R, e_i) R, e_i>]
    ric = expr_sum(build(f1, [("RTX", "R", s1, "R", t1)]) for f1, s1, t1 in frame_pairs())
    out.append(commutator(build_L0(), ric).scale(Fraction(-1, 12)))
    # - sum_{|alpha|=2} d^alpha tau Z^alpha / alpha!
    out.append(build(Fraction(-1, 2), [("D2TAU", "R", "R")]))
    return expr_sum(out)


def cliff_curvature(u, v, c=1, gens=()) -> Expr:
    """``c * R^Cliff(u, v) * gens`` with ``R^Cliff = 1/4 <R e_l, e_m> c c + 1/2 tr R^{T(1,0)}``."""
    cl = clifford_pair(lambda s1, s2: build(
        Fraction(1, 4), [("RTX", u, v, _typed_to_spec(s1), _typed_to_spec(s2))]))
    out = build(c, [("TRT10", u, v)], gens=gens).scale(Fraction(1, 2)).terms()
    for t in cl.terms():
        raw = Raw.from_term(t)
        out.extend(normal_order_raw(raw.copy(coeff=raw.coeff * c, gens=raw.gens + list(gens))))
    return Expr(out)


def build_Q2_minus_O2(expand_cliff: bool = True) -> Expr:
    """``Q_2 - O_2`` in creation/annihilation form.

    ``R^Cliff(R, dzb_i) b_i - R^Cliff(R, dz_i) b_i^+
    - pi/2 sqrt-1 <(nabla nabla J)_(R,R) e_l, e_m> c c
    + 1/2 (R^E + 1/2 tr R^{T(1,0)})(e_l, e_m) c c + r^X / 4``.
    """
    i = fresh("i")
    out = []
    if expand_cliff:
        out.append(cliff_curvature("R", ("a", i), 1, gens=[("B", i)]))
        out.append(cliff_curvature("R", ("h", i), -1, gens=[("BP", i)]))
    else:
        out.append(build(1, [("RCLIFF", "R", ("a", i))], gens=[("B", i)]))
        out.append(build(-1, [("RCLIFF", "R", ("h", i))], gens=[("BP", i)]))
    out.append(clifford_pair(lambda s1, s2: build(
        -PI(1) * IM * Fraction(1, 2),
        [("NABLA2J", "R", "R", _typed_to_spec(s1), _typed_to_spec(s2))])))
    out.append(clifford_pair(lambda s1, s2: build(
        Fraction(1, 2), [("RE", _typed_to_spec(s1), _typed_to_spec(s2))])
        + build(Fraction(1, 4), [("TRT10", _typed_to_spec(s1), _typed_to_spec(s2))])))
    out.append(build(Fraction(1, 4), [("RX",)]))
    return expr_sum(out)


def build_Q2() -> Expr:
    return build_O2() + build_Q2_minus_O2()


def imported_o2_lemma() -> Expr:
    """Imported value of ``-(L_0^{-1} P^perp O_2 P^N)(0,0)`` (taken as an axiom).

    ``1/(2 pi) {<R(dz_i, dzb_j) dz_j, dzb_i> + R^E(dz_i, dzb_i)} I``.
    """
    i, j = fresh("i"), fresh("j")
    c = PI(-1) * Fraction(1, 2)
    return (build(c, [("RTX", ("h", i), ("a", j), ("h", j), ("a", i))], ops=[("I", None)])
            + build(c, [("RE", ("h", i), ("a", i))], ops=[("I", None)]))


# --------------------------------------------------------------------------
# b_0
# --------------------------------------------------------------------------

@dataclass
class LeadingCoefficient:
    """``det_C |J| * (projector onto det(Wbar^*))`` for model eigenvalues ``a``."""
    params: ModelParams
    det: float
    projector: Expr
    matrix: np.ndarray


def compute_b0(params: ModelParams | None = None) -> LeadingCoefficient:
    """Leading coefficient; ``|J|`` has eigenvalues ``|a_j| / 2 pi``."""
    if params is None:
        params = ModelParams((2 * np.pi,))
    elif not isinstance(params, ModelParams):
        params = ModelParams(tuple(params))
    neg = [j + 1 for j, x in enumerate(params.a) if x < 0]
    det = float(np.prod([abs(x) / (2 * np.pi) for x in params.a]))
    proj = ext_word(cre=neg, proj=True, ann=list(reversed(neg)))
    return LeadingCoefficient(params, det, proj, det * ext_matrix(proj, params.n).real)


# --------------------------------------------------------------------------
# the F_2 calculus
# --------------------------------------------------------------------------

class MismatchError(AssertionError):
    """A computed step differs from its published closed form."""


def specialize(e: Expr, zero_heads) -> Expr:
    """Drop every term containing one of ``zero_heads`` (those tensors set to 0)."""
    zero = set(zero_heads)
    return e.map_terms(lambda t: None if any(a.head in zero for a in t.atoms) else t)


@lru_cache(maxsize=1)
def load_anchors() -> dict:
    text = resources.files("spinc_bergman.data").joinpath("anchors.json").read_text()
    return json.loads(text)


@dataclass
class StepCheck:
    name: str
    computed: Expr
    expected: Expr
    mode: str            # "literal", "ricci" (modulo the Ricci identity) or "identities"
    match: bool
    axiom: bool = False

    @property
    def anchor(self) -> dict:
        return load_anchors().get(self.name, {})

    def difference(self) -> tuple[str, str]:
        """Canonical terms only in the computed / only in the expected form."""
        a = set(self.computed.to_text().splitlines())
        b = set(self.expected.to_text().splitlines())
        return "\n".join(sorted(a - b)), "\n".join(sorted(b - a))


@dataclass
class ExpansionReport:
    b0: Expr
    b1: Expr
    trace_b1: Expr
    intermediate: dict = field(default_factory=dict)
    match_flags: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    terms: dict = field(default_factory=dict)
    ruleset_hash: str = ""
    seconds: float = 0.0

    @property
    def all_match(self) -> bool:
        return all(self.match_flags.values())

    def failures(self) -> list:
        return [c for c in self.checks if not c.match]

    def to_text(self) -> str:
        rows = []
        for c in self.checks:
            a = c.anchor
            tag = "AXIOM" if c.axiom else ("ok" if c.match else "MISMATCH")
            rows.append(f"[{tag}] {c.name} ({a.get('paper_ref', '')}, compared {c.mode})")
            rows.extend("    " + ln for ln in c.computed.to_text().splitlines())
        rows.append("b1 =")
        rows.extend("    " + ln for ln in self.b1.to_text().splitlines())
        rows.append("tr b1 =")
        rows.extend("    " + ln for ln in self.trace_b1.to_text().splitlines())
        return "\n".join(rows)


def _compare(name, computed, expected, mode, rules, ricci, axiom=False) -> StepCheck:
    if mode == "literal":
        ok = computed.equals(expected)
    elif mode == "ricci":
        ok = apply_identities(computed, ricci).equals(apply_identities(expected, ricci))
    else:
        ok = apply_identities(computed, rules).equals(apply_identities(expected, rules))
    return StepCheck(name, computed.canonical(), expected.canonical(), mode, ok, axiom)


def kernel_part(state: Expr) -> Expr:
    """Component of a kernel state inside Ker L^0_2."""
    return state.map_terms(lambda t: None if eigen_degree(t) else t)


def compute_F2(rules: IdentityRuleSet | None = None, strict: bool = False) -> ExpansionReport:
    """Evaluate the six-term formula for F_2(0,0) = b_1 and check every step.

    Terms 1, 2, 5, 6 are computed; terms 3, 4 are the adjoints of 1, 2.  The
    O_2 contribution is the imported lemma (flagged as an axiom).  With
    ``strict`` the first mismatching step raises :class:`MismatchError`.
    """
    t0 = time.perf_counter()
    rules = rules or IdentityRuleSet.load()
    ricci = rules.subset(["ricci-nabla2j"])
    checks = []

    def check(name, computed, expected, mode="literal", axiom=False):
        c = _compare(name, computed, expected, mode, rules, ricci, axiom)
        checks.append(c)
        if strict and not c.match:
            only_c, only_e = c.difference()
            raise MismatchError(f"step {name!r} differs\ncomputed only:\n{only_c}\n"
                                f"expected only:\n{only_e}")
        return computed

    q1 = build_Q1()
    check("o1_from_taylor_data", build_O1(rules), build_O1_displayed())
    check("q1_from_taylor_data", build_Q1_general(rules), q1)
    s1 = apply_to_PN(q1)
    check("q1_projector_sandwich", kernel_part(s1), Expr())
    check("o1_on_projector_at_z0", position_form(apply_to_PN(build_O1_displayed())), Expr())
    check("q1_on_projector", s1, ref.q1_on_projector())
    r1 = resolvent_apply(project_perp(s1))
    check("resolvent_q1_on_projector", r1, ref.resolvent_q1_on_projector())
    left = check("origin_left", eval_origin(r1, keep_prime=True), ref.resolvent_at_origin_left())
    right = check("origin_right", position_form(r1), ref.resolvent_at_origin_right())
    adj_left = check("adjoint_left", dagger(left), ref.adjoint_at_origin_left())
    adj_right = check("adjoint_right", dagger(right), ref.adjoint_at_origin_right())

    term5 = check("kernel_quadratic", gaussian_integrate(multiply(left, adj_left)),
                  ref.quadratic_through_kernel())
    term6 = check("complement_quadratic", -gaussian_integrate(multiply(adj_right, right)),
                  ref.quadratic_through_complement())
    check("complement_quadratic_contracted", term6, ref.quadratic_through_complement_contracted())
    term1 = check("iterated_q1", eval_origin(resolvent_apply(project_perp(act(q1, r1)))),
                  ref.iterated_q1())

    s2 = apply_to_PN(build_Q2_minus_O2())
    q2_part = -eval_origin(resolvent_apply(project_perp(s2)))
    check("q2_origin_commutator_form", q2_part, ref.q2_origin_with_commutators(), "ricci")
    check("q2_origin", q2_part, ref.q2_origin_simplified(), "identities")
    check("q2_origin_final", q2_part, ref.q2_origin_final(), "identities")
    lemma = imported_o2_lemma()
    check("o2_origin_lemma", lemma, ref.o2_origin_lemma(), axiom=True)
    term2 = q2_part + lemma

    term3, term4 = dagger(term1), dagger(term2)
    F2 = expr_sum([term1, term2, term3, term4, term5, term6])
    b1 = apply_identities(F2, rules)
    check("b1_coordinate_frame", b1, ref.b1_coordinate_frame(), "identities")
    check("b1", b1, ref.b1_orthonormal_frame(), "identities")
    tr = apply_identities(lambda_trace(b1), rules)
    check("trace_b1", tr, ref.trace_b1(), "identities")

    intermediate = {c.name: c.computed for c in checks}
    return ExpansionReport(
        b0=PROJECTOR, b1=b1, trace_b1=tr, intermediate=intermediate,
        match_flags={c.name: c.match for c in checks}, checks=checks,
        terms={"iterated_q1": term1, "q2_total": term2, "iterated_q1_adjoint": term3,
               "q2_total_adjoint": term4, "kernel_quadratic": term5,
               "complement_quadratic": term6},
        ruleset_hash=rules.hash(), seconds=time.perf_counter() - t0)
