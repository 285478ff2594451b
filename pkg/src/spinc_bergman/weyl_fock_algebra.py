"""Exact algebra of the model generators and the kernel-state calculus.

Generators (kinds): ``B`` (b_i = -2 nabla_{0,d/dz_i}), ``BP`` (b_i^+),
``Z`` and ``ZB`` (multiplication by z_i, zbar_i) and the central ``ZP``,
``ZBP`` (z'_i, zbar'_i, the second kernel variable).  Normal order is
``B < Z < ZB < BP`` followed by the central factors, with

    b+_j b_i = b_i b+_j + 4 pi delta_ij
    z_i b_j  = b_j z_i + 2 delta_ij
    b+_j zb_i = zb_i b+_j + 2 delta_ij

and all other pairs commuting.

A kernel state is an :class:`Expr` whose terms carry an implicit trailing
``P^N(Z, Z')`` and exterior part ``c... I``; it contains no ``ZB`` or
``BP`` factors.  On such terms ``b^alpha z^beta P^N`` is an eigenvector of
``L_0`` with eigenvalue ``4 pi |alpha|``.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from math import factorial

from .coefficient import Coefficient, GaussianRational, PI, as_coefficient
from .exterior_clifford import ext_adjoint, normalize_ext
from .tensor_symbols import (
    GEN_RANK, Expr, Raw, Term, conjugate_atoms, contract, expr_sum, raw_product, tidy,
)

GEN_ADJOINT = {"B": "BP", "BP": "B", "Z": "ZB", "ZB": "Z", "ZP": "ZBP", "ZBP": "ZP"}
HOLO_COORDS = ("Z", "ZP")
ANTI_COORDS = ("ZB", "ZBP")

_SWAP_EXTRA = {
    ("BP", "B"): Coefficient.const(4, pi=1),
    ("Z", "B"): Coefficient.const(2),
    ("BP", "ZB"): Coefficient.const(2),
}


class DivisionByZeroEigenvalue(ZeroDivisionError):
    pass


# --------------------------------------------------------------------------
# normal ordering
# --------------------------------------------------------------------------

def normalize_gens(raw: Raw, n: int | None = None) -> list[Raw]:
    done, todo = [], [raw]
    while todo:
        r = todo.pop()
        g = r.gens
        for i in range(len(g) - 1):
            if GEN_RANK[g[i][0]] > GEN_RANK[g[i + 1][0]]:
                swapped = g[:i] + [g[i + 1], g[i]] + g[i + 2:]
                todo.append(r.copy(gens=swapped))
                extra = _SWAP_EXTRA.get((g[i][0], g[i + 1][0]))
                if extra is not None:
                    c = contract(r.copy(coeff=r.coeff * extra, gens=g[:i] + g[i + 2:]),
                                 g[i][1], g[i + 1][1], n)
                    if c is not None:
                        todo.append(c)
                break
        else:
            done.append(r)
    return done


def normal_order_raw(raw: Raw, n: int | None = None) -> list[Term]:
    out = []
    for r in normalize_gens(raw, n):
        for r2 in normalize_ext(r, n):
            t = tidy(r2.to_term())
            if t is not None:
                out.append(t)
    return out


def normal_order(e: Expr, n: int | None = None) -> Expr:
    out = []
    for t in e.terms():
        out.extend(normal_order_raw(Raw.from_term(t), n))
    return Expr(out)


def gen(kind: str, label, c=1) -> Expr:
    return Expr.of(c, gens=[(kind, label)])


def word(*factors, c=1, atoms=()) -> Expr:
    """Normal-ordered product of generators given as ``(kind, label)`` pairs."""
    raw = Raw(as_coefficient(c), tuple(atoms), list(factors), [])
    return Expr(normal_order_raw(raw))


def multiply(a: Expr, b: Expr, n: int | None = None) -> Expr:
    out = []
    for t1 in a.terms():
        for t2 in b.terms():
            out.extend(normal_order_raw(raw_product(t1, t2), n))
    return Expr(out)


def multiply_all(*factors: Expr, n: int | None = None) -> Expr:
    acc = factors[0]
    for f in factors[1:]:
        acc = multiply(acc, f, n)
    return acc


def commutator(a: Expr, b: Expr, n: int | None = None) -> Expr:
    return multiply(a, b, n) - multiply(b, a, n)


def formal_adjoint(e: Expr, n: int | None = None) -> Expr:
    """Adjoint for the L^2 product: reverse, b <-> b+, z <-> zbar, conjugate data."""
    out = []
    for t in e.terms():
        sign, atoms = conjugate_atoms(t.atoms)
        te = ext_adjoint(t)
        gens = [(GEN_ADJOINT[k], l) for k, l in reversed(t.gens)]
        coeff = te.coeff.conjugate() * sign
        raw = Raw.from_term(Term(coeff, atoms, (), te.ext))
        raw.gens = gens
        out.extend(normal_order_raw(raw, n))
    return Expr(out)


# --------------------------------------------------------------------------
# action on P^N and kernel states
# --------------------------------------------------------------------------

def reduce_on_PN(raw: Raw, n: int | None = None) -> list[Term]:
    """Rewrite ``raw * P^N I`` into kernel-state form."""
    out = []
    todo = list(normalize_gens(raw, n))
    while todo:
        r = todo.pop()
        kinds = [k for k, _ in r.gens]
        if "BP" in kinds:
            continue
        if "ZB" in kinds:
            pos = max(i for i, k in enumerate(kinds) if k == "ZB")
            lab = r.gens[pos][1]
            rest = r.gens[:pos] + r.gens[pos + 1:]
            # zbar_i P^N = (1/2pi) b_i P^N + zbar'_i P^N
            todo.extend(normalize_gens(r.copy(coeff=r.coeff * PI(-1) * Fraction(1, 2),
                                              gens=rest + [("B", lab)]), n))
            todo.append(r.copy(gens=rest + [("ZBP", lab)]))
            continue
        r2 = r.copy(ops=r.ops + [("I", None)])
        for r3 in normalize_ext(r2, n):
            t = tidy(r3.to_term())
            if t is not None:
                out.append(t)
    return out


def apply_to_PN(op: Expr, n: int | None = None) -> Expr:
    """Kernel state of ``op * P^N I``."""
    out = []
    for t in op.terms():
        out.extend(reduce_on_PN(Raw.from_term(t), n))
    return Expr(out)


def act(op: Expr, state: Expr, n: int | None = None) -> Expr:
    """Apply an operator to a kernel state (result is again a kernel state)."""
    out = []
    for t1 in op.terms():
        for t2 in state.terms():
            out.extend(reduce_on_PN(raw_product(t1, t2), n))
    return Expr(out)


def eigen_degree(t: Term) -> int:
    """``L^0_2`` eigenvalue of a kernel-state term in units of 4 pi (J = bold J, q = 0)."""
    return sum(1 for k, _ in t.gens if k == "B") + len(t.ext[0])


def project_perp(state: Expr) -> Expr:
    """Remove the ``Ker L^0_2`` component (no b factors and exterior degree 0)."""
    return state.map_terms(lambda t: t if eigen_degree(t) else None)


def resolvent_apply(state: Expr, project: bool = False) -> Expr:
    def inv(t: Term):
        k = eigen_degree(t)
        if k == 0:
            if project:
                return None
            raise DivisionByZeroEigenvalue(f"kernel component present: {t}")
        return t.scaled(Coefficient.const(Fraction(1, 4 * k), pi=-1))
    return state.map_terms(inv)


def resolvent_apply_L0(state: Expr, project: bool = False) -> Expr:
    """Same for ``L_0`` alone (eigenvalue 4 pi |alpha|)."""
    def inv(t: Term):
        k = sum(1 for kind, _ in t.gens if kind == "B")
        if k == 0:
            if project:
                return None
            raise DivisionByZeroEigenvalue(f"kernel component present: {t}")
        return t.scaled(Coefficient.const(Fraction(1, 4 * k), pi=-1))
    return state.map_terms(inv)


# --------------------------------------------------------------------------
# evaluation
# --------------------------------------------------------------------------

def _push_b(raw: Raw, n, at_b_hit) -> list[Raw]:
    """Move the rightmost ``b_k`` through the z-monomial to P^N.

    ``b_k z_j = z_j b_k - 2 delta_kj``; ``at_b_hit(raw, k)`` supplies what
    ``b_k P^N`` becomes.
    """
    gens = raw.gens
    pos = max(i for i, (k, _) in enumerate(gens) if k == "B")
    lab = gens[pos][1]
    rest = gens[:pos] + gens[pos + 1:]
    out = []
    for j in range(pos, len(rest)):
        kind, l2 = rest[j]
        if kind == "Z":
            c = contract(raw.copy(coeff=raw.coeff * -2, gens=rest[:j] + rest[j + 1:]), lab, l2, n)
            if c is not None:
                out.append(c)
    out.extend(at_b_hit(raw.copy(gens=rest), lab))
    return out


def eval_origin(state: Expr, keep_prime: bool = False, n: int | None = None) -> Expr:
    """Kernel at ``Z = 0`` (and ``Z' = 0`` unless ``keep_prime``).

    With ``keep_prime`` the result is a polynomial in zbar' (``ZBP``) and
    z' (``ZP``) multiplying ``P^N(0, Z')``.
    """
    def hit(r: Raw, k):
        # b_k P^N = 2 pi (zbar_k - zbar'_k) P^N and zbar_k vanishes at Z = 0
        if not keep_prime:
            return []
        return [r.copy(coeff=r.coeff * Coefficient.const(-2, pi=1), gens=r.gens + [("ZBP", k)])]

    out = []
    for t in state.terms():
        todo = [Raw.from_term(t)]
        while todo:
            r = todo.pop()
            kinds = [k for k, _ in r.gens]
            if "ZB" in kinds or "BP" in kinds:
                raise ValueError("not a kernel state")
            if "B" in kinds:
                todo.extend(_push_b(r, n, hit))
                continue
            if "Z" in kinds:
                continue
            if not keep_prime and ("ZP" in kinds or "ZBP" in kinds):
                continue
            tt = tidy(r.to_term())
            if tt is not None:
                out.append(tt)
    return Expr(out)


def position_form(state: Expr, n: int | None = None) -> Expr:
    """Kernel at ``Z' = 0`` as a polynomial in z, zbar times ``P^N(Z, 0)``.

    On ``f(z, zbar) phi_0`` the generator ``b_k`` acts as ``-2 d/dz_k + 2 pi zbar_k``.
    """
    out = []
    for t in state.terms():
        if any(k in ("ZP", "ZBP") for k, _ in t.gens):
            continue
        todo = [Raw.from_term(t)]
        while todo:
            r = todo.pop()
            kinds = [k for k, _ in r.gens]
            if "B" in kinds:
                pos = max(i for i, k in enumerate(kinds) if k == "B")
                lab = r.gens[pos][1]
                rest = r.gens[:pos] + r.gens[pos + 1:]
                for j, (kind, l2) in enumerate(rest):
                    if kind == "Z":
                        c = contract(r.copy(coeff=r.coeff * -2, gens=rest[:j] + rest[j + 1:]),
                                     lab, l2, n)
                        if c is not None:
                            todo.append(c)
                todo.append(r.copy(coeff=r.coeff * Coefficient.const(2, pi=1),
                                   gens=rest + [("ZB", lab)]))
                continue
            gens = sorted(r.gens, key=lambda g: GEN_RANK[g[0]])
            tt = tidy(r.copy(gens=gens).to_term())
            if tt is not None:
                out.append(tt)
    return Expr(out)


def gaussian_moment(a: int, b: int) -> Coefficient:
    """``int_C z^a zbar^b exp(-pi |z|^2)`` for Lebesgue measure on C = R^2."""
    if a != b:
        return Coefficient()
    return Coefficient.const(factorial(a), pi=-a)


def gaussian_integrate(e: Expr, n: int | None = None) -> Expr:
    """Integrate a polynomial in z, zbar against ``exp(-pi |z|^2) dZ`` (Wick pairing).

    ``Z``/``ZP`` factors count as holomorphic and ``ZB``/``ZBP`` as
    antiholomorphic coordinates of the integration variable.
    """
    out = []
    for t in e.terms():
        kinds = [k for k, _ in t.gens]
        if any(k not in HOLO_COORDS + ANTI_COORDS for k in kinds):
            raise ValueError("only coordinate factors can be integrated")
        hol = sum(1 for k in kinds if k in HOLO_COORDS)
        if 2 * hol != len(kinds):
            continue
        r0 = Raw.from_term(t)
        r0 = r0.copy(coeff=r0.coeff * PI(-hol),
                     gens=[("Z", l) for k, l in t.gens if k in HOLO_COORDS]
                     + [("ZB", l) for k, l in t.gens if k in ANTI_COORDS])
        todo = [r0]
        while todo:
            r = todo.pop()
            if not r.gens:
                tt = tidy(r.to_term())
                if tt is not None:
                    out.append(tt)
                continue
            x = r.gens[0][1]
            for j, (k, y) in enumerate(r.gens):
                if k == "ZB":
                    c = contract(r.copy(gens=r.gens[1:j] + r.gens[j + 1:]), x, y, n)
                    if c is not None:
                        todo.append(c)
    return Expr(out)


def dagger(e: Expr) -> Expr:
    """Conjugate transpose of a kernel value written with commuting coordinates."""
    out = []
    for t in e.terms():
        if any(k in ("B", "BP") for k, _ in t.gens):
            raise ValueError("dagger acts on coordinate polynomials; use formal_adjoint")
        sign, atoms = conjugate_atoms(t.atoms)
        te = ext_adjoint(t)
        gens = sorted(((GEN_ADJOINT[k], l) for k, l in t.gens), key=lambda g: GEN_RANK[g[0]])
        coeff = te.coeff.conjugate() * sign
        tt = tidy(Term(coeff, atoms, tuple(gens), te.ext))
        if tt is not None:
            out.append(tt)
    return Expr(out)


def rename_prime(e: Expr, to_unprimed: bool = True) -> Expr:
    """Swap primed and unprimed coordinate kinds (e.g. to integrate over Z')."""
    m = {"ZP": "Z", "ZBP": "ZB", "Z": "ZP", "ZB": "ZBP"}
    def f(t: Term):
        gens = sorted(((m.get(k, k), l) for k, l in t.gens), key=lambda g: GEN_RANK[g[0]])
        return tidy(t.with_(gens=tuple(gens)))
    return e.map_terms(f)
