"""Compact builders for tensor/operator expressions in the coordinate frame.

Slots of curvature atoms are written as

* ``("h", l)`` / ``("a", l)``: the coordinate vectors d/dz_l, d/dzbar_l,
* ``("w", l)`` / ``("wb", l)``: the orthonormal vectors w_l = sqrt2 d/dz_l
  and their conjugates,
* ``"z"``, ``"zb"``, ``"zp"``, ``"zbp"``: the position vector fields
  z = sum z_a d/dz_a, zbar, z', zbar',
* ``"R"``: the radial field R = z + zbar.

Exterior factors are ``("c", l)`` (dzbar_l wedge), ``("a", l)``
(i_{d/dzbar_l}), ``("wc", l)`` (wbar^l wedge), ``("wa", l)`` (i_{wbar_l})
and ``("I", None)``.
"""
from __future__ import annotations

import itertools
from fractions import Fraction

from .coefficient import SQRT2, as_coefficient
from .tensor_symbols import ANTI, HOLO, Atom, Expr, Raw, fresh
from .weyl_fock_algebra import normal_order_raw

_POSITION = {
    "z": (("Z", HOLO),),
    "zb": (("ZB", ANTI),),
    "zp": (("ZP", HOLO),),
    "zbp": (("ZBP", ANTI),),
    "R": (("Z", HOLO), ("ZB", ANTI)),
}


def _slot_choices(slot):
    """List of ``(factor, typed slot, extra generators)`` for one slot spec."""
    if isinstance(slot, str):
        lab = fresh("x")
        return [(1, (lab, typ), [(kind, lab)]) for kind, typ in _POSITION[slot]]
    kind, lab = slot
    if kind == "h":
        return [(1, (lab, HOLO), [])]
    if kind == "a":
        return [(1, (lab, ANTI), [])]
    if kind == "w":
        return [(SQRT2(), (lab, HOLO), [])]
    if kind == "wb":
        return [(SQRT2(), (lab, ANTI), [])]
    raise ValueError(f"unknown slot {slot!r}")


def _op(op):
    kind, lab = op
    if kind in ("c", "a", "I"):
        return 1, (kind, lab)
    if kind == "wc":
        return SQRT2() * Fraction(1, 2), ("c", lab)
    if kind == "wa":
        return SQRT2(), ("a", lab)
    raise ValueError(f"unknown exterior factor {op!r}")


def build(c=1, atoms=(), gens=(), ops=(), n: int | None = None) -> Expr:
    """Normal-ordered ``c * atoms(position fields) * gens * ops``.

    Position-field coordinates are placed to the left of ``gens``.
    """
    base = as_coefficient(c)
    ext = []
    for op in ops:
        f, o = _op(op)
        base = base * f
        ext.append(o)
    per_atom = []
    for spec in atoms:
        head, *slots = spec
        per_atom.append((head, [_slot_choices(s) for s in slots]))
    flat = [choices for _, cs in per_atom for choices in cs]
    out = []
    for pick in itertools.product(*flat):
        coeff = base
        extra = []
        built, k = [], 0
        for head, cs in per_atom:
            slots = []
            for _ in cs:
                f, typed, g = pick[k]
                k += 1
                coeff = coeff * f
                slots.append(typed)
                extra.extend(g)
            built.append(Atom(head, tuple(slots)))
        raw = Raw(coeff, tuple(built), extra + list(gens), list(ext))
        out.extend(normal_order_raw(raw, n))
    return Expr(out)


def vec_inner(u1, v1, u2, v2, c=1, gens=(), ops=(), n=None) -> Expr:
    """``c * <(nabla_{u1} J) v1, (nabla_{u2} J) v2>`` (complex bilinear metric)."""
    m = fresh("m")
    return (build(c, [("NABLAJ", u1, v1, ("a", m)), ("NABLAJ", u2, v2, ("h", m))], gens, ops, n)
            + build(c, [("NABLAJ", u1, v1, ("h", m)), ("NABLAJ", u2, v2, ("a", m))], gens, ops, n)
            ).scale(2)


def frame_pairs():
    """``sum_i e_i (x) e_i = sum over ((2, d/dz_i, d/dzbar_i), (2, d/dzbar_i, d/dz_i))``."""
    i = fresh("e")
    return [(2, ("h", i), ("a", i)), (2, ("a", i), ("h", i))]
