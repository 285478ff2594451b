"""Endomorphisms of the exterior algebra Lambda(T^{*(0,1)}) at the base point.

Words are stored in the coordinate frame: creation ``c_l = dzbar_l ^`` and
annihilation ``a_l = i_{d/dzbar_l}``, which satisfy the plain CAR relations
``a_l c_m + c_m a_l = delta_lm``.  Since ``dzbar_l = sqrt2 wbar^l`` and
``i_{d/dzbar_l} = i_{wbar_l}/sqrt2``, a word with ``k`` creations and
``m`` annihilations equals ``sqrt2^(k-m)`` times the same word in the
orthonormal frame (see :func:`orthonormal_factor`).

The flag ``proj`` inserts the projector ``I`` onto degree zero.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .coefficient import Coefficient, GaussianRational, SQRT2, as_coefficient
from .tensor_symbols import (
    ANTI, EMPTY_EXT, HOLO, PROJ_EXT, Atom, Expr, Raw, Term, atom, contract, fresh,
    expr_sum, iter_assignments, is_dummy, raw_product, tidy,
)


class InvalidParams(ValueError):
    pass


# --------------------------------------------------------------------------
# normal ordering of exterior words
# --------------------------------------------------------------------------

def normalize_ext(raw: Raw, n: int | None = None) -> list[Raw]:
    """Bring ``raw.ops`` to the form ``c... [I] a...`` using CAR and ``aI = Ic = 0``."""
    done, todo = [], [raw]
    while todo:
        r = todo.pop()
        ops = r.ops
        for i in range(len(ops) - 1):
            k1, k2 = ops[i][0], ops[i + 1][0]
            if (k1, k2) in (("a", "I"), ("I", "c")):
                break
            if (k1, k2) == ("I", "I"):
                todo.append(r.copy(ops=ops[:i] + ops[i + 1:]))
                break
            if (k1, k2) == ("a", "c"):
                x, y = ops[i][1], ops[i + 1][1]
                swapped = ops[:i] + [ops[i + 1], ops[i]] + ops[i + 2:]
                todo.append(r.copy(coeff=-r.coeff, ops=swapped))
                c = contract(r.copy(ops=ops[:i] + ops[i + 2:]), x, y, n)
                if c is not None:
                    todo.append(c)
                break
        else:
            done.append(r)
    return done


def normalize_ext_term(raw: Raw, n: int | None = None) -> list[Term]:
    out = []
    for r in normalize_ext(raw, n):
        t = tidy(r.to_term())
        if t is not None:
            out.append(t)
    return out


def ext_multiply(a: Expr, b: Expr, n: int | None = None) -> Expr:
    """Composition ``a o b`` of exterior endomorphisms (tensor coefficients commute)."""
    out = []
    for t1 in a.terms():
        for t2 in b.terms():
            if t1.gens or t2.gens:
                raise ValueError("ext_multiply takes pure exterior expressions")
            out.extend(normalize_ext_term(raw_product(t1, t2), n))
    return Expr(out)


def ext_word(cre: Sequence = (), proj: bool = False, ann: Sequence = (), c=1, atoms=()) -> Expr:
    """Expression for ``c * atoms * c_{cre} [I] a_{ann}`` (input order kept, then sorted)."""
    raw = Raw(as_coefficient(c), tuple(atoms), [],
              [("c", l) for l in cre] + ([("I", None)] if proj else []) + [("a", l) for l in ann])
    return Expr(normalize_ext_term(raw))


IDENTITY = Expr.of(1)
PROJECTOR = Expr.of(1, ext=PROJ_EXT)


def orthonormal_factor(t: Term) -> Coefficient:
    """Factor ``f`` such that the coordinate word equals ``f`` times the orthonormal word."""
    cre, _, ann = t.ext
    return SQRT2(len(cre) - len(ann))


def ext_adjoint(t: Term) -> Term:
    """Adjoint of the exterior word of ``t`` (``c_l* = 2 a_l``, ``a_l* = c_l / 2``)."""
    cre, proj, ann = t.ext
    f = Coefficient.const(1) * Coefficient.const(2 ** len(cre))
    f = f / Coefficient.const(2 ** len(ann))
    return t.with_(coeff=t.coeff * f, ext=(tuple(reversed(ann)), proj, tuple(reversed(cre))))


# --------------------------------------------------------------------------
# Clifford action
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Vec:
    """Frame vector: ``kind`` in {'w', 'wb'} (orthonormal) or {'z', 'zb'} (coordinate)."""
    kind: str
    label: object


def _clifford_op(v: Vec) -> tuple[Coefficient, tuple]:
    if v.kind == "w":        # sqrt2 wbar^l ^ = dzbar_l ^
        return Coefficient.const(1), ("c", v.label)
    if v.kind == "wb":       # -sqrt2 i_{wbar_l} = -2 i_{d/dzbar_l}
        return Coefficient.const(-2), ("a", v.label)
    if v.kind == "z":        # w = sqrt2 d/dz
        return SQRT2(-1), ("c", v.label)
    if v.kind == "zb":
        return -SQRT2(1), ("a", v.label)
    raise ValueError(v.kind)


def clifford(v: Vec) -> Expr:
    """Clifford multiplication ``c(v)`` as a coordinate exterior word."""
    c, op = _clifford_op(v)
    return Expr(normalize_ext_term(Raw(c, (), [], [op])))


def clifford_word(vectors: Sequence[Vec], c=1, atoms=(), gens=()) -> Expr:
    """``c * atoms * gens * c(v_1)...c(v_k)`` with labels shared across all factors.

    ``gens`` must already be in normal order (they commute with the exterior part).
    """
    coeff = as_coefficient(c)
    ops = []
    for v in vectors:
        f, op = _clifford_op(v)
        coeff = coeff * f
        ops.append(op)
    return Expr(normalize_ext_term(Raw(coeff, tuple(atoms), list(gens), ops)))


def clifford_expand(u: Vec, v: Vec) -> Expr:
    """Normal-ordered ``c(u) c(v)``."""
    return clifford_word([u, v])


def clifford_pair(tensor: Callable[[tuple, tuple], Expr]) -> Expr:
    """``sum_{l,m} T(e_l, e_m) c(e_l) c(e_m)`` over a real orthonormal frame.

    ``tensor(slot1, slot2)`` gives T on typed coordinate slots
    ``(label, 'h'|'a')``; it may carry coordinate generators.  Uses ``sum_l e_l (x) e_l = 2 sum_i (dz_i (x) dzb_i + dzb_i (x) dz_i)``.
    """
    i, j = fresh("i"), fresh("j")
    out = []
    for ti in (HOLO, ANTI):
        for tj in (HOLO, ANTI):
            # a slot of type h pairs with c(d/dzbar), and vice versa
            ci = Vec("zb" if ti == HOLO else "z", i)
            cj = Vec("zb" if tj == HOLO else "z", j)
            for t in tensor((i, ti), (j, tj)).terms():
                if t.ext != EMPTY_EXT:
                    raise ValueError("tensor factor must not carry an exterior part")
                out.append(clifford_word([ci, cj], c=t.coeff * 4, atoms=t.atoms, gens=t.gens))
    return expr_sum(out)


def product_commuting(a: Expr, b: Expr) -> Expr:
    """Product where the factors of ``a`` are scalars/tensors (no generators, no ext)."""
    out = []
    for t1 in a.terms():
        for t2 in b.terms():
            if t1.gens or t1.ext != EMPTY_EXT:
                raise ValueError("left factor must be a pure tensor")
            out.append(Term(t1.coeff * t2.coeff, t1.atoms + t2.atoms, t2.gens, t2.ext))
    return Expr(out)


# --------------------------------------------------------------------------
# omega_d and the model parameters
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ModelParams:
    a: tuple
    n: int = field(init=False)
    q: int = field(init=False)

    def __post_init__(self):
        a = tuple(float(x) for x in self.a)
        if not a:
            raise InvalidParams("need at least one eigenvalue a_j")
        if any(x == 0 for x in a):
            raise InvalidParams("eigenvalues a_j must be nonzero")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "n", len(a))
        object.__setattr__(self, "q", sum(1 for x in a if x < 0))

    @property
    def tau(self) -> float:
        return float(sum(abs(x) for x in self.a))

    @property
    def mu0(self) -> float:
        return float(min(abs(x) for x in self.a))


@dataclass
class OmegaD:
    matrix: np.ndarray
    tau: float
    mu0: float
    kernel_vector: np.ndarray


def omega_d(params: ModelParams) -> OmegaD:
    """``-sum a_j wbar^j ^ i_{wbar_j} + sum_{a_j<0} a_j`` as a diagonal 2^n matrix."""
    if not isinstance(params, ModelParams):
        params = ModelParams(tuple(params))
    n = params.n
    dim = 2 ** n
    diag = np.zeros(dim)
    for s in range(dim):
        occ = [(s >> (j)) & 1 for j in range(n)]
        diag[s] = -sum(params.a[j] * occ[j] for j in range(n)) + sum(x for x in params.a if x < 0)
    ker = np.zeros(dim)
    ker[sum(1 << j for j in range(n) if params.a[j] < 0)] = 1.0
    return OmegaD(np.diag(diag), params.tau, params.mu0, ker)


def omega_d_symbolic() -> tuple[Expr, Expr]:
    """Symbolic ``omega_d = -R^L(w_l, wbar_m) wbar^m ^ i_{wbar_l}`` and ``tau = R^L(w_j, wbar_j)``."""
    l, m, j = fresh("l"), fresh("m"), fresh("j")
    om = ext_word(cre=[m], ann=[l], c=-2, atoms=[atom("RL", (l, HOLO), (m, ANTI))])
    tau = Expr.of(2, atoms=[atom("RL", (j, HOLO), (j, ANTI))])
    return om, tau


# --------------------------------------------------------------------------
# explicit matrices
# --------------------------------------------------------------------------

def creation_matrix(l: int, n: int) -> np.ndarray:
    """``dzbar_l ^`` on the basis ``dzbar_S`` (S a bitmask, sorted wedge)."""
    dim = 2 ** n
    m = np.zeros((dim, dim))
    bit = 1 << (l - 1)
    for s in range(dim):
        if not s & bit:
            sign = (-1) ** bin(s & (bit - 1)).count("1")
            m[s | bit, s] = sign
    return m


def annihilation_matrix(l: int, n: int) -> np.ndarray:
    return creation_matrix(l, n).T.copy()


def projector_matrix(n: int) -> np.ndarray:
    m = np.zeros((2 ** n, 2 ** n))
    m[0, 0] = 1.0
    return m


def gram_matrix(n: int) -> np.ndarray:
    """Hermitian Gram matrix of the coordinate basis (|dzbar_l|^2 = 2)."""
    return np.diag([2.0 ** bin(s).count("1") for s in range(2 ** n)])


def word_matrix(ext: tuple, n: int) -> np.ndarray:
    cre, proj, ann = ext
    m = np.eye(2 ** n)
    for l in cre:
        m = m @ creation_matrix(l, n)
    if proj:
        m = m @ projector_matrix(n)
    for l in ann:
        m = m @ annihilation_matrix(l, n)
    return m


def ext_matrix(e: Expr, n: int, components: dict | None = None) -> np.ndarray:
    """Explicit ``2^n x 2^n`` matrix of an exterior expression.

    ``components[head](slots)`` supplies numeric tensor components.
    """
    dim = 2 ** n
    total = np.zeros((dim, dim), dtype=complex)
    for t in e.terms():
        if t.gens:
            raise ValueError("generators present")
        c = t.coeff.evaluate()
        for assign in iter_assignments(t.dummies(), n):
            val = c
            for a in t.atoms:
                slots = tuple((assign.get(l, l), typ) for l, typ in a.slots)
                val *= complex(components[a.head](slots))
            if val == 0:
                continue
            cre, proj, ann = t.ext
            ext = (tuple(assign.get(l, l) for l in cre), proj, tuple(assign.get(l, l) for l in ann))
            total += val * word_matrix(ext, n)
    return total


def ext_matrix_exact(e: Expr, n: int, components: dict) -> dict:
    """Exact matrix entries ``{(row, col): Coefficient}`` (zero entries omitted)."""
    out: dict = {}
    for t in e.terms():
        if t.gens:
            raise ValueError("generators present")
        for assign in iter_assignments(t.dummies(), n):
            val = t.coeff
            for a in t.atoms:
                val = val * components[a.head](tuple((assign.get(l, l), typ) for l, typ in a.slots))
                if not val:
                    break
            if not val:
                continue
            cre, proj, ann = t.ext
            ext = (tuple(assign.get(l, l) for l in cre), proj, tuple(assign.get(l, l) for l in ann))
            m = word_matrix(ext, n)
            for r, c in zip(*np.nonzero(m)):
                key = (int(r), int(c))
                out[key] = out.get(key, Coefficient()) + val * int(m[r, c])
    return {k: v for k, v in out.items() if v}


# --------------------------------------------------------------------------
# trace
# --------------------------------------------------------------------------

def lambda_trace(e: Expr, n: int | None = None) -> Expr:
    """Trace over Lambda(C^n).

    Words through ``I`` reduce to ``<vac| A C |vac>`` and are independent
    of ``n``.  Other words need a concrete ``n``.
    """
    out = []
    for t in e.terms():
        if t.gens:
            raise ValueError("lambda_trace takes exterior expressions")
        cre, proj, ann = t.ext
        if proj:
            raw = Raw(t.coeff, t.atoms, [], [("a", l) for l in ann] + [("c", l) for l in cre])
            for r in normalize_ext(raw, n):
                if not r.ops:
                    out.append(r.to_term())
            continue
        if n is None:
            if not cre and not ann:
                raise ValueError("trace of the identity needs concrete n")
            raise ValueError("trace of a word without projector needs concrete n")
        ext_dummies = [l for l in dict.fromkeys(cre + ann) if is_dummy(l)]
        for assign in iter_assignments(ext_dummies, n):
            sub = t.substitute(assign)
            tr = np.trace(word_matrix(sub.ext, n))
            if tr:
                out.append(Term(sub.coeff * int(round(tr)), sub.atoms))
    return Expr(out)
