"""Random exact 2-jets of almost-Kahler structures at a point of R^{2n}.

The structure is the standard complex structure ``J e_{2j} = e_{2j+1}``
with flat metric at the origin.  Unknown jet data are

* ``A[x, y, z] = <(nabla_x J) e_y, e_z>``,
* ``R[a, b, c, e] = <R(e_a, e_b) e_c, e_e>``,
* ``N2[a, b, c, e] = <(nabla nabla J)_(e_a, e_b) e_c, e_e>``,

subject to the linear constraints of an almost-Kahler metric (skewness,
``J``-anticommutation, the type condition, ``d omega = 0`` and its
derivative, Riemann symmetries, first Bianchi, the Ricci identity and the
derivatives of ``J^2 = -1`` and of the type condition).  All linear
algebra is exact over the rationals, so the jets are rational and any
identity among them can be tested with exact equality.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from ..coefficient import Coefficient, GaussianRational

TYPE_H, TYPE_A = "h", "a"


def complex_structure(n: int) -> np.ndarray:
    d = 2 * n
    J = np.zeros((d, d), dtype=int)
    for j in range(n):
        J[2 * j + 1, 2 * j] = 1
        J[2 * j, 2 * j + 1] = -1
    return J


def _frac(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


def _exact_rref(rows: list[list[Fraction]], ncols: int):
    dm = DomainMatrix([[QQ(v.numerator, v.denominator) for v in r] for r in rows],
                      (len(rows), ncols), QQ)
    red, pivots = dm.rref()
    return [[_frac(v) for v in r] for r in red.to_list()], list(pivots)


def _nablaJ_rows(n: int) -> list[list[Fraction]]:
    d = 2 * n
    J = complex_structure(n)
    idx = lambda x, y, z: (x * d + y) * d + z
    rows = []

    def add(pairs):
        r = [Fraction(0)] * d ** 3
        for k, v in pairs:
            r[k] += v
        rows.append(r)

    for x, y, z in itertools.product(range(d), repeat=3):
        add([(idx(x, y, z), 1), (idx(x, z, y), 1)])
        add([(idx(x, w, z), J[w, y]) for w in range(d)] + [(idx(x, y, w), -J[w, z]) for w in range(d)])
        add([(idx(w, y, z), J[w, x]) for w in range(d)] + [(idx(x, y, w), -J[w, z]) for w in range(d)])
        add([(idx(x, y, z), 1), (idx(y, z, x), 1), (idx(z, x, y), 1)])
    return rows


@lru_cache(maxsize=None)
def nablaJ_basis(n: int) -> tuple:
    """Exact basis of the admissible ``nabla J`` tensors (flattened)."""
    d = 2 * n
    red, piv = _exact_rref(_nablaJ_rows(n), d ** 3)
    free = [c for c in range(d ** 3) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * d ** 3
        v[f] = Fraction(1)
        for i, p in enumerate(piv):
            v[p] = -red[i][f]
        basis.append(tuple(v))
    return tuple(basis)


def _second_order_system(n: int, A1: np.ndarray, A2: np.ndarray, with_matrix: bool):
    """Rows over unknowns (R, N2) and the right-hand side bilinear in (A1, A2)."""
    d = 2 * n
    J = complex_structure(n)
    nu = 2 * d ** 4
    R = lambda *a: ((a[0] * d + a[1]) * d + a[2]) * d + a[3]
    N = lambda *a: d ** 4 + R(*a)
    M1 = [A1[x].T for x in range(d)]   # M[x][z, y] = A[x, y, z]
    M2 = [A2[x].T for x in range(d)]
    rows, rhs = [], []

    def add(pairs, b=Fraction(0)):
        if with_matrix:
            r = [Fraction(0)] * nu
            for k, v in pairs:
                r[k] += v
            rows.append(r)
        rhs.append(Fraction(b))

    for a, b, c, e in itertools.product(range(d), repeat=4):
        add([(R(a, b, c, e), 1), (R(b, a, c, e), 1)])
        add([(R(a, b, c, e), 1), (R(a, b, e, c), 1)])
        add([(R(a, b, c, e), 1), (R(c, e, a, b), -1)])
        add([(R(a, b, c, e), 1), (R(b, c, a, e), 1), (R(c, a, b, e), 1)])
        add([(N(a, b, c, e), 1), (N(a, b, e, c), 1)])
        add([(N(a, b, c, e), 1), (N(b, a, c, e), -1)]
            + [(R(a, b, w, e), -J[w, c]) for w in range(d)]
            + [(R(a, b, c, w), -J[w, e]) for w in range(d)])
        mm = (M1[a] @ M2[b] + M1[b] @ M2[a])[e, c]
        add([(N(a, b, w, e), J[w, c]) for w in range(d)] + [(N(a, b, c, w), -J[w, e]) for w in range(d)],
            -mm)
        v = M1[a][:, b]
        cst = sum(v[w] * A2[w, c, e] for w in range(d)) + (M1[a] @ M2[b])[e, c]
        add([(N(a, w, c, e), J[w, b]) for w in range(d)] + [(N(a, b, c, w), -J[w, e]) for w in range(d)],
            -cst)
        add([(N(a, b, c, e), 1), (N(a, c, e, b), 1), (N(a, e, b, c), 1)])
    return rows, rhs


def _as_tensor(flat, d, rank) -> np.ndarray:
    return np.array(list(flat), dtype=object).reshape((d,) * rank)


@dataclass
class _Solver:
    n: int
    red: list
    pivots: list
    nfree: list
    rhs_index: dict


@lru_cache(maxsize=None)
def _solver(n: int) -> _Solver:
    d = 2 * n
    basis = [_as_tensor(b, d, 3) for b in nablaJ_basis(n)]
    rows, _ = _second_order_system(n, basis[0], basis[0], True)
    nu = 2 * d ** 4
    cols = []
    rhs_index = {}
    for k in range(len(basis)):
        for l in range(k, len(basis)):
            _, b1 = _second_order_system(n, basis[k], basis[l], False)
            if k != l:
                _, b2 = _second_order_system(n, basis[l], basis[k], False)
                b1 = [x + y for x, y in zip(b1, b2)]
            rhs_index[(k, l)] = len(cols)
            cols.append(b1)
    aug = [r + [c[i] for c in cols] for i, r in enumerate(rows)]
    red, piv = _exact_rref(aug, nu + len(cols))
    if any(p >= nu for p in piv):
        raise RuntimeError("almost-Kahler jet system is inconsistent")
    red = [r for r in red if any(r)]
    free = [c for c in range(nu) if c not in piv]
    return _Solver(n, red, piv, free, rhs_index)


def _rand_fraction(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-6, 6), rng.randint(1, 4))


@dataclass
class AlmostKahlerJet:
    n: int
    A: np.ndarray
    R: np.ndarray
    N2: np.ndarray
    RE: np.ndarray
    tables: dict = field(default_factory=dict, repr=False)

    # ------------------------------------------------------------------
    def frame(self) -> np.ndarray:
        """Rows: d/dz_1..d/dz_n, d/dzbar_1..d/dzbar_n in the real basis."""
        n, d = self.n, 2 * self.n
        F = np.empty((2 * n, d), dtype=object)
        F[:] = GaussianRational(0)
        half = Fraction(1, 2)
        for j in range(n):
            F[j, 2 * j] = GaussianRational(half)
            F[j, 2 * j + 1] = GaussianRational(0, -half)
            F[n + j, 2 * j] = GaussianRational(half)
            F[n + j, 2 * j + 1] = GaussianRational(0, half)
        return F

    def complexify(self, T: np.ndarray) -> np.ndarray:
        F = self.frame()
        out = np.vectorize(GaussianRational.coerce, otypes=[object])(T)
        for axis in range(T.ndim):
            out = np.moveaxis(np.tensordot(F, out, axes=([1], [axis])), 0, axis)
        return out

    def _table(self, head: str):
        if head in self.tables:
            return self.tables[head]
        d = 2 * self.n
        if head == "RTX":
            val = (self.complexify(self.R), 0)
        elif head == "NABLAJ":
            val = (self.complexify(self.A), 0)
        elif head == "NABLA2J":
            val = (self.complexify(self.N2), 0)
        elif head == "RE":
            val = (self.complexify(self.RE), 0)
        elif head == "RX":
            s = -sum(self.R[i, j, i, j] for i in range(d) for j in range(d))
            val = (np.array(GaussianRational.coerce(s), dtype=object), 0)
        elif head == "RL":
            J = complex_structure(self.n)
            omega = np.array([[Fraction(int(J[v, u])) for v in range(d)] for u in range(d)], dtype=object)
            val = (self.complexify(omega) * GaussianRational(0, -2), 1)
        elif head == "D1RL":
            val = (self.complexify(self.A) * GaussianRational(0, -2), 1)
        elif head == "TRT10":
            # R^{T(1,0)} = P[R - 1/4 (nabla J) ^ (nabla J)]P, traced over w_j = sqrt2 d/dz_j
            Q = np.empty((d,) * 4, dtype=object)
            for u, v, c, e in itertools.product(range(d), repeat=4):
                Q[u, v, c, e] = sum(self.A[v, c, w] * self.A[u, w, e] for w in range(d))
            T4 = self.R - (Q - Q.transpose(1, 0, 2, 3)) * Fraction(1, 4)
            C = self.complexify(T4)
            n = self.n
            tr = np.empty((2 * n, 2 * n), dtype=object)
            for s1, s2 in itertools.product(range(2 * n), repeat=2):
                tr[s1, s2] = sum((C[s1, s2, j, n + j] for j in range(n)), GaussianRational(0)) * 2
            val = (tr, 0)
        else:
            raise KeyError(f"no jet data for {head}")
        self.tables[head] = val
        return val

    def component(self, head: str, slots) -> Coefficient:
        table, pi = self._table(head)
        idx = tuple((l - 1) if t == TYPE_H else (self.n + l - 1) for l, t in slots)
        return Coefficient({(pi, 0): table[idx] if idx else table.item()})

    def components(self) -> dict:
        heads = ("RTX", "NABLAJ", "NABLA2J", "RE", "RX", "RL", "D1RL", "TRT10")
        return {h: (lambda slots, h=h: self.component(h, slots)) for h in heads}


def random_jet(n: int = 2, seed: int = 0) -> AlmostKahlerJet:
    """A random exact almost-Kahler 2-jet (only ``n = 2`` and small ``n`` are practical)."""
    rng = random.Random(seed)
    d = 2 * n
    basis = nablaJ_basis(n)
    r = [_rand_fraction(rng) for _ in basis]
    A_flat = [sum((rk * b[i] for rk, b in zip(r, basis)), Fraction(0)) for i in range(d ** 3)]
    A = _as_tensor(A_flat, d, 3)
    sol = _solver(n)
    nu = 2 * d ** 4
    x = [Fraction(0)] * nu
    t = {f: _rand_fraction(rng) for f in sol.nfree}
    for f, v in t.items():
        x[f] = v
    for i, p in enumerate(sol.pivots):
        row = sol.red[i]
        val = sum((r[k] * r[l] * row[nu + col] for (k, l), col in sol.rhs_index.items()), Fraction(0))
        val -= sum((row[f] * v for f, v in t.items() if row[f]), Fraction(0))
        x[p] = val
    R = _as_tensor(x[: d ** 4], d, 4)
    N2 = _as_tensor(x[d ** 4:], d, 4)
    re = np.empty((d, d), dtype=object)
    for a in range(d):
        re[a, a] = GaussianRational(0)
        for b in range(a + 1, d):
            v = _rand_fraction(rng)
            re[a, b] = GaussianRational(0, v)
            re[b, a] = GaussianRational(0, -v)
    return AlmostKahlerJet(n, A, R, N2, re)
