"""Cross-check of the symbolic normal ordering against dense Fock products.

A word of degree d in the generators acts exactly on truncated states of
total occupation at most ``cutoff - d``; both sides are compared on those
columns only.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.sparse as sp

from ..coefficient import Coefficient, GaussianRational
from ..tensor_symbols import Expr, Raw
from ..weyl_fock_algebra import normal_order_raw
from .fock import FockBasisSpec, fock_matrix, to_orthonormal_exterior, word_matrix

KINDS = ("B", "BP", "Z", "ZB")


class OracleFailure(AssertionError):
    pass


@dataclass
class OracleResult:
    max_deviation: float
    tolerance: float
    words: int
    worst: str = ""
    deviations: list = field(default_factory=list, repr=False)

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance


def random_word(rng: random.Random, n: int, max_degree: int = 4, exterior: bool = False) -> Raw:
    """Random raw word: Gaussian-rational coefficient, generators and CAR factors."""
    deg = rng.randint(1, max_degree)
    gens = [(rng.choice(KINDS), rng.randint(1, n)) for _ in range(deg)]
    ops = []
    if exterior:
        ops = [(rng.choice("ca"), rng.randint(1, n)) for _ in range(rng.randint(0, 2))]
    c = GaussianRational(Fraction(rng.randint(-9, 9), rng.randint(1, 5)),
                         Fraction(rng.randint(-9, 9), rng.randint(1, 5)))
    return Raw(Coefficient({(0, 0): c}), (), gens, ops)


def low_columns(spec: FockBasisSpec, degree: int) -> np.ndarray:
    return np.flatnonzero(spec.totals() <= spec.cutoff - degree)


def word_deviation(raw: Raw, spec: FockBasisSpec, params=None, components=None) -> float:
    """max |word product - matrix of its symbolic normal order| on exact columns."""
    cols = low_columns(spec, len(raw.gens))
    c = complex(raw.coeff.evaluate())
    for a in raw.atoms:
        c *= complex(components[a.head](a.slots).evaluate())
    direct = c * word_matrix(raw.gens, raw.ops, spec, params)
    ordered = fock_matrix(Expr(normal_order_raw(raw, spec.n)), spec, params, components)
    diff = (direct - ordered)[:, cols]
    return float(np.abs(diff.toarray()).max(initial=0.0))


def symbolic_numeric_oracle(words, spec: FockBasisSpec, params=None, components=None,
                            tol: float = 1e-10, strict: bool = True) -> OracleResult:
    """Compare every raw word with its symbolic normal order."""
    devs = []
    worst, worst_dev = "", 0.0
    for raw in words:
        d = word_deviation(raw, spec, params, components)
        devs.append(d)
        if d >= worst_dev:
            worst, worst_dev = f"{raw.gens} {raw.ops}", d
    res = OracleResult(max(devs, default=0.0), tol, len(devs), worst, devs)
    if strict and not res.passed:
        raise OracleFailure(f"deviation {res.max_deviation:.3g} > {tol:g} for word {res.worst}")
    return res


def random_word_oracle(count: int = 200, n_max: int = 2, max_degree: int = 4, cutoff: int = 8,
                       seed: int = 0, tol: float = 1e-10, exterior: bool = True) -> OracleResult:
    rng = random.Random(seed)
    specs = {n: FockBasisSpec(n, cutoff, exterior) for n in range(1, n_max + 1)}
    words = {n: [] for n in specs}
    for _ in range(count):
        n = rng.randint(1, n_max)
        words[n].append(random_word(rng, n, max_degree, exterior))
    results = [symbolic_numeric_oracle(w, specs[n], tol=tol, strict=False) for n, w in words.items()]
    devs = [d for r in results for d in r.deviations]
    worst = max(results, key=lambda r: r.max_deviation)
    res = OracleResult(max(devs), tol, len(devs), worst.worst, devs)
    if not res.passed:
        raise OracleFailure(f"deviation {res.max_deviation:.3g} > {tol:g} for word {res.worst}")
    return res


def shuffled(words: list[Raw], rng: random.Random) -> list[Raw]:
    """Copies of ``words`` with their generator factors shuffled."""
    out = []
    for r in words:
        gens = list(r.gens)
        rng.shuffle(gens)
        out.append(r.copy(gens=gens))
    return out


def concrete_words(op: Expr, n: int) -> list[Raw]:
    """Terms of ``op`` with every dummy label replaced by concrete values."""
    from ..tensor_symbols import is_dummy, iter_assignments
    out = []
    for t in op.terms():
        r = Raw.from_term(t)
        dummies = [l for l in dict.fromkeys(r.labels()) if is_dummy(l)]
        out.extend(r.substitute(a) for a in iter_assignments(dummies, n))
    return out


def operator_oracle(op: Expr, jet, cutoff: int = 8, seed: int = 0, tol: float = 1e-10) -> OracleResult:
    """Shuffle the generator factors of every concrete term of ``op`` and compare."""
    rng = random.Random(seed)
    spec = FockBasisSpec(jet.n, cutoff, True)
    words = shuffled(concrete_words(op, jet.n), rng)
    return symbolic_numeric_oracle(words, spec, components=jet.components(), tol=tol)


def hermiticity_defect(op: Expr, jet, cutoff: int = 8, degree: int = 3) -> float:
    """max |M - M^*| of the operator matrix (orthonormal exterior basis) on exact rows and columns."""
    spec = FockBasisSpec(jet.n, cutoff, True)
    m = to_orthonormal_exterior(fock_matrix(op, spec, components=jet.components()), spec)
    keep = low_columns(spec, degree)
    d = (m - m.conj().T).tocsr()[keep][:, keep]
    return float(np.abs(d.toarray()).max(initial=0.0))
