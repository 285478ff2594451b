"""Abstract indexed curvature tensors and the shared term/expression type.

Every symbolic object in the package is an :class:`Expr`: a sum of
:class:`Term` records, each holding an exact :class:`Coefficient`, a product
of curvature atoms, a normal-ordered word in the Weyl generators and a
normal-ordered exterior word.  Pure tensor expressions simply have an empty
generator word and the identity exterior word.

Index labels are either concrete slot numbers (``int``, 1-based) or dummy
labels (``str``) which are summed over ``1..n`` with ``n`` left symbolic.
Tensor slots are typed: ``'h'`` stands for ``d/dz_i`` and ``'a'`` for
``d/dzbar_i`` in the coordinate frame where ``w_i = sqrt2 d/dz_i``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping, Sequence, Union

from .coefficient import Coefficient, GaussianRational, as_coefficient

Label = Union[int, str]
Slot = tuple  # (label, 'h' | 'a')

HOLO, ANTI = "h", "a"


def flip(typ: str) -> str:
    return ANTI if typ == HOLO else HOLO


# --------------------------------------------------------------------------
# atom heads
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Head:
    name: str
    arity: int
    symmetries: tuple  # tuple of (permutation, sign)
    conj_sign: int  # sign picked up under complex conjugation (imaginary-valued => -1)
    doc: str = ""


def _close_group(gens: Sequence[tuple], arity: int) -> tuple:
    ident = (tuple(range(arity)), 1)
    group = {ident[0]: 1}
    frontier = [ident]
    while frontier:
        new = []
        for perm, sign in frontier:
            for gperm, gsign in gens:
                comp = tuple(perm[g] for g in gperm)
                if comp not in group:
                    group[comp] = sign * gsign
                    new.append((comp, sign * gsign))
        frontier = new
    return tuple(sorted(group.items()))


HEADS: dict[str, Head] = {}


def _register(name, arity, gens, conj_sign, doc):
    HEADS[name] = Head(name, arity, _close_group(gens, arity), conj_sign, doc)


_register("RTX", 4, [((1, 0, 2, 3), -1), ((0, 1, 3, 2), -1), ((2, 3, 0, 1), 1)], 1,
          "<R^TX(s1,s2)s3,s4>")
_register("RE", 2, [((1, 0), -1)], -1, "R^E(s1,s2)")
_register("NABLAJ", 3, [((0, 2, 1), -1)], 1, "<(nabla_s1 J)s2,s3>")
_register("NABLA2J", 4, [((0, 1, 3, 2), -1)], 1, "<(nabla nabla J)_(s1,s2) s3,s4>")
_register("RX", 0, [], 1, "scalar curvature r^X")
_register("TRT10", 2, [((1, 0), -1)], -1, "tr R^{T(1,0)X}(s1,s2)")
_register("RL", 2, [((1, 0), -1)], -1, "R^L(s1,s2), type (1,1)")
_register("RCLIFF", 2, [((1, 0), -1)], -1, "R^Cliff(s1,s2) (kept opaque)")
_register("D1RL", 3, [((0, 2, 1), -1)], -1, "(d_s1 R^L)(s2,s3)")
_register("D2RL", 4, [((1, 0, 2, 3), 1), ((0, 1, 3, 2), -1)], -1, "(d_s1 d_s2 R^L)(s3,s4)")
_register("D2TAU", 2, [((1, 0), 1)], 1, "(d_s1 d_s2 tau)")

HEAD_ORDER = {name: k for k, name in enumerate(HEADS)}


@dataclass(frozen=True, order=True)
class Atom:
    head: str
    slots: tuple = ()

    def __post_init__(self):
        if self.head not in HEADS:
            raise ValueError(f"unknown tensor head {self.head!r}")
        if len(self.slots) != HEADS[self.head].arity:
            raise ValueError(f"{self.head} takes {HEADS[self.head].arity} slots")

    def labels(self) -> list:
        return [s[0] for s in self.slots]

    def type_vanishes(self) -> bool:
        """Mixed-type <(nabla J).,.> and pure-type R^L components vanish."""
        if self.head == "NABLAJ":
            return len({t for _, t in self.slots}) > 1
        if self.head == "RL":
            return self.slots[0][1] == self.slots[1][1]
        return False

    def __str__(self):
        inner = ",".join(f"{lab}{'' if t == HOLO else '~'}" for lab, t in self.slots)
        return f"{self.head}({inner})"


def atom(head: str, *slots) -> Atom:
    return Atom(head, tuple(tuple(s) for s in slots))


# --------------------------------------------------------------------------
# label helpers
# --------------------------------------------------------------------------

_fresh = itertools.count()


def fresh(prefix: str = "t") -> str:
    return f"{prefix}{next(_fresh)}"


def is_dummy(label: Label) -> bool:
    return isinstance(label, str)


def label_key(label: Label):
    return (1, label) if isinstance(label, str) else (0, label)


def delta(x: Label, y: Label):
    """Resolve a Kronecker delta.  Returns ``None`` for zero, else a substitution map."""
    if is_dummy(y):
        return {} if x == y else {y: x}
    if is_dummy(x):
        return {x: y}
    return {} if x == y else None


# --------------------------------------------------------------------------
# terms
# --------------------------------------------------------------------------

GEN_RANK = {"B": 0, "Z": 1, "ZB": 2, "BP": 3, "ZP": 4, "ZBP": 5}
EMPTY_EXT = ((), False, ())
PROJ_EXT = ((), True, ())


@dataclass(frozen=True)
class Term:
    coeff: Coefficient
    atoms: tuple = ()
    gens: tuple = ()      # ((kind, label), ...)
    ext: tuple = EMPTY_EXT  # (creation labels, projector flag, annihilation labels)

    @property
    def key(self):
        return (self.atoms, self.gens, self.ext)

    def labels(self) -> list:
        out = []
        for a in self.atoms:
            out.extend(a.labels())
        out.extend(g[1] for g in self.gens)
        out.extend(self.ext[0])
        out.extend(self.ext[2])
        return out

    def dummies(self) -> list:
        seen = []
        for lab in self.labels():
            if is_dummy(lab) and lab not in seen:
                seen.append(lab)
        return seen

    def substitute(self, mapping: Mapping) -> "Term":
        if not mapping:
            return self
        sub = lambda lab: mapping.get(lab, lab)
        atoms = tuple(Atom(a.head, tuple((sub(l), t) for l, t in a.slots)) for a in self.atoms)
        gens = tuple((k, sub(l)) for k, l in self.gens)
        cre, proj, ann = self.ext
        return Term(self.coeff, atoms, gens, (tuple(map(sub, cre)), proj, tuple(map(sub, ann))))

    def rename_apart(self) -> "Term":
        return self.substitute({d: fresh() for d in self.dummies()})

    def scaled(self, c) -> "Term":
        return Term(self.coeff * as_coefficient(c), self.atoms, self.gens, self.ext)

    def with_(self, **kw) -> "Term":
        fields = dict(coeff=self.coeff, atoms=self.atoms, gens=self.gens, ext=self.ext)
        fields.update(kw)
        return Term(**fields)


def sort_anticommuting(labels: Sequence[Label]):
    """Sort with permutation sign; repeated labels give sign 0."""
    labs = list(labels)
    sign = 1
    for i in range(len(labs)):
        for j in range(len(labs) - 1 - i):
            a, b = labs[j], labs[j + 1]
            if a == b:
                return 0, ()
            if label_key(a) > label_key(b):
                labs[j], labs[j + 1] = b, a
                sign = -sign
    if len(set(labs)) != len(labs):
        return 0, ()
    return sign, tuple(labs)


def sort_gens(gens: Iterable) -> tuple:
    """Sort a word that is already ordered by kind; factors of one kind commute."""
    return tuple(sorted(gens, key=lambda g: (GEN_RANK[g[0]], label_key(g[1]))))


def tidy(term: Term) -> Term | None:
    """Sort commuting generator factors and anticommuting exterior labels."""
    ranks = [GEN_RANK[k] for k, _ in term.gens]
    if ranks != sorted(ranks):
        raise ValueError("generator word is not in normal order")
    cre, proj, ann = term.ext
    s1, cre = sort_anticommuting(cre)
    s2, ann = sort_anticommuting(ann)
    if s1 * s2 == 0:
        return None
    for a in term.atoms:
        if a.type_vanishes():
            return None
    coeff = term.coeff if s1 * s2 == 1 else -term.coeff
    return Term(coeff, tuple(sorted(term.atoms)), sort_gens(term.gens), (cre, proj, ann))


# --------------------------------------------------------------------------
# canonicalization
# --------------------------------------------------------------------------

CANON_NAMES = [c for c in "ijklmpqrsuvxyabcdefgh"] + [f"n{k}" for k in range(50)]


def _arrangements(atoms: tuple) -> Iterator[tuple[int, tuple]]:
    """All (sign, atom tuple) obtained by per-atom symmetries and reordering equal heads."""
    groups = {}
    for a in atoms:
        groups.setdefault(a.head, []).append(a)
    heads = sorted(groups, key=lambda h: HEAD_ORDER[h])
    per_head = []
    for h in heads:
        options = []
        for perm in itertools.permutations(groups[h]):
            options.append(perm)
        per_head.append(options)
    sym_cache = {}

    def variants(a: Atom):
        if a not in sym_cache:
            vs = []
            for perm, sign in HEADS[a.head].symmetries:
                vs.append((sign, Atom(a.head, tuple(a.slots[p] for p in perm))))
            sym_cache[a] = vs
        return sym_cache[a]

    for choice in itertools.product(*per_head):
        ordered = [a for block in choice for a in block]
        for combo in itertools.product(*(variants(a) for a in ordered)):
            sign = 1
            for s, _ in combo:
                sign *= s
            yield sign, tuple(a for _, a in combo)


def _relabel_key(atoms: tuple, gens: tuple, ext: tuple, mapping: dict):
    sub = lambda lab: mapping.get(lab, lab)
    new_atoms = tuple(Atom(a.head, tuple((sub(l), t) for l, t in a.slots)) for a in atoms)
    new_gens = sort_gens((k, sub(l)) for k, l in gens)
    cre, proj, ann = ext
    s1, cre2 = sort_anticommuting([sub(l) for l in cre])
    s2, ann2 = sort_anticommuting([sub(l) for l in ann])
    return s1 * s2, new_atoms, new_gens, (cre2, proj, ann2)


def _sortable(atoms, gens, ext):
    def lk(lab):
        return label_key(lab)
    return (
        tuple((HEAD_ORDER[a.head], tuple((lk(l), t) for l, t in a.slots)) for a in atoms),
        tuple((GEN_RANK[k], lk(l)) for k, l in gens),
        (tuple(map(lk, ext[0])), ext[1], tuple(map(lk, ext[2]))),
    )


def canonical_term(term: Term) -> Term | None:
    """Unique representative of the term under tensor symmetries and dummy renaming.

    Returns ``None`` when the term vanishes (by type or because it equals
    its own negative).
    """
    term = tidy(term)
    if term is None:
        return None
    best = None
    best_signs = set()
    dummies = term.dummies()
    for sign, atoms in _arrangements(term.atoms):
        mapping = {}
        for a in atoms:
            for lab in a.labels():
                if is_dummy(lab) and lab not in mapping:
                    mapping[lab] = CANON_NAMES[len(mapping)]
        rest = [d for d in dummies if d not in mapping]
        for perm in itertools.permutations(rest):
            full = dict(mapping)
            for d in perm:
                full[d] = CANON_NAMES[len(full)]
            s, a2, g2, e2 = _relabel_key(atoms, term.gens, term.ext, full)
            if s == 0:
                return None
            key = _sortable(a2, g2, e2)
            total = sign * s
            if best is None or key < best[0]:
                best = (key, a2, g2, e2)
                best_signs = {total}
            elif key == best[0]:
                best_signs.add(total)
    if best is None:
        # no atoms: only gens / ext
        return term
    if len(best_signs) > 1:
        return None
    (sgn,) = best_signs
    coeff = term.coeff if sgn == 1 else -term.coeff
    return Term(coeff, best[1], best[2], best[3])


# --------------------------------------------------------------------------
# expressions
# --------------------------------------------------------------------------

class Expr:
    """Sum of terms keyed by (atoms, gens, ext); immutable by convention."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Iterable[Term] = ()):
        acc: dict = {}
        for t in terms:
            if t is None or not t.coeff:
                continue
            k = t.key
            acc[k] = acc[k] + t.coeff if k in acc else t.coeff
        self._terms = {k: c for k, c in acc.items() if c}

    @classmethod
    def scalar(cls, c=1) -> "Expr":
        return cls([Term(as_coefficient(c))])

    @classmethod
    def of(cls, c=1, atoms=(), gens=(), ext=EMPTY_EXT) -> "Expr":
        return cls([Term(as_coefficient(c), tuple(atoms), tuple(gens), ext)])

    def terms(self) -> list[Term]:
        return [Term(c, *k) for k, c in self._terms.items()]

    def __iter__(self):
        return iter(self.terms())

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __add__(self, other: "Expr") -> "Expr":
        return Expr(self.terms() + other.terms())

    def __neg__(self) -> "Expr":
        return Expr(t.scaled(-1) for t in self.terms())

    def __sub__(self, other: "Expr") -> "Expr":
        return self + (-other)

    def scale(self, c) -> "Expr":
        c = as_coefficient(c)
        return Expr(t.scaled(c) for t in self.terms())

    __rmul__ = lambda self, c: self.scale(c)

    def map_terms(self, fn: Callable[[Term], Iterable[Term] | Term | None]) -> "Expr":
        out = []
        for t in self.terms():
            r = fn(t)
            if r is None:
                continue
            if isinstance(r, Term):
                out.append(r)
            else:
                out.extend(r)
        return Expr(out)

    def canonical(self) -> "Expr":
        return self.map_terms(canonical_term)

    def equals(self, other: "Expr") -> bool:
        return (self - other).canonical().is_zero()

    def to_text(self) -> str:
        """Deterministic text rendering (canonical form, sorted terms)."""
        c = self.canonical()
        if c.is_zero():
            return "0"
        rows = []
        for t in sorted(c.terms(), key=lambda t: _sortable(t.atoms, t.gens, t.ext)):
            rows.append(format_term(t))
        return "\n".join(rows)

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"Expr({len(self._terms)} terms)"


def format_term(t: Term) -> str:
    parts = [f"[{t.coeff}]"]
    parts.extend(str(a) for a in t.atoms)
    gname = {"B": "b", "BP": "b+", "Z": "z", "ZB": "zb", "ZP": "z'", "ZBP": "zb'"}
    parts.extend(f"{gname[k]}_{l}" for k, l in t.gens)
    cre, proj, ann = t.ext
    ext = [f"dzb_{l}" for l in cre]
    if proj:
        ext.append("I")
    ext.extend(f"i_{l}" for l in ann)
    if ext:
        parts.append("{" + " ".join(ext) + "}")
    return " ".join(parts)


def expr_sum(exprs: Iterable[Expr]) -> Expr:
    out = []
    for e in exprs:
        out.extend(e.terms())
    return Expr(out)


def tensor(c, *atoms: Atom) -> Expr:
    return Expr.of(c, atoms)


# --------------------------------------------------------------------------
# conjugation of tensor data
# --------------------------------------------------------------------------

def conjugate_atom(a: Atom) -> tuple[int, Atom]:
    sign = HEADS[a.head].conj_sign
    return sign, Atom(a.head, tuple((l, flip(t)) for l, t in a.slots))


def conjugate_atoms(atoms: tuple) -> tuple[int, tuple]:
    sign = 1
    out = []
    for a in atoms:
        s, b = conjugate_atom(a)
        sign *= s
        out.append(b)
    return sign, tuple(out)


def conjugate(e: Expr) -> Expr:
    """Complex conjugate of a pure tensor expression (slot types swapped)."""
    def conj(t: Term) -> Term:
        if t.gens or t.ext != EMPTY_EXT:
            raise ValueError("conjugate() acts on pure tensor expressions; use formal_adjoint")
        s, atoms = conjugate_atoms(t.atoms)
        return Term(t.coeff.conjugate().__mul__(s), atoms)
    return e.map_terms(conj)


def canonicalize(e: Expr) -> Expr:
    return e.canonical()


# --------------------------------------------------------------------------
# numeric evaluation
# --------------------------------------------------------------------------

def iter_assignments(labels: Sequence[str], n: int):
    for values in itertools.product(range(1, n + 1), repeat=len(labels)):
        yield dict(zip(labels, values))


def evaluate_scalar(e: Expr, n: int, components: Mapping[str, Callable]) -> Coefficient:
    """Exact value of a pure tensor expression for concrete ``n``.

    ``components[head](slots)`` returns a :class:`Coefficient` for concrete
    slots ``((index, type), ...)``.
    """
    total = Coefficient()
    for t in e.terms():
        if t.gens or t.ext != EMPTY_EXT:
            raise ValueError("evaluate_scalar needs a pure tensor expression")
        acc = Coefficient()
        for assign in iter_assignments(t.dummies(), n):
            val = Coefficient.const(1)
            for a in t.atoms:
                slots = tuple((assign.get(l, l), typ) for l, typ in a.slots)
                val = val * components[a.head](slots)
                if not val:
                    break
            acc = acc + val
        total = total + acc * t.coeff
    return total


# --------------------------------------------------------------------------
# raw (not yet normal-ordered) terms used by the rewriting engines
# --------------------------------------------------------------------------

class SymbolicDimensionError(ValueError):
    """A free index sum produced a factor of n but n was left symbolic."""


@dataclass
class Raw:
    coeff: Coefficient
    atoms: tuple
    gens: list   # [(kind, label)], arbitrary order
    ops: list    # [('c', l) | ('a', l) | ('I', None)]

    @classmethod
    def from_term(cls, t: Term) -> "Raw":
        cre, proj, ann = t.ext
        ops = [("c", l) for l in cre] + ([("I", None)] if proj else []) + [("a", l) for l in ann]
        return cls(t.coeff, t.atoms, list(t.gens), ops)

    def labels(self) -> list:
        out = []
        for a in self.atoms:
            out.extend(a.labels())
        out.extend(l for _, l in self.gens)
        out.extend(l for k, l in self.ops if k != "I")
        return out

    def copy(self, **kw) -> "Raw":
        d = dict(coeff=self.coeff, atoms=self.atoms, gens=list(self.gens), ops=list(self.ops))
        d.update(kw)
        return Raw(**d)

    def substitute(self, mapping: Mapping) -> "Raw":
        if not mapping:
            return self
        sub = lambda lab: mapping.get(lab, lab)
        atoms = tuple(Atom(a.head, tuple((sub(l), t) for l, t in a.slots)) for a in self.atoms)
        return Raw(self.coeff, atoms, [(k, sub(l)) for k, l in self.gens],
                   [(k, sub(l)) if k != "I" else (k, l) for k, l in self.ops])

    def to_term(self) -> Term:
        cre = tuple(l for k, l in self.ops if k == "c")
        ann = tuple(l for k, l in self.ops if k == "a")
        proj = any(k == "I" for k, _ in self.ops)
        return Term(self.coeff, tuple(self.atoms), tuple(self.gens), (cre, proj, ann))


def contract(raw: Raw, x: Label, y: Label, n: int | None = None) -> Raw | None:
    """Multiply ``raw`` (with the paired factors already removed) by delta_{xy}.

    A dummy label that no longer appears anywhere is a free sum and
    contributes a factor ``n``.
    """
    m = delta(x, y)
    if m is None:
        return None
    survivor = x if (not m or y in m) else y
    out = raw.substitute(m)
    if is_dummy(survivor) and survivor not in out.labels():
        if n is None:
            raise SymbolicDimensionError(f"free index sum over {survivor!r} needs concrete n")
        out = out.copy(coeff=out.coeff * n)
    return out


def raw_product(t1: Term, t2: Term) -> Raw:
    """Juxtapose two terms (dummies of the second renamed apart)."""
    t2 = t2.rename_apart()
    r1, r2 = Raw.from_term(t1), Raw.from_term(t2)
    return Raw(t1.coeff * t2.coeff, t1.atoms + t2.atoms, r1.gens + r2.gens, r1.ops + r2.ops)
