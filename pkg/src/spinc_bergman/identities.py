"""Identity rules for curvature tensors, loaded from a plain-text data file.

Record format (blank line between records, fields in this order)::

    name: ricci-nabla2j-hh
    paper_ref: ...
    quote: ...
    lhs: (1,0) * NABLA2J(p~,q,r,s)
    rhs: (1,0) * NABLA2J(q,p~,r,s) + (0,-2) * RTX(q,p~,r,s)

Slot syntax: ``label`` (holomorphic), ``label~`` (antiholomorphic) or
``label?`` (any type, copied to the right-hand side).  Labels that occur on
the left-hand side are pattern variables; other right-hand labels are
summed dummies.  Coefficients are ``(re,im)`` optionally followed by
``pi^k``; the zero expression is ``0``.
"""
from __future__ import annotations

import hashlib
import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .coefficient import Coefficient, GaussianRational
from .tensor_symbols import (
    ANTI, HEADS, HOLO, Atom, Expr, Term, fresh, is_dummy, tidy,
)

FIELDS = ("name", "paper_ref", "quote", "lhs", "rhs")
WILD = "?"


class NonTerminating(RuntimeError):
    pass


class RuleSyntaxError(ValueError):
    pass


# --------------------------------------------------------------------------
# rule-text expressions
# --------------------------------------------------------------------------

_COEFF = re.compile(r"^\(([-0-9/]+),([-0-9/]+)\)(?:pi\^(-?\d+))?$")
_ATOM = re.compile(r"^([A-Z0-9]+)\((.*)\)$")
_SLOT = re.compile(r"^([a-z][a-z0-9]*)([~?]?)$")


def parse_coeff(text: str) -> Coefficient:
    m = _COEFF.match(text.strip())
    if not m:
        raise RuleSyntaxError(f"bad coefficient {text!r}")
    re_, im, k = m.groups()
    return Coefficient({(int(k or 0), 0): GaussianRational(Fraction(re_), Fraction(im))})


def format_coeff(c: Coefficient) -> str:
    terms = c.terms
    if len(terms) != 1:
        raise RuleSyntaxError("rule coefficients must be single pi-monomials")
    (k, s), v = next(iter(terms.items()))
    if s:
        raise RuleSyntaxError("sqrt2 not allowed in rule coefficients")
    out = f"({v.re},{v.im})"
    return out + (f"pi^{k}" if k else "")


def parse_atom(text: str) -> Atom:
    m = _ATOM.match(text.strip())
    if not m:
        raise RuleSyntaxError(f"bad atom {text!r}")
    head, inner = m.groups()
    slots = []
    if inner.strip():
        for part in inner.split(","):
            sm = _SLOT.match(part.strip())
            if not sm:
                raise RuleSyntaxError(f"bad slot {part!r}")
            lab, mark = sm.groups()
            typ = ANTI if mark == "~" else WILD if mark == "?" else HOLO
            slots.append((lab, typ))
    return Atom(head, tuple(slots))


def format_atom(a: Atom) -> str:
    mark = {HOLO: "", ANTI: "~", WILD: "?"}
    return f"{a.head}(" + ",".join(f"{l}{mark[t]}" for l, t in a.slots) + ")"


def parse_rule_expr(text: str) -> list[Term]:
    """Parse to a list of raw (unsimplified) terms so wildcard slots survive."""
    text = text.strip()
    if text == "0":
        return []
    terms = []
    for chunk in text.split(" + "):
        parts = [p.strip() for p in chunk.split(" * ")]
        coeff = parse_coeff(parts[0])
        atoms = tuple(parse_atom(p) for p in parts[1:])
        terms.append(Term(coeff, atoms))
    return terms


def format_rule_expr(terms: list[Term]) -> str:
    if not terms:
        return "0"
    return " + ".join(" * ".join([format_coeff(t.coeff)] + [format_atom(a) for a in t.atoms])
                      for t in terms)


# --------------------------------------------------------------------------
# rules and rule sets
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class IdentityRule:
    name: str
    paper_ref: str
    quote: str
    lhs: str
    rhs: str

    @property
    def pattern(self) -> Atom:
        terms = parse_rule_expr(self.lhs)
        if len(terms) != 1 or len(terms[0].atoms) != 1 or terms[0].coeff != Coefficient.const(1):
            raise RuleSyntaxError(f"{self.name}: lhs must be a single atom with coefficient (1,0)")
        return terms[0].atoms[0]

    @property
    def replacement(self) -> list[Term]:
        return parse_rule_expr(self.rhs)

    def lhs_expr(self, types: dict | None = None) -> Expr:
        return _instantiate([Term(Coefficient.const(1), (self.pattern,))], {}, types or {})

    def rhs_expr(self, types: dict | None = None) -> Expr:
        return _instantiate(self.replacement, {}, types or {})


def _instantiate(terms: list[Term], binding: dict, types: dict) -> Expr:
    """Substitute bound labels/types; rename free right-hand labels apart."""
    out = []
    for t in terms:
        rename = {}
        atoms = []
        for a in t.atoms:
            slots = []
            for lab, typ in a.slots:
                if lab in binding:
                    new = binding[lab]
                else:
                    new = rename.setdefault(lab, fresh("r"))
                if typ == WILD:
                    typ = types.get(lab)
                    if typ is None:
                        raise RuleSyntaxError(f"unbound wildcard type for {lab}")
                slots.append((new, typ))
            atoms.append(Atom(a.head, tuple(slots)))
        tt = tidy(Term(t.coeff, tuple(atoms)))
        if tt is not None:
            out.append(tt)
    return Expr(out)


class IdentityRuleSet:
    def __init__(self, rules: list[IdentityRule], text: str | None = None):
        self.rules = list(rules)
        names = [r.name for r in self.rules]
        if len(set(names)) != len(names):
            raise RuleSyntaxError("duplicate rule names")
        for r in self.rules:
            r.pattern  # validate
            r.replacement
        self._text = text

    # serialization -------------------------------------------------------
    @classmethod
    def parse(cls, text: str) -> "IdentityRuleSet":
        rules = []
        for block in re.split(r"\n\s*\n", text.strip("\n")):
            lines = [ln for ln in block.splitlines() if ln.strip() and not ln.startswith("#")]
            if not lines:
                continue
            rec = {}
            for ln in lines:
                key, sep, val = ln.partition(": ")
                if not sep or key not in FIELDS:
                    raise RuleSyntaxError(f"bad line {ln!r}")
                rec[key] = val
            missing = [f for f in FIELDS if f not in rec]
            if missing:
                raise RuleSyntaxError(f"missing fields {missing}")
            rules.append(IdentityRule(**rec))
        return cls(rules, text)

    def serialize(self) -> str:
        blocks = ["\n".join(f"{f}: {getattr(r, f)}" for f in FIELDS) for r in self.rules]
        return "\n\n".join(blocks) + "\n"

    @classmethod
    def load(cls, path: str | Path | None = None) -> "IdentityRuleSet":
        if path is None:
            text = resources.files("spinc_bergman.data").joinpath("identities.txt").read_text()
        else:
            text = Path(path).read_text()
        return cls.parse(text)

    def hash(self) -> str:
        return hashlib.sha256(self.serialize().encode()).hexdigest()

    def __getitem__(self, name: str) -> IdentityRule:
        for r in self.rules:
            if r.name == name:
                return r
        raise KeyError(name)

    def subset(self, names) -> "IdentityRuleSet":
        names = set(names)
        return IdentityRuleSet([r for r in self.rules if r.name in names or
                                any(r.name.startswith(n + "-") for n in names)])

    def __len__(self):
        return len(self.rules)


# --------------------------------------------------------------------------
# rewriting
# --------------------------------------------------------------------------

def match_atom(pattern: Atom, a: Atom):
    """Return ``(sign, binding, types)`` if ``a`` matches ``pattern`` up to symmetry."""
    if pattern.head != a.head:
        return None
    for perm, sign in HEADS[a.head].symmetries:
        slots = tuple(a.slots[p] for p in perm)
        binding, types = {}, {}
        ok = True
        for (plab, ptyp), (lab, typ) in zip(pattern.slots, slots):
            if ptyp != WILD and ptyp != typ:
                ok = False
                break
            if plab in binding and (binding[plab] != lab or types[plab] != typ):
                ok = False
                break
            binding[plab] = lab
            types[plab] = typ
        if ok:
            return sign, binding, types
    return None


def _rewrite_once(t: Term, rules: list[IdentityRule]):
    for idx, a in enumerate(t.atoms):
        for rule in rules:
            m = match_atom(rule.pattern, a)
            if m is None:
                continue
            sign, binding, types = m
            rest = t.atoms[:idx] + t.atoms[idx + 1:]
            rhs = _instantiate(rule.replacement, binding, types)
            out = []
            for rt in rhs.terms():
                tt = tidy(Term(t.coeff * rt.coeff * sign, rest + rt.atoms, t.gens, t.ext))
                if tt is not None:
                    out.append(tt)
            return rule.name, out
    return None


def apply_identities(e: Expr, ruleset: IdentityRuleSet, budget: int = 100000,
                     trace: list | None = None) -> Expr:
    """Rewrite to a fixed point; rules are tried in file order."""
    done, todo = [], list(e.terms())
    steps = 0
    while todo:
        t = todo.pop()
        r = _rewrite_once(t, ruleset.rules)
        if r is None:
            done.append(t)
            continue
        steps += 1
        if steps > budget:
            raise NonTerminating(f"rule application exceeded {budget} steps (last: {r[0]})")
        if trace is not None:
            trace.append(r[0])
        todo.extend(r[1])
    return Expr(done).canonical()


def rule_instances(rule: IdentityRule, n: int):
    """Yield ``(binding, lhs, rhs)`` for every concrete index/type choice of the pattern."""
    pat = rule.pattern
    labels = list(dict.fromkeys(l for l, _ in pat.slots))
    wild = [l for l, t in pat.slots if t == WILD]
    for values in itertools.product(range(1, n + 1), repeat=len(labels)):
        binding = dict(zip(labels, values))
        for tys in itertools.product((HOLO, ANTI), repeat=len(wild)):
            types = dict(zip(wild, tys))
            yield binding, _instantiate([Term(Coefficient.const(1), (pat,))], binding, types), \
                _instantiate(rule.replacement, binding, types)


def check_rule(rule: IdentityRule, n: int, components) -> list:
    """Exact check of a rule on concrete tensor data; returns failing instances."""
    from .tensor_symbols import evaluate_scalar
    bad = []
    for binding, lhs, rhs in rule_instances(rule, n):
        lv = evaluate_scalar(lhs, n, components)
        rv = evaluate_scalar(rhs, n, components)
        if lv != rv:
            bad.append((binding, lv, rv))
    return bad
