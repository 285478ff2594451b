import pytest

from spinc_bergman.identities import (
    IdentityRuleSet, RuleSyntaxError, apply_identities, check_rule, parse_coeff, format_coeff,
)
from spinc_bergman.tensor_symbols import ANTI, HOLO, Expr, atom, fresh

RICCI_RHS = "rhs: (1,0) * NABLA2J(q~,p,r~,s~) + (0,-2) * RTX(p,q~,r~,s~)"


def corrupted_text(rules) -> str:
    text = rules.serialize()
    bad = text.replace(RICCI_RHS, RICCI_RHS.replace("(0,-2)", "(0,2)"))
    assert bad != text
    return bad


def test_every_rule_is_anchored(rules):
    assert len(rules) >= 19
    for r in rules.rules:
        assert r.paper_ref and r.quote


def test_roundtrip_and_hash(rules):
    again = IdentityRuleSet.parse(rules.serialize())
    assert again.serialize() == rules.serialize()
    assert again.hash() == rules.hash()
    assert len(rules.hash()) == 64


def test_hash_detects_edits(rules):
    assert IdentityRuleSet.parse(corrupted_text(rules)).hash() != rules.hash()


@pytest.mark.parametrize("text", [
    "name: x\nlhs: (1,0) * RL(p,q~)\n",
    "name: x\npaper_ref: r\nquote: q\nlhs: (1,0) * RL(p,q~)\nrhs: 0\nbogus: 1\n",
])
def test_syntax_errors(text):
    with pytest.raises(RuleSyntaxError):
        IdentityRuleSet.parse(text)


def test_duplicate_names_rejected(rules):
    block = rules.serialize().split("\n\n")[0]
    with pytest.raises(RuleSyntaxError):
        IdentityRuleSet.parse(block + "\n\n" + block + "\n")


@pytest.mark.parametrize("text", ["(1,0)", "(0,-2)pi^1", "(3/4,-1/2)"])
def test_coefficient_format_roundtrip(text):
    c = parse_coeff(text)
    assert parse_coeff(format_coeff(c)) == c


def test_subset_and_lookup(rules):
    sub = rules.subset(["typevanish"])
    assert 0 < len(sub) < len(rules)
    assert all(r.name.startswith("typevanish") for r in sub.rules)
    with pytest.raises(KeyError):
        rules["no-such-rule"]


def test_type_vanishing_rewrite(rules):
    p, q, r = fresh("p"), fresh("q"), fresh("r")
    e = Expr.of(1, atoms=[atom("NABLAJ", (p, HOLO), (q, HOLO), (r, ANTI))])
    assert apply_identities(e, rules).canonical().is_zero()


def test_rules_hold_on_exact_jet(rules, jet2):
    comps = jet2.components()
    for rule in rules.rules:
        assert check_rule(rule, 2, comps) == [], rule.name


def test_corrupted_rule_is_detected(rules, jet2):
    bad = IdentityRuleSet.parse(corrupted_text(rules))
    assert check_rule(bad["ricci-nabla2j-aa"], 2, jet2.components())
