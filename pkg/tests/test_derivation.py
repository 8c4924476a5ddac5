import json

import pytest
from hypothesis import given, settings

from palseq.calculus import REDUCTION_RULES, RuleName as R
from palseq.derivation import (DerivationFormatError, build, check_derivation, export, from_json,
                               height, lift_to_pal, lower_to_el, rules_used, to_json_obj,
                               to_latex, translate_sequent)
from palseq.formula import parse
from palseq.search import Proved, prove, prove_formula
from palseq.sequent import Labelled, Sequent, parse_sequent

from .known_derivations import axiom5, node
from .strategies import formulas

S = parse_sequent


def proof_of(text):
    r = prove_formula(parse(text))
    assert isinstance(r, Proved)
    return r.derivation


def test_known_axiom5_derivation():
    d = axiom5()
    assert check_derivation(d)
    assert height(d) == 9
    assert {R.Sym, R.Trans, R.KL, R.KR} <= rules_used(d)
    assert not check_derivation(axiom5(drop_sym=True))


def test_height_examples():
    leaf = node(R.InitProp, "x: p => x: p", ["x: p"])
    assert height(leaf) == 1
    assert height(proof_of("K_a p -> p")) == 4
    # a binary node is one taller than its tallest child
    d = prove(S("x: p & q => x: q & (p -> p -> p -> p)")).derivation
    fork = next(n for n in d.nodes() if len(n.children) == 2)
    hs = sorted(height(c) for c in fork.children)
    assert hs[0] < hs[1]
    assert height(fork) == 1 + hs[1]


def test_text_export_golden():
    assert export(proof_of("K_a p -> p")) == "\n".join([
        "=> x0: K_a p -> p   [ImpR]",
        "  x0: K_a p => x0: p   [Ref]",
        "    x0 ~a x0, x0: K_a p => x0: p   [KL]",
        "      x0 ~a x0, x0: K_a p, x0: p => x0: p   [InitProp]",
    ])


def test_latex_export():
    d = proof_of("K_a p -> p")
    doc = to_latex(d)
    assert doc.startswith("\\documentclass") and "\\usepackage{bussproofs}" in doc
    assert doc.count("\\UnaryInfC") == 3 and doc.count("\\AxiomC") == 1
    assert doc.rstrip().endswith("\\end{document}")
    leaf = to_latex(node(R.InitProp, "x: p => x: p", ["x: p"]), standalone=False)
    assert leaf.startswith("\\AxiomC{$") and leaf.endswith("\\DisplayProof")
    assert export(d, "latex") == doc
    with pytest.raises(ValueError):
        export(d, "svg")


# JSON ---------------------------------------------------------------------------

@pytest.mark.parametrize("text", ["K_a p -> p", "~K_a p -> K_a ~K_a p",
                                  "[p]K_a q <-> (p -> K_a [p]q)", "[p][q]r <-> [p & [p]q]r"])
def test_json_roundtrip(text):
    d = proof_of(text)
    back = from_json(export(d, "json"))
    assert back == d
    assert from_json(to_json_obj(d)) == d


def test_json_without_principal_is_inferred():
    d = axiom5()
    obj = to_json_obj(d)

    def strip(o):
        o.pop("principal")
        for c in o["children"]:
            strip(c)
    strip(obj)
    back = from_json(json.dumps(obj))
    assert check_derivation(back) and back == d


@pytest.mark.parametrize("mutate, path", [
    (lambda o: o.pop("rule"), "$"),
    (lambda o: o["children"][0].update(children=5), "$.children[0].children"),
    (lambda o: o["seq"]["ant"].append({"rel": ["x", "a"]}), "$.seq.ant[0].rel"),
    (lambda o: o["seq"]["suc"][0].update(lab=["x0", "p ->"]), "$.seq.suc[0].lab[1]"),
])
def test_json_errors_carry_a_path(mutate, path):
    obj = to_json_obj(proof_of("K_a p -> p"))
    mutate(obj)
    with pytest.raises(DerivationFormatError) as exc:
        from_json(json.dumps(obj))
    assert exc.value.path == path


def test_json_errors_for_bad_text_and_rules():
    with pytest.raises(DerivationFormatError, match="invalid JSON"):
        from_json("{not json")
    obj = to_json_obj(proof_of("p -> p"))
    obj["children"][0]["rule"] = "Cut"
    with pytest.raises(DerivationFormatError, match="unknown rule") as exc:
        from_json(obj)
    assert exc.value.path == "$.children[0].rule"


def test_mutated_eigenvariable_is_read_but_rejected():
    obj = to_json_obj(proof_of("K_a p -> K_a K_a p"))

    def retarget(o):
        if o["rule"] == "KR":
            o["eigen"] = "x0"
            return True
        return any(retarget(c) for c in o["children"])
    assert retarget(obj)
    assert not check_derivation(from_json(obj))


# lowering and lifting -----------------------------------------------------------

def test_lower_simple_announcement():
    d = proof_of("[p]q -> p -> q")
    low = lower_to_el(d)
    assert low.root == S("=> x0: (p -> q) -> p -> q")
    assert check_derivation(low)
    assert not rules_used(low) & set(REDUCTION_RULES)
    assert height(low) <= height(d)


def test_lower_elides_r6():
    d = proof_of("[p][q]r -> [p & [p]q]r")
    assert R.R6L in rules_used(d) or R.R6R in rules_used(d)
    low = lower_to_el(d)
    assert check_derivation(low) and height(low) < height(d)


def test_lower_leaves_el_unchanged():
    d = proof_of("K_a (p -> q) -> K_a p -> K_a q")
    assert lower_to_el(d) == d


def test_lift_examples():
    target = S("=> x0: [p]q -> p -> q")
    el = prove(translate_sequent(target)).derivation
    up = lift_to_pal(el, target)
    assert up.root == target and check_derivation(up)

    target = S("x0: [p][q]r => x0: [p & [p]q]r")
    up = lift_to_pal(prove(translate_sequent(target)).derivation, target)
    assert check_derivation(up) and {R.R6L, R.R6R} & rules_used(up)

    target = S("x0: r => x0: [p]r")
    up = lift_to_pal(prove(S("x0: r => x0: p -> r")).derivation, target)
    assert up.rule is R.R1R and check_derivation(up)


def test_lift_final_rule_for_nested_announcement():
    target = S("=> x0: [p][q]r -> [p & [p]q]r")
    up = lift_to_pal(prove(translate_sequent(target)).derivation, target)
    assert check_derivation(up)
    target = S("x0: r => x0: [p][q]r")
    up = lift_to_pal(prove(translate_sequent(target)).derivation, target)
    assert up.rule is R.R6R


def test_lift_accepts_target_with_same_translation():
    d = proof_of("p -> p")
    up = lift_to_pal(d, S("=> x0: [p]p"))
    assert up.rule is R.R1R and check_derivation(up)


def test_lift_el_target_is_unchanged():
    d = proof_of("K_a p -> p")
    assert lift_to_pal(d, d.root) == d


def test_lift_preconditions():
    d = proof_of("p -> p")
    with pytest.raises(ValueError):
        lift_to_pal(d, S("=> x0: [p]q"))
    with pytest.raises(ValueError):
        lower_to_el(axiom5(drop_sym=True))
    with pytest.raises(ValueError):
        lift_to_pal(axiom5(drop_sym=True), axiom5().root)


@settings(max_examples=30, deadline=None)
@given(formulas(5))
def test_lower_then_lift_roundtrip(f):
    root = Sequent(suc=[Labelled("x0", f)])
    r = prove(root)
    if not isinstance(r, Proved):
        return
    low = lower_to_el(r.derivation)
    assert low.root == translate_sequent(root) and check_derivation(low)
    assert height(low) <= height(r.derivation)
    assert not rules_used(low) & set(REDUCTION_RULES)
    up = lift_to_pal(low, root)
    assert up.root == root and check_derivation(up)


def test_build_checks_children():
    leaf = node(R.InitProp, "x: p => x: p", ["x: p"])
    assert build(R.ImpR, S("=> x: p -> p"), [Labelled("x", parse("p -> p"))], [leaf]).root == \
        S("=> x: p -> p")
    with pytest.raises(ValueError):
        build(R.ImpR, S("=> x: p -> q"), [Labelled("x", parse("p -> q"))], [leaf])
