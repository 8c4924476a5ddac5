import itertools

import pytest
from hypothesis import HealthCheck, given, settings

from palseq.calculus import (INITIAL_RULES, PRIORITY, REDUCTION_RULES, SCHEMAS,
                             RuleApplication, RuleName as R, applicable, check_step,
                             instantiate, is_initial)
from palseq.formula import atoms_of, complexity, parse
from palseq.semantics import enumerate_models
from palseq.sequent import (Labelled, RelAtom, Sequent, agents_in, fresh_label, labels_of,
                            parse_sequent, sequent_holds)

from .strategies import sequents

S = parse_sequent


def lab(text):
    x, f = text.split(":", 1)
    return Labelled(x.strip(), parse(f))


def test_rule_names():
    assert len(R) == 25
    assert len(REDUCTION_RULES) == 12
    assert set(INITIAL_RULES) == {R.InitProp, R.InitRel}
    assert set(PRIORITY) | set(INITIAL_RULES) == set(R)
    assert R("R5L") is R.R5L and str(R.KR) == "KR"


@pytest.mark.parametrize("rule, arity", [
    (R.ImpL, 2), (R.AndR, 2), (R.R1L, 2), (R.R2L, 2), (R.R3R, 2), (R.R4L, 2), (R.R5L, 2),
    (R.InitProp, 0), (R.InitRel, 0), (R.KL, 1), (R.KR, 1), (R.R6R, 1), (R.Sym, 1),
])
def test_arity(rule, arity):
    assert SCHEMAS[rule].arity == arity


def test_is_initial():
    app = is_initial(S("x: p, x: q => x: p"))
    assert app.rule is R.InitProp and app.principal == (lab("x: p"),)
    assert is_initial(S("x: K_a p => x: K_a p")) is None
    assert is_initial(S("x ~a y => x ~a y")).rule is R.InitRel
    assert is_initial(S("x: p => y: p")) is None


def test_applicable_examples():
    imp = [a for a in applicable(S("=> x: p -> q")) if a.rule is R.ImpR]
    assert imp[0].premises == (S("x: p => x: q"),)

    r5 = [a for a in applicable(S("x: [p]K_a q =>")) if a.rule is R.R5L]
    assert r5[0].premises == (S("=> x: p"), S("x: K_a [p]q =>"))

    kl = [a for a in applicable(S("x: K_a p, x ~a y =>")) if a.rule is R.KL]
    assert kl[0].premises == (S("y: p, x: K_a p, x ~a y =>"),)

    kr = [a for a in applicable(S("x0 ~a x0 => x0: K_a p")) if a.rule is R.KR]
    assert kr[0].eigenvariable == "x1"
    assert kr[0].premises == (S("x0 ~a x0, x0 ~a x1 => x1: p"),)


def test_ref_only_uses_present_labels_and_agents():
    refs = {a.principal for a in applicable(S("x: K_b p => y: q")) if a.rule is R.Ref}
    assert refs == {(RelAtom("x", "b", "x"),), (RelAtom("y", "b", "y"),)}


def test_check_step_examples():
    good = instantiate(R.ImpR, S("=> x: p -> q"), (lab("x: p -> q"),))
    assert check_step(good)
    s = S("x ~a y => x: K_a p")
    bad = RuleApplication(R.KR, s, (lab("x: K_a p"),), (S("x ~a y, x ~a y => y: p"),), "y")
    assert not check_step(bad)
    r6 = RuleApplication(R.R6L, S("x: [p][q]r, x: s => x: t"), (lab("x: [p][q]r"),),
                         (S("x: [p & [p]q]r, x: s => x: t"),))
    assert check_step(r6)


def test_check_step_rejects_wrong_shapes():
    s = S("x: p -> q => x: q")
    premises = (S("x: p, x: q => x: q"),)
    assert not check_step(RuleApplication(R.AndL, s, (lab("x: p -> q"),), premises))
    assert not check_step(RuleApplication(R.ImpL, s, (lab("x: p -> q"),), premises))
    with pytest.raises(ValueError):
        instantiate(R.AndL, s, (lab("x: p -> q"),))
    with pytest.raises(ValueError):
        instantiate(R.KR, S("=> x: K_a p"), (lab("x: K_a p"),), "x")


def test_reduction_rule_premises():
    cases = {
        "x: [p]q => ": [("=> x: p", "x: q =>")],
        "=> x: [p]~q": [("x: p => x: ~[p]q",)],
        "x: [p](q & r) =>": [("x: [p]q, x: [p]r =>",)],
        "=> x: [p](q -> r)": [("x: [p]q => x: [p]r",)],
        "=> x: [p]K_a q": [("x: p => x: K_a [p]q",)],
        "=> x: [p][q]r": [("=> x: [p & [p]q]r",)],
    }
    for conclusion, expected in cases.items():
        apps = [a for a in applicable(S(conclusion)) if a.rule in REDUCTION_RULES]
        assert [tuple(map(str, a.premises)) for a in apps] == \
            [tuple(str(S(t)) for t in e) for e in expected]


SAMPLES = [
    "x: p -> q, x: p => x: q", "x: ~p => x: q & r", "x: K_a p, x ~a y => y: p",
    "x ~a y, y ~a z => x: K_b q", "x: [p]K_a q => x: p -> K_a [p]q",
    "x: [p][q]r => x: [p & [p]q]r", "x: [p](q -> r), x: [p]q => x: [p]r",
    "x: [p]~q => x: [q](r & p)", "x ~a y => y ~a x", "x: K_a ~K_a p => x: ~p",
]


def locally_sound(app, max_worlds=2):
    """If the conclusion fails somewhere, some premise fails there too.

    For KR the eigenvariable ranges over all worlds: the premise must fail
    for some choice of it.
    """
    s = app.conclusion
    labels = sorted(labels_of(s))
    atoms = set().union(*(atoms_of(e.formula) for e in s.labelled("ant") + s.labelled("suc")))
    for m in enumerate_models(max_worlds, agents_in(s) | {"a"}, atoms or {"p"}):
        for ws in itertools.product(m.worlds, repeat=len(labels)):
            asg = dict(zip(labels, ws))
            if sequent_holds(m, asg, s):
                continue
            choices = [{app.eigenvariable: v} for v in m.worlds] if app.eigenvariable else [{}]
            if all(sequent_holds(m, {**asg, **c}, p) for c in choices for p in app.premises):
                return False
    return True


@pytest.mark.parametrize("text", SAMPLES)
def test_local_soundness(text):
    for app in applicable(S(text)):
        assert check_step(app)
        assert locally_sound(app), app.rule


def test_local_soundness_oracle_detects_bad_rules():
    bogus = RuleApplication(R.NegR, S("=> x: p"), (), (S("x: p => x: p"),))
    assert not locally_sound(bogus)
    weak_kr = RuleApplication(R.KR, S("=> x: K_a p"), (lab("x: K_a p"),), (S("=> x: p"),), "y")
    assert not locally_sound(weak_kr)


@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(sequents(3))
def test_applications_are_schema_instances(s):
    for app in applicable(s):
        assert check_step(app)
        assert app.conclusion == s
        assert len(app.premises) == SCHEMAS[app.rule].arity


@pytest.mark.parametrize("text", SAMPLES)
def test_applicable_is_exhaustive(text):
    s = S(text)
    found = {(a.rule, a.principal, a.eigenvariable) for a in applicable(s)}
    members = list(dict.fromkeys(s.ant + s.suc))
    refs = [RelAtom(x, a, x) for x in labels_of(s) for a in agents_in(s)]
    eigen = fresh_label(s)
    for rule in R:
        if rule in INITIAL_RULES:
            continue
        for size in (1, 2):
            for principal in itertools.product(members + refs, repeat=size):
                for e in ((eigen,) if rule is R.KR else (None,)):
                    try:
                        app = instantiate(rule, s, principal, e)
                    except ValueError:
                        continue
                    assert check_step(app)
                    assert (rule, app.principal, e) in found, (rule, principal)


@pytest.mark.parametrize("text", SAMPLES)
def test_reduction_rules_decrease_complexity(text):
    for app in applicable(S(text)):
        if app.rule not in REDUCTION_RULES:
            continue
        c = complexity(app.principal[0].formula)
        before = set(app.conclusion.ant + app.conclusion.suc)
        for prem in app.premises:
            for e in prem.labelled("ant") + prem.labelled("suc"):
                if e not in before:
                    assert complexity(e.formula) < c


def test_kl_keeps_principal_and_needs_matching_agent():
    assert not [a for a in applicable(S("x: K_a p, x ~b y =>")) if a.rule is R.KL]
    app = instantiate(R.KL, S("x: K_a p, x ~a y =>"), (lab("x: K_a p"), RelAtom("x", "a", "y")))
    assert lab("x: K_a p") in app.premises[0].ant


def test_trans_and_sym():
    s = S("x ~a y, y ~a z =>")
    app = instantiate(R.Trans, s, (RelAtom("x", "a", "y"), RelAtom("y", "a", "z")))
    assert RelAtom("x", "a", "z") in app.premises[0].ant
    with pytest.raises(ValueError):
        instantiate(R.Trans, s, (RelAtom("y", "a", "z"), RelAtom("x", "a", "y")))
    sym = instantiate(R.Sym, s, (RelAtom("x", "a", "y"),))
    assert sym.premises[0] == Sequent(s.ant + (RelAtom("y", "a", "x"),))
