import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from palseq.formula import parse
from palseq.semantics import KripkeModel
from palseq.sequent import (Labelled, RelAtom, Sequent, fresh_label, labels_of, parse_sequent,
                            render_sequent, sequent_countermodel, sequent_holds)

from .strategies import exprs, labelled, sequents


def S(text):
    return parse_sequent(text)


@pytest.mark.parametrize("text, labels", [
    ("x: p => x: p", {"x"}),
    ("x ~a y, x: K_a p => y: p", {"x", "y"}),
    ("=> x: [p]q", {"x"}),
    ("=>", set()),
])
def test_labels_of(text, labels):
    assert labels_of(S(text)) == labels


@pytest.mark.parametrize("text, fresh", [
    ("=> x0: p", "x1"),
    ("=>", "x0"),
    ("x0: p => x2: q", "x1"),
    ("x0 ~a x1 => x2: p", "x3"),
])
def test_fresh_label(text, fresh):
    assert fresh_label(S(text)) == fresh


@given(sequents())
def test_fresh_label_is_fresh(s):
    assert fresh_label(s) not in labels_of(s)


@given(st.lists(exprs, max_size=6), st.randoms())
def test_multiset_equality_ignores_order(items, rnd):
    shuffled = list(items)
    rnd.shuffle(shuffled)
    assert Sequent(items, items) == Sequent(shuffled, shuffled)
    assert hash(Sequent(items)) == hash(Sequent(shuffled))


def test_multiplicity_matters():
    e = Labelled("x", parse("p"))
    assert Sequent([e, e]) != Sequent([e])
    assert Sequent([e, e]).count("ant", e) == 2


@given(sequents(), exprs)
def test_add_then_remove_is_identity(s, e):
    assert s.add(ant=[e]).remove("ant", e) == s
    assert s.add(suc=[e]).remove("suc", e) == s


def test_sequent_text_roundtrip():
    s = S("x: K_a p, x ~a y => y: p, y ~a x")
    assert render_sequent(s) == "x ~a y, x: K_a p => y ~a x, y: p"
    assert S(render_sequent(s)) == s
    assert s.relational("suc") == [RelAtom("y", "a", "x")]


@pytest.mark.parametrize("text", ["x: p", "x: p => => y: q", "x: => y: p", "X ~a y =>"])
def test_sequent_syntax_errors(text):
    with pytest.raises(ValueError):
        S(text)


# truth of sequents --------------------------------------------------------------

MOORE = KripkeModel((1, 2), {"a": [{1, 2}]}, {"p": {1}})


def test_sequent_holds_examples():
    single = KripkeModel(("w",), {"a": [{"w"}]}, {"p": {"w"}})
    assert sequent_holds(MOORE, {"x": 1}, S("x: p => x: p"))
    assert sequent_holds(MOORE, {"x": 2}, S("x: p => x: p"))
    assert sequent_holds(single, {"x": "w"}, S("=> x: K_a p"))
    assert not sequent_holds(MOORE, {"x": 1}, S("=> x: [p & ~K_a p]~K_a p"))


def test_sequent_holds_needs_every_label():
    with pytest.raises(KeyError):
        sequent_holds(MOORE, {"x": 1}, S("x ~a y => y: p"))


def test_relational_atoms_are_evaluated():
    split = KripkeModel((1, 2), {"a": [{1}, {2}]}, {})
    assert not sequent_holds(MOORE, {"x": 1, "y": 2}, S("=> x ~b y"))  # b missing: identity
    assert sequent_holds(MOORE, {"x": 1, "y": 2}, S("=> x ~a y"))
    assert not sequent_holds(split, {"x": 1, "y": 2}, S("=> x ~a y"))


@settings(max_examples=50, deadline=None)
@given(sequents(3), labelled, st.sampled_from([1, 2]), st.sampled_from([1, 2]),
       st.sampled_from([1, 2]))
def test_weakening_is_monotone(s, e, w0, w1, w2):
    assignment = {"x0": w0, "x1": w1, "x2": w2}
    if sequent_holds(MOORE, assignment, s):
        assert sequent_holds(MOORE, assignment, s.add(suc=[e]))
        assert sequent_holds(MOORE, assignment, s.add(ant=[e]))


def test_sequent_countermodel():
    found = sequent_countermodel(S("x ~a y, x: K_a p => y: q"), max_worlds=2)
    assert found is not None
    m, assignment = found
    assert not sequent_holds(m, assignment, S("x ~a y, x: K_a p => y: q"))
    assert sequent_countermodel(S("x ~a y, x: K_a p => y: p"), max_worlds=2) is None
