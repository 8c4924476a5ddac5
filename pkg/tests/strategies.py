from hypothesis import strategies as st

from palseq.formula import And, Announce, Implies, Know, Not, Prop
from palseq.sequent import Labelled, RelAtom, Sequent

atoms = st.sampled_from(["p", "q", "r"]).map(Prop)
agents = st.sampled_from(["a", "b"])


def formulas(max_leaves=8, announcements=True):
    def extend(sub):
        options = [
            sub.map(Not),
            st.tuples(sub, sub).map(lambda t: And(*t)),
            st.tuples(sub, sub).map(lambda t: Implies(*t)),
            st.tuples(agents, sub).map(lambda t: Know(*t)),
        ]
        if announcements:
            options.append(st.tuples(sub, sub).map(lambda t: Announce(*t)))
        return st.one_of(*options)
    return st.recursive(atoms, extend, max_leaves=max_leaves)


labels = st.sampled_from(["x0", "x1", "x2"])
labelled = st.builds(Labelled, labels, formulas(4))
relational = st.builds(RelAtom, labels, agents, labels)
exprs = st.one_of(labelled, relational)


@st.composite
def sequents(draw, max_size=4):
    ant = draw(st.lists(exprs, max_size=max_size))
    suc = draw(st.lists(labelled, max_size=max_size))
    return Sequent(ant, suc)
