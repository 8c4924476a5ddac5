"""Rule schemas of the labelled calculus for public announcement logic.

Every rule is a :class:`Schema` in the table :data:`SCHEMAS`.  A schema knows
how to enumerate root-first candidate instances in a conclusion and how to
build the premises for a given choice of principal expressions.  Proof search
uses the first capability, :func:`check_step` the second, so the prover and
the checker cannot disagree about what a rule does.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Iterator, Optional, Protocol, Sequence as Seq

from .formula import And, Announce, Formula, Implies, Know, Not, Prop
from .sequent import Expr, Label, Labelled, RelAtom, Sequent, agents_in, fresh_label, labels_of


class RuleName(str, enum.Enum):
    InitProp = "InitProp"
    InitRel = "InitRel"
    NegL = "NegL"
    NegR = "NegR"
    AndL = "AndL"
    AndR = "AndR"
    ImpL = "ImpL"
    ImpR = "ImpR"
    KL = "KL"
    KR = "KR"
    Ref = "Ref"
    Trans = "Trans"
    Sym = "Sym"
    R1L = "R1L"
    R1R = "R1R"
    R2L = "R2L"
    R2R = "R2R"
    R3L = "R3L"
    R3R = "R3R"
    R4L = "R4L"
    R4R = "R4R"
    R5L = "R5L"
    R5R = "R5R"
    R6L = "R6L"
    R6R = "R6R"

    def __str__(self) -> str:
        return self.value


REDUCTION_RULES = frozenset(r for r in RuleName if r.value.startswith("R") and r.value[1].isdigit())
INITIAL_RULES = frozenset({RuleName.InitProp, RuleName.InitRel})


@dataclass(frozen=True)
class RuleApplication:
    rule: RuleName
    conclusion: Sequent
    principal: tuple[Expr, ...]
    premises: tuple[Sequent, ...]
    eigenvariable: Optional[Label] = None


# premise recipe: (antecedent additions, succedent additions) per premise
_Recipe = list[tuple[list[Expr], list[Expr]]]


@dataclass(frozen=True)
class Schema:
    name: RuleName
    arity: int
    candidates: Callable[[Sequent], Iterator[tuple[tuple[Expr, ...], Optional[Label]]]]
    build: Callable[[Sequent, tuple[Expr, ...], Optional[Label]], Optional[list[Sequent]]]


def _contains(side: Seq[Expr], items: Seq[Expr]) -> bool:
    pool = list(side)
    for e in items:
        if e not in pool:
            return False
        pool.remove(e)
    return True


def _distinct(items):
    return list(dict.fromkeys(items))


def _logical(name: RuleName, arity: int, side: str,
             make: Callable[[Label, Formula], Optional[_Recipe]],
             shape: tuple[type, Optional[type]]) -> Schema:
    """A rule with one principal labelled formula that the premises drop.

    ``shape`` is the principal's main connective and, for announcements,
    the connective of the body; it lets candidates skip ``make``.
    """
    top, inner = shape

    def candidates(s: Sequent):
        for e in _distinct(s.labelled(side)):
            f = e.formula
            if type(f) is top and (inner is None or type(f.body) is inner):
                yield (e,), None

    def build(s: Sequent, principal, eigen):
        if eigen is not None or len(principal) != 1:
            return None
        (e,) = principal
        if not isinstance(e, Labelled) or e not in getattr(s, side):
            return None
        recipe = make(e.label, e.formula)
        if recipe is None:
            return None
        ctx = s.remove(side, e)
        return [ctx.add(ant, suc) for ant, suc in recipe]

    return Schema(name, arity, candidates, build)


def L(x: Label, f: Formula) -> Labelled:
    return Labelled(x, f)


# --- propositional -----------------------------------------------------------

def _neg(x, f):
    return [([], [L(x, f.sub)])] if isinstance(f, Not) else None


def _neg_r(x, f):
    return [([L(x, f.sub)], [])] if isinstance(f, Not) else None


def _and_l(x, f):
    return [([L(x, f.left), L(x, f.right)], [])] if isinstance(f, And) else None


def _and_r(x, f):
    return [([], [L(x, f.left)]), ([], [L(x, f.right)])] if isinstance(f, And) else None


def _imp_l(x, f):
    return [([], [L(x, f.left)]), ([L(x, f.right)], [])] if isinstance(f, Implies) else None


def _imp_r(x, f):
    return [([L(x, f.left)], [L(x, f.right)])] if isinstance(f, Implies) else None


# --- reduction rules ------------------------------------------------------------

def _ann(body_type):
    def test(f):
        return isinstance(f, Announce) and isinstance(f.body, body_type)
    return test


def _r1_l(x, f):
    if not _ann(Prop)(f):
        return None
    return [([], [L(x, f.announced)]), ([L(x, f.body)], [])]


def _r1_r(x, f):
    if not _ann(Prop)(f):
        return None
    return [([L(x, f.announced)], [L(x, f.body)])]


def _r2_l(x, f):
    if not _ann(Not)(f):
        return None
    return [([], [L(x, f.announced)]), ([L(x, Not(Announce(f.announced, f.body.sub)))], [])]


def _r2_r(x, f):
    if not _ann(Not)(f):
        return None
    return [([L(x, f.announced)], [L(x, Not(Announce(f.announced, f.body.sub)))])]


def _r3_l(x, f):
    if not _ann(And)(f):
        return None
    a, b = f.body.left, f.body.right
    return [([L(x, Announce(f.announced, a)), L(x, Announce(f.announced, b))], [])]


def _r3_r(x, f):
    if not _ann(And)(f):
        return None
    a, b = f.body.left, f.body.right
    return [([], [L(x, Announce(f.announced, a))]), ([], [L(x, Announce(f.announced, b))])]


def _r4_l(x, f):
    if not _ann(Implies)(f):
        return None
    a, b = f.body.left, f.body.right
    return [([], [L(x, Announce(f.announced, a))]), ([L(x, Announce(f.announced, b))], [])]


def _r4_r(x, f):
    if not _ann(Implies)(f):
        return None
    a, b = f.body.left, f.body.right
    return [([L(x, Announce(f.announced, a))], [L(x, Announce(f.announced, b))])]


def _r5_l(x, f):
    if not _ann(Know)(f):
        return None
    k = Know(f.body.agent, Announce(f.announced, f.body.sub))
    return [([], [L(x, f.announced)]), ([L(x, k)], [])]


def _r5_r(x, f):
    if not _ann(Know)(f):
        return None
    k = Know(f.body.agent, Announce(f.announced, f.body.sub))
    return [([L(x, f.announced)], [L(x, k)])]


def _composed(f: Announce) -> Formula:
    inner = f.body
    return Announce(And(f.announced, Announce(f.announced, inner.announced)), inner.body)


def _r6_l(x, f):
    return [([L(x, _composed(f))], [])] if _ann(Announce)(f) else None


def _r6_r(x, f):
    return [([], [L(x, _composed(f))])] if _ann(Announce)(f) else None


# --- initial sequents --------------------------------------------------------

def _init_prop_candidates(s: Sequent):
    suc = set(s.suc)
    for e in _distinct(s.labelled("ant")):
        if isinstance(e.formula, Prop) and e in suc:
            yield (e,), None


def _init_prop_build(s, principal, eigen):
    if eigen is not None or len(principal) != 1:
        return None
    (e,) = principal
    if isinstance(e, Labelled) and isinstance(e.formula, Prop) and e in s.ant and e in s.suc:
        return []
    return None


def _init_rel_candidates(s: Sequent):
    suc = set(s.suc)
    for e in _distinct(s.relational("ant")):
        if e in suc:
            yield (e,), None


def _init_rel_build(s, principal, eigen):
    if eigen is not None or len(principal) != 1:
        return None
    (e,) = principal
    if isinstance(e, RelAtom) and e in s.ant and e in s.suc:
        return []
    return None


# --- modal rules ---------------------------------------------------------------

def _kl_candidates(s: Sequent):
    rels = _distinct(s.relational("ant"))
    for e in _distinct(s.labelled("ant")):
        if isinstance(e.formula, Know):
            for r in rels:
                if r.left == e.label and r.agent == e.formula.agent:
                    yield (e, r), None


def _kl_build(s, principal, eigen):
    if eigen is not None or len(principal) != 2:
        return None
    e, r = principal
    if not (isinstance(e, Labelled) and isinstance(e.formula, Know) and isinstance(r, RelAtom)):
        return None
    if r.left != e.label or r.agent != e.formula.agent or not _contains(s.ant, principal):
        return None
    return [s.add(ant=[L(r.right, e.formula.sub)])]


def _kr_candidates(s: Sequent):
    y = fresh_label(s)
    for e in _distinct(s.labelled("suc")):
        if isinstance(e.formula, Know):
            yield (e,), y


def _kr_build(s, principal, eigen):
    if eigen is None or len(principal) != 1:
        return None
    (e,) = principal
    if not (isinstance(e, Labelled) and isinstance(e.formula, Know)) or e not in s.suc:
        return None
    if eigen in labels_of(s):
        return None
    k = e.formula
    return [s.remove("suc", e).add(ant=[RelAtom(e.label, k.agent, eigen)], suc=[L(eigen, k.sub)])]


# --- relational rules ----------------------------------------------------------

def _ref_candidates(s: Sequent):
    for x in sorted(labels_of(s)):
        for a in sorted(agents_in(s)):
            yield (RelAtom(x, a, x),), None


def _ref_build(s, principal, eigen):
    if eigen is not None or len(principal) != 1:
        return None
    (r,) = principal
    if not isinstance(r, RelAtom) or r.left != r.right:
        return None
    return [s.add(ant=[r])]


def _trans_candidates(s: Sequent):
    rels = s.relational("ant")
    distinct = _distinct(rels)
    for r1 in distinct:
        for r2 in distinct:
            if r1.agent == r2.agent and r1.right == r2.left:
                if r1 == r2 and rels.count(r1) < 2:
                    continue
                yield (r1, r2), None


def _trans_build(s, principal, eigen):
    if eigen is not None or len(principal) != 2:
        return None
    r1, r2 = principal
    if not (isinstance(r1, RelAtom) and isinstance(r2, RelAtom)):
        return None
    if r1.agent != r2.agent or r1.right != r2.left or not _contains(s.ant, principal):
        return None
    return [s.add(ant=[RelAtom(r1.left, r1.agent, r2.right)])]


def _sym_candidates(s: Sequent):
    for r in _distinct(s.relational("ant")):
        yield (r,), None


def _sym_build(s, principal, eigen):
    if eigen is not None or len(principal) != 1:
        return None
    (r,) = principal
    if not isinstance(r, RelAtom) or r not in s.ant:
        return None
    return [s.add(ant=[RelAtom(r.right, r.agent, r.left)])]


R = RuleName

SCHEMAS: dict[RuleName, Schema] = {
    R.InitProp: Schema(R.InitProp, 0, _init_prop_candidates, _init_prop_build),
    R.InitRel: Schema(R.InitRel, 0, _init_rel_candidates, _init_rel_build),
    R.NegL: _logical(R.NegL, 1, "ant", _neg, (Not, None)),
    R.NegR: _logical(R.NegR, 1, "suc", _neg_r, (Not, None)),
    R.AndL: _logical(R.AndL, 1, "ant", _and_l, (And, None)),
    R.AndR: _logical(R.AndR, 2, "suc", _and_r, (And, None)),
    R.ImpL: _logical(R.ImpL, 2, "ant", _imp_l, (Implies, None)),
    R.ImpR: _logical(R.ImpR, 1, "suc", _imp_r, (Implies, None)),
    R.KL: Schema(R.KL, 1, _kl_candidates, _kl_build),
    R.KR: Schema(R.KR, 1, _kr_candidates, _kr_build),
    R.Ref: Schema(R.Ref, 1, _ref_candidates, _ref_build),
    R.Trans: Schema(R.Trans, 1, _trans_candidates, _trans_build),
    R.Sym: Schema(R.Sym, 1, _sym_candidates, _sym_build),
    R.R1L: _logical(R.R1L, 2, "ant", _r1_l, (Announce, Prop)),
    R.R1R: _logical(R.R1R, 1, "suc", _r1_r, (Announce, Prop)),
    R.R2L: _logical(R.R2L, 2, "ant", _r2_l, (Announce, Not)),
    R.R2R: _logical(R.R2R, 1, "suc", _r2_r, (Announce, Not)),
    R.R3L: _logical(R.R3L, 1, "ant", _r3_l, (Announce, And)),
    R.R3R: _logical(R.R3R, 2, "suc", _r3_r, (Announce, And)),
    R.R4L: _logical(R.R4L, 2, "ant", _r4_l, (Announce, Implies)),
    R.R4R: _logical(R.R4R, 1, "suc", _r4_r, (Announce, Implies)),
    R.R5L: _logical(R.R5L, 2, "ant", _r5_l, (Announce, Know)),
    R.R5R: _logical(R.R5R, 1, "suc", _r5_r, (Announce, Know)),
    R.R6L: _logical(R.R6L, 1, "ant", _r6_l, (Announce, Announce)),
    R.R6R: _logical(R.R6R, 1, "suc", _r6_r, (Announce, Announce)),
}

# root-first priority: cheap invertible rules, then branching ones, then
# relational saturation, then the modal rules
PRIORITY: tuple[RuleName, ...] = (
    R.NegL, R.NegR, R.AndL, R.ImpR, R.R2R, R.R3L, R.R5R, R.R6L, R.R6R, R.R1R, R.R4R,
    R.AndR, R.ImpL, R.R1L, R.R2L, R.R3R, R.R4L, R.R5L,
    R.Ref, R.Trans, R.Sym,
    R.KL,
    R.KR,
)


class Context(Protocol):
    """Decides, from the rule, conclusion and principal alone, whether an instance may fire."""

    def permits(self, rule: RuleName, s: Sequent, principal: tuple[Expr, ...]) -> bool: ...


def instantiate(rule: RuleName, s: Sequent, principal: tuple[Expr, ...],
                eigenvariable: Optional[Label] = None) -> RuleApplication:
    """Apply ``rule`` to ``s`` at the given principal expressions."""
    premises = SCHEMAS[rule].build(s, tuple(principal), eigenvariable)
    if premises is None:
        raise ValueError(f"{rule} does not apply to {s} at {[str(e) for e in principal]}")
    return RuleApplication(rule, s, tuple(principal), tuple(premises), eigenvariable)


def is_initial(s: Sequent) -> Optional[RuleApplication]:
    """The initial-sequent instance with conclusion ``s``, if any.

    Only atomic labelled formulas and relational atoms qualify; a shared
    compound formula does not make a sequent initial.
    """
    for rule in (R.InitProp, R.InitRel):
        for principal, _ in SCHEMAS[rule].candidates(s):
            return RuleApplication(rule, s, principal, ())
    return None


def iter_applicable(s: Sequent, ctx: Optional[Context] = None) -> Iterator[RuleApplication]:
    """Root-first rule instances with conclusion ``s``, in priority order."""
    for rule in PRIORITY:
        schema = SCHEMAS[rule]
        for principal, eigen in schema.candidates(s):
            if ctx is not None and not ctx.permits(rule, s, principal):
                continue
            premises = schema.build(s, principal, eigen)
            if premises is not None:
                yield RuleApplication(rule, s, principal, tuple(premises), eigen)


def applicable(s: Sequent, ctx: Optional[Context] = None) -> list[RuleApplication]:
    return list(iter_applicable(s, ctx))


def check_step(app: RuleApplication) -> bool:
    """Is ``app`` a literal instance of its schema?"""
    schema = SCHEMAS.get(app.rule)
    if schema is None:
        return False
    premises = schema.build(app.conclusion, tuple(app.principal), app.eigenvariable)
    if premises is None or len(premises) != schema.arity:
        return False
    return tuple(premises) == tuple(app.premises)
