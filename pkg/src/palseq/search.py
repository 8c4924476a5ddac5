"""Terminating root-first proof search.

All rules of the calculus are invertible, so search never backtracks over a
rule choice: at each node it applies the first permitted rule in priority
order and proves every premise.  A branch on which nothing is permitted is
saturated; the search then reads a countermodel off it.

Loop controls, all branch-local:

* Ref is applied once per (label, agent), only to labels already present.
* Trans and Sym fire once per principal atoms, and never to re-add an atom
  that is already in the antecedent.
* KL fires once per (K-formula, relational atom) pair.
* A labelled formula is decomposed at most once per side on a branch; a
  second copy is left alone (contraction is admissible).
* KR on a formula ``K_a phi`` is capped along each chain of worlds created
  by KR steps for agent ``a``: at most ``n(K_a)`` expansions of the same
  formula, where ``n(K_a)`` counts ``K_a`` in the root antecedent (at least 1).
"""

from __future__ import annotations

import sys
import time
from dataclasses import dataclass, replace
from types import MappingProxyType
from typing import Mapping, Optional, Union

from .calculus import RuleApplication, RuleName, is_initial, iter_applicable
from .derivation import Derivation
from .formula import Formula, Prop
from .semantics import KripkeModel
from .sequent import (Labelled, RelAtom, Sequent, agents_in, know_count, labels_of,
                      sequent_holds)


@dataclass(frozen=True)
class SearchBudget:
    max_branch_depth: int = 2000
    max_labels: int = 64
    time_limit: float = 10.0

    def __post_init__(self):
        if self.max_branch_depth <= 0 or self.max_labels <= 0 or self.time_limit <= 0:
            raise ValueError("budget limits must be positive")


DEFAULT_BUDGET = SearchBudget()

_EMPTY = MappingProxyType({})


@dataclass(frozen=True)
class SearchContext:
    applied_rel: frozenset = frozenset()
    applied_k_pairs: frozenset = frozenset()
    # label -> {K_a formula: KR expansions of it along the a-chain ending here}
    kr_chain_counts: Mapping[str, Mapping[Formula, int]] = _EMPTY
    ref_done: frozenset = frozenset()
    kr_caps: Mapping[str, int] = _EMPTY
    # (side, labelled formula) already decomposed on this branch
    decomposed: frozenset = frozenset()
    kl_once: bool = True

    def chain_count(self, label: str, formula: Formula) -> int:
        return self.kr_chain_counts.get(label, _EMPTY).get(formula, 0)

    def permits(self, rule: RuleName, s: Sequent, principal: tuple) -> bool:
        if rule is RuleName.Ref:
            (r,) = principal
            return (r.left, r.agent) not in self.ref_done and r not in s.ant_set
        if rule in (RuleName.Trans, RuleName.Sym):
            return ((rule, principal) not in self.applied_rel
                    and _added_atom(rule, principal) not in s.ant_set)
        if rule is RuleName.KL:
            if not self.kl_once:
                return True
            e, r = principal
            return (e, r) not in self.applied_k_pairs and Labelled(r.right, e.formula.sub) not in s.ant_set
        if rule is RuleName.KR:
            (e,) = principal
            if ("suc", e) in self.decomposed:
                return False
            return self.chain_count(e.label, e.formula) < self.kr_caps.get(e.formula.agent, 1)
        return (_SIDE[rule], principal[0]) not in self.decomposed

    def after(self, app: RuleApplication) -> "SearchContext":
        """The context for the premises of ``app``."""
        rule = app.rule
        if rule is RuleName.Ref:
            (r,) = app.principal
            return replace(self, ref_done=self.ref_done | {(r.left, r.agent)})
        if rule in (RuleName.Trans, RuleName.Sym):
            return replace(self, applied_rel=self.applied_rel | {(rule, app.principal)})
        if rule is RuleName.KL:
            return replace(self, applied_k_pairs=self.applied_k_pairs | {app.principal})
        if rule is RuleName.KR:
            (e,) = app.principal
            decomposed = self.decomposed | {("suc", e)}
            agent = e.formula.agent
            inherited = {g: c for g, c in self.kr_chain_counts.get(e.label, _EMPTY).items()
                         if g.agent == agent}
            inherited[e.formula] = inherited.get(e.formula, 0) + 1
            counts = dict(self.kr_chain_counts)
            counts[app.eigenvariable] = MappingProxyType(inherited)
            return replace(self, kr_chain_counts=MappingProxyType(counts), decomposed=decomposed)
        return replace(self, decomposed=self.decomposed | {(_SIDE[rule], app.principal[0])})


_SIDE = {r: ("ant" if r.value.endswith("L") else "suc")
         for r in RuleName if r.value[-1] in "LR" and r is not RuleName.KL}


def _added_atom(rule: RuleName, p: tuple) -> RelAtom:
    if rule is RuleName.Trans:
        return RelAtom(p[0].left, p[0].agent, p[1].right)
    return RelAtom(p[0].right, p[0].agent, p[0].left)


def kr_caps(s: Sequent) -> dict[str, int]:
    """``n(K_a)`` per agent: K_a occurrences in the antecedent, at least 1."""
    return {a: max(1, know_count(s, a, "ant")) for a in agents_in(s)}


@dataclass(frozen=True)
class Proved:
    derivation: Derivation
    verdict = "proved"


@dataclass(frozen=True)
class Refuted:
    saturated_branch: Sequent
    countermodel: Optional[KripkeModel] = None
    verdict = "refuted"


@dataclass(frozen=True)
class BudgetExhausted:
    reason: str
    verdict = "budget"


ProofResult = Union[Proved, Refuted, BudgetExhausted]


class _OutOfBudget(Exception):
    pass


@dataclass
class _Failure:
    branch: Sequent


class _Search:
    def __init__(self, budget: SearchBudget):
        self.budget = budget
        self.deadline = time.monotonic() + budget.time_limit
        self.steps = 0

    def run(self, s: Sequent, ctx: SearchContext, depth: int) -> Union[Derivation, _Failure]:
        if depth > self.budget.max_branch_depth:
            raise _OutOfBudget(f"branch depth exceeded {self.budget.max_branch_depth}")
        self.steps += 1
        if self.steps % 256 == 0 and time.monotonic() > self.deadline:
            raise _OutOfBudget(f"time limit of {self.budget.time_limit}s exceeded")
        init = is_initial(s)
        if init is not None:
            return Derivation(s, init, ())
        app = next(iter_applicable(s, ctx), None)
        if app is None:
            return _Failure(s)
        if app.rule is RuleName.KR and len(labels_of(s)) >= self.budget.max_labels:
            raise _OutOfBudget(f"more than {self.budget.max_labels} labels")
        sub = ctx.after(app)
        children = []
        for premise in app.premises:
            r = self.run(premise, sub, depth + 1)
            if isinstance(r, _Failure):
                return r
            children.append(r)
        return Derivation(s, app, tuple(children))


def prove(s: Sequent, budget: SearchBudget = DEFAULT_BUDGET, *, kl_once: bool = True) -> ProofResult:
    """Decide the sequent ``s`` by root-first search.

    ``kl_once=False`` disables the KL loop control; it exists to test that
    the test harness notices a non-terminating prover.
    """
    ctx = SearchContext(kr_caps=MappingProxyType(kr_caps(s)), kl_once=kl_once)
    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 4 * budget.max_branch_depth + 1000))
    try:
        result = _Search(budget).run(s, ctx, 1)
    except _OutOfBudget as exc:
        return BudgetExhausted(str(exc))
    finally:
        sys.setrecursionlimit(old_limit)
    if isinstance(result, _Failure):
        return Refuted(result.branch, extract_countermodel(result.branch, root=s))
    return Proved(result)


def prove_formula(f: Formula, budget: SearchBudget = DEFAULT_BUDGET, **kwargs) -> ProofResult:
    """Search for a derivation of ``=> x0: f``."""
    return prove(Sequent(suc=[Labelled("x0", f)]), budget, **kwargs)


def extract_countermodel(branch: Sequent, root: Optional[Sequent] = None) -> Optional[KripkeModel]:
    """Read a model off a saturated branch and keep it only if it falsifies ``root``.

    Worlds are the labels of the branch, each relation is the equivalence
    closure of the branch's relational atoms, and ``p`` holds at ``x`` iff
    ``x: p`` is in the antecedent.  Without ``root`` the model is checked
    against the branch itself.
    """
    labels = sorted(labels_of(branch))
    if not labels:
        return None
    partitions = {}
    for agent in sorted(agents_in(branch) | agents_in(root or Sequent())):
        parent = {x: x for x in labels}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x
        for r in branch.relational("ant"):
            if r.agent == agent:
                parent[find(r.left)] = find(r.right)
        blocks: dict = {}
        for x in labels:
            blocks.setdefault(find(x), set()).add(x)
        partitions[agent] = tuple(frozenset(b) for b in blocks.values())
    valuation: dict = {}
    for e in branch.labelled("ant"):
        if isinstance(e.formula, Prop):
            valuation.setdefault(e.formula.name, set()).add(e.label)
    model = KripkeModel(tuple(labels), partitions, {p: frozenset(ws) for p, ws in valuation.items()})
    target = root if root is not None else branch
    if not labels_of(target) <= set(labels):
        return None
    if sequent_holds(model, {x: x for x in labels}, target):
        return None
    return model
