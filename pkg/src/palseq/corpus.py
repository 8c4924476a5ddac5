"""Seeded random formulas and the fixed axiom suite used by tests and fuzzing."""

from __future__ import annotations

import random
from typing import Sequence

from .formula import And, Announce, Formula, Implies, Know, Not, Prop, iff, parse

_CONNECTIVES = ("not", "and", "imp", "know", "ann")
_WEIGHTS = (2, 2, 3, 3, 3)


def random_formula(rng: random.Random, depth: int, agents: Sequence[str] = ("a", "b"),
                   atoms: Sequence[str] = ("p", "q"), leaf_prob: float = 0.2) -> Formula:
    """A formula of depth at most ``depth``."""
    if depth <= 0 or rng.random() < leaf_prob:
        return Prop(rng.choice(atoms))
    kind = rng.choices(_CONNECTIVES, _WEIGHTS)[0]
    sub = lambda: random_formula(rng, depth - 1, agents, atoms, leaf_prob)  # noqa: E731
    if kind == "not":
        return Not(sub())
    if kind == "and":
        return And(sub(), sub())
    if kind == "imp":
        return Implies(sub(), sub())
    if kind == "know":
        return Know(rng.choice(agents), sub())
    return Announce(sub(), sub())


def random_corpus(n: int = 500, seed: int = 7, depth: int = 4,
                  agents: Sequence[str] = ("a", "b"), atoms: Sequence[str] = ("p", "q")) -> list[Formula]:
    rng = random.Random(seed)
    return [random_formula(rng, depth, agents, atoms) for _ in range(n)]


# axiom schemas as functions of their metavariables
def _k(a, b, c, ag):
    return Implies(Know(ag, Implies(a, b)), Implies(Know(ag, a), Know(ag, b)))


def _t(a, b, c, ag):
    return Implies(Know(ag, a), a)


def _4(a, b, c, ag):
    return Implies(Know(ag, a), Know(ag, Know(ag, a)))


def _5(a, b, c, ag):
    return Implies(Not(Know(ag, a)), Know(ag, Not(Know(ag, a))))


def _r1(a, b, c, ag):
    # the body of R1 must be a proposition letter
    return iff(Announce(a, Prop("p")), Implies(a, Prop("p")))


def _r2(a, b, c, ag):
    return iff(Announce(a, Not(b)), Implies(a, Not(Announce(a, b))))


def _r3(a, b, c, ag):
    return iff(Announce(a, And(b, c)), And(Announce(a, b), Announce(a, c)))


def _r4(a, b, c, ag):
    return iff(Announce(a, Implies(b, c)), Implies(Announce(a, b), Announce(a, c)))


def _r5(a, b, c, ag):
    return iff(Announce(a, Know(ag, b)), Implies(a, Know(ag, Announce(a, b))))


def _r6(a, b, c, ag):
    return iff(Announce(a, Announce(b, c)), Announce(And(a, Announce(a, b)), c))


AXIOM_SCHEMAS = {"K": _k, "T": _t, "4": _4, "5": _5,
                 "R1": _r1, "R2": _r2, "R3": _r3, "R4": _r4, "R5": _r5, "R6": _r6}

ATOMIC_ARGS = (Prop("p"), Prop("q"), Prop("r"))
COMPOUND_ARGS = (parse("K_a p"), parse("p & q"), parse("~r"))


def axiom_instances(args: Sequence[Formula], agent: str = "a") -> dict[str, Formula]:
    a, b, c = args
    return {name: schema(a, b, c, agent) for name, schema in AXIOM_SCHEMAS.items()}
