"""Formulas of public announcement logic.

The language has proposition letters, negation, conjunction, implication,
knowledge operators ``K_a`` and announcements ``[phi]psi``.  Formulas without
announcements form the epistemic fragment.

Concrete syntax (whitespace-insensitive)::

    formula  := iff
    iff      := imp ( "<->" imp )*          left-assoc, desugared
    imp      := conj ( "->" imp )?          right-assoc
    conj     := unary ( "&" unary )*
    unary    := "~" unary | "K_" AGENT unary | "[" formula "]" unary | atom
    atom     := IDENT | "(" formula ")"
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Optional, Union

__all__ = [
    "Formula", "Prop", "Not", "And", "Implies", "Know", "Announce",
    "ParseError", "parse", "render", "iff", "complexity", "semi_subformulas",
    "subformulas", "translate", "is_el", "atoms_of", "agents_of", "depth",
]


class Formula:
    """Base class of the formula AST.  All nodes are immutable and hashable.

    The hash is computed once at construction; equality compares it first.
    """

    __slots__ = ("_hash",)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((type(self).__name__,) + self._fields()))

    def _fields(self) -> tuple:
        raise NotImplementedError

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if type(other) is not type(self) or self._hash != other._hash:
            return False
        return self._fields() == other._fields()

    def __ne__(self, other) -> bool:
        return not self == other

    def __reduce__(self):
        return (type(self), self._fields())

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True, slots=True, eq=False)
class Prop(Formula):
    name: str

    def __repr__(self) -> str:
        return f"Prop({self.name!r})"

    def _fields(self):
        return (self.name,)


@dataclass(frozen=True, slots=True, eq=False)
class Not(Formula):
    sub: Formula

    def _fields(self):
        return (self.sub,)


@dataclass(frozen=True, slots=True, eq=False)
class And(Formula):
    left: Formula
    right: Formula

    def _fields(self):
        return (self.left, self.right)


@dataclass(frozen=True, slots=True, eq=False)
class Implies(Formula):
    left: Formula
    right: Formula

    def _fields(self):
        return (self.left, self.right)


@dataclass(frozen=True, slots=True, eq=False)
class Know(Formula):
    agent: str
    sub: Formula

    def _fields(self):
        return (self.agent, self.sub)


@dataclass(frozen=True, slots=True, eq=False)
class Announce(Formula):
    """``[announced]body``: after truthfully announcing ``announced``, ``body`` holds."""

    announced: Formula
    body: Formula

    def _fields(self):
        return (self.announced, self.body)


def iff(left: Formula, right: Formula) -> Formula:
    """The biconditional, as an abbreviation."""
    return And(Implies(left, right), Implies(right, left))


# ---------------------------------------------------------------------------
# parsing

class ParseError(ValueError):
    """Raised on malformed formula text.  ``pos`` is a 0-based character offset."""

    def __init__(self, message: str, pos: int, text: str = ""):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}")


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<iff><->)|(?P<imp>->)|(?P<know>K_(?P<agent>[a-z0-9_]+))"
    r"|(?P<ident>[a-z][a-z0-9_]*)|(?P<sym>[~&\[\]()]))"
)

_Token = tuple[str, str, int]   # kind, value, position


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            start = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[start]!r}", start, text)
        kind = m.lastgroup
        if kind == "agent":
            kind = "know"
        start = m.start(kind)
        if kind == "know":
            tokens.append(("know", m.group("agent"), start))
        else:
            tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, agents: Optional[Iterable[str]]):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.agents = None if agents is None else set(agents)

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def take(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str, what: str) -> None:
        kind, val, pos = self.peek()
        if val != value or kind == "ident":
            found = "end of input" if kind == "end" else repr(val)
            raise ParseError(f"expected {what}, found {found}", pos, self.text)
        self.i += 1

    def formula(self) -> Formula:
        left = self.imp()
        while self.peek()[0] == "iff":
            self.take()
            left = iff(left, self.imp())
        return left

    def imp(self) -> Formula:
        left = self.conj()
        if self.peek()[0] == "imp":
            self.take()
            return Implies(left, self.imp())
        return left

    def conj(self) -> Formula:
        left = self.unary()
        while self.peek()[1] == "&":
            self.take()
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        kind, val, pos = self.peek()
        if kind == "sym" and val == "~":
            self.take()
            return Not(self.unary())
        if kind == "know":
            self.take()
            if self.agents is not None and val not in self.agents:
                raise ParseError(f"unknown agent {val!r}", pos, self.text)
            return Know(val, self.unary())
        if kind == "sym" and val == "[":
            self.take()
            announced = self.formula()
            self.expect("]", "']' closing announcement")
            return Announce(announced, self.unary())
        return self.atom()

    def atom(self) -> Formula:
        kind, val, pos = self.take()
        if kind == "ident":
            return Prop(val)
        if kind == "sym" and val == "(":
            inner = self.formula()
            self.expect(")", "')'")
            return inner
        found = "end of input" if kind == "end" else repr(val)
        raise ParseError(f"expected a formula, found {found}", pos, self.text)


def parse(text: str, agents: Optional[Iterable[str]] = None) -> Formula:
    """Parse formula text.

    If ``agents`` is given, every ``K_`` subscript must belong to it.

    >>> parse("K_a p -> p")
    Implies(left=Know(agent='a', sub=Prop('p')), right=Prop('p'))
    """
    if not text.strip():
        raise ParseError("empty input", 0, text)
    p = _Parser(text, agents)
    f = p.formula()
    kind, val, pos = p.peek()
    if kind != "end":
        raise ParseError(f"unexpected {val!r}", pos, text)
    return f


# ---------------------------------------------------------------------------
# rendering

_IMP, _CONJ, _UNARY = 1, 2, 3


@lru_cache(maxsize=1 << 16)
def render(f: Formula) -> str:
    """Render ``f`` so that it parses back to ``f``.

    Parentheses are the minimum the precedence rules need, except that a
    conjunction directly under an implication is always bracketed.
    """
    return _render(f, _IMP)


def _render(f: Formula, ctx: int) -> str:
    if isinstance(f, Prop):
        return f.name
    if isinstance(f, Not):
        return "~" + _render(f.sub, _UNARY)
    if isinstance(f, Know):
        return f"K_{f.agent} " + _render(f.sub, _UNARY)
    if isinstance(f, Announce):
        return "[" + _render(f.announced, _IMP) + "]" + _render(f.body, _UNARY)
    if isinstance(f, And):
        s = _render(f.left, _CONJ) + " & " + _render(f.right, _UNARY)
        return s if ctx <= _CONJ else f"({s})"
    if isinstance(f, Implies):
        s = _render(f.left, _UNARY if isinstance(f.left, And) else _CONJ) + " -> " + _render(
            f.right, _UNARY if isinstance(f.right, And) else _IMP)
        return s if ctx <= _IMP else f"({s})"
    raise TypeError(f"not a formula: {f!r}")


def to_latex(f: Formula) -> str:
    return _latex(f, _IMP)


def _latex(f: Formula, ctx: int) -> str:
    if isinstance(f, Prop):
        return f.name if len(f.name) == 1 else rf"\mathit{{{f.name}}}".replace("_", r"\_")
    if isinstance(f, Not):
        return r"\neg " + _latex(f.sub, _UNARY)
    if isinstance(f, Know):
        return rf"K_{{{f.agent}}} " + _latex(f.sub, _UNARY)
    if isinstance(f, Announce):
        return "[" + _latex(f.announced, _IMP) + "]" + _latex(f.body, _UNARY)
    if isinstance(f, And):
        s = _latex(f.left, _CONJ) + r" \land " + _latex(f.right, _UNARY)
        return s if ctx <= _CONJ else f"({s})"
    if isinstance(f, Implies):
        s = _latex(f.left, _UNARY if isinstance(f.left, And) else _CONJ) + r" \to " + _latex(
            f.right, _UNARY if isinstance(f.right, And) else _IMP)
        return s if ctx <= _IMP else f"({s})"
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# measures and closures

@lru_cache(maxsize=1 << 16)
def complexity(f: Formula) -> int:
    """Complexity measure under which every reduction step strictly decreases.

    Announcements weigh ``(4 + c(announced)) * c(body)``; the other connectives
    add one to the (maximum) complexity of their arguments.
    """
    if isinstance(f, Prop):
        return 1
    if isinstance(f, (Not, Know)):
        return 1 + complexity(f.sub)
    if isinstance(f, (And, Implies)):
        return 1 + max(complexity(f.left), complexity(f.right))
    if isinstance(f, Announce):
        return (4 + complexity(f.announced)) * complexity(f.body)
    raise TypeError(f"not a formula: {f!r}")


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, Prop):
        return ()
    if isinstance(f, (Not, Know)):
        return (f.sub,)
    if isinstance(f, (And, Implies)):
        return (f.left, f.right)
    if isinstance(f, Announce):
        return (f.announced, f.body)
    raise TypeError(f"not a formula: {f!r}")


def _walk(f: Formula) -> Iterator[Formula]:
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(children(g))


def subformulas(f: Formula) -> set[Formula]:
    return set(_walk(f))


def depth(f: Formula) -> int:
    kids = children(f)
    return 1 + max(map(depth, kids)) if kids else 0


def atoms_of(f: Formula) -> set[str]:
    return set(_atoms(f))


def agents_of(f: Formula) -> set[str]:
    return set(_agents(f))


@lru_cache(maxsize=1 << 16)
def _atoms(f: Formula) -> frozenset:
    return frozenset(g.name for g in _walk(f) if isinstance(g, Prop))


@lru_cache(maxsize=1 << 16)
def _agents(f: Formula) -> frozenset:
    return frozenset(g.agent for g in _walk(f) if isinstance(g, Know))


def is_el(f: Formula) -> bool:
    """True iff no announcement occurs in ``f``."""
    return not any(isinstance(g, Announce) for g in _walk(f))


def reduction_step(f: Announce) -> Formula:
    """The right-hand side of the reduction axiom whose left-hand side is ``f``."""
    ann, body = f.announced, f.body
    if isinstance(body, Prop):
        return Implies(ann, body)
    if isinstance(body, Not):
        return Implies(ann, Not(Announce(ann, body.sub)))
    if isinstance(body, And):
        return And(Announce(ann, body.left), Announce(ann, body.right))
    if isinstance(body, Implies):
        return Implies(Announce(ann, body.left), Announce(ann, body.right))
    if isinstance(body, Know):
        return Implies(ann, Know(body.agent, Announce(ann, body.sub)))
    if isinstance(body, Announce):
        return Announce(And(ann, Announce(ann, body.announced)), body.body)
    raise TypeError(f"not a formula: {body!r}")


def _semi_steps(f: Formula) -> tuple[Formula, ...]:
    if not isinstance(f, Announce):
        return ()
    ann, body = f.announced, f.body
    if isinstance(body, Not):
        return (Not(Announce(ann, body.sub)),)
    if isinstance(body, Know):
        return (Know(body.agent, Announce(ann, body.sub)),)
    if isinstance(body, (And, Implies)):
        return (Announce(ann, body.left), Announce(ann, body.right))
    if isinstance(body, Announce):
        return (Announce(And(ann, Announce(ann, body.announced)), body.body),)
    return ()


def semi_subformulas(f: Formula) -> frozenset[Formula]:
    """Close ``{f}`` under taking subformulas and the four reduction-shaped steps."""
    return _semi_subformulas(f)


@lru_cache(maxsize=4096)
def _semi_subformulas(f: Formula) -> frozenset[Formula]:
    seen = {f}
    todo = [f]
    while todo:
        g = todo.pop()
        for h in children(g) + _semi_steps(g):
            if h not in seen:
                seen.add(h)
                todo.append(h)
    return frozenset(seen)


# ---------------------------------------------------------------------------
# translation into the epistemic fragment

@lru_cache(maxsize=1 << 16)
def translate(f: Formula) -> Formula:
    """Eliminate announcements by structural recursion on the reduction clauses.

    Each announcement clause recurses on a formula of strictly smaller
    complexity, so the recursion terminates.
    """
    if isinstance(f, Prop):
        return f
    if isinstance(f, Not):
        return Not(translate(f.sub))
    if isinstance(f, And):
        return And(translate(f.left), translate(f.right))
    if isinstance(f, Implies):
        return Implies(translate(f.left), translate(f.right))
    if isinstance(f, Know):
        return Know(f.agent, translate(f.sub))
    if isinstance(f, Announce):
        return translate(reduction_step(f))
    raise TypeError(f"not a formula: {f!r}")


FormulaLike = Union[Formula, str]


def as_formula(f: FormulaLike) -> Formula:
    return parse(f) if isinstance(f, str) else f
