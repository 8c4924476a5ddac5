"""Labelled sequents.

A sequent ``Gamma => Delta`` is a pair of finite multisets whose members are
relational atoms ``x ~a y`` or labelled formulas ``x: phi``.  Both sides are
stored as sorted tuples, so equal multisets are equal tuples.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from operator import attrgetter
from typing import Iterable, Mapping, Optional, Union

from .formula import Formula, Know, _walk, agents_of, atoms_of, parse, render, to_latex
from .semantics import KripkeModel, World, enumerate_models, eval_formula

Label = str


class _Member:
    """Shared machinery: a cached hash and sort key, equality via the key."""

    __slots__ = ("_hash", "_key")

    def __post_init__(self):
        key = self._make_key()
        object.__setattr__(self, "_key", key)
        object.__setattr__(self, "_hash", hash(key))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        return type(other) is type(self) and self._hash == other._hash and self._key == other._key

    def __ne__(self, other) -> bool:
        return not self == other


@dataclass(frozen=True, slots=True, eq=False)
class RelAtom(_Member):
    """``left ~agent right``."""

    left: Label
    agent: str
    right: Label

    def _make_key(self) -> tuple:
        return (0, self.left, self.agent, self.right)

    def __reduce__(self):
        return (RelAtom, (self.left, self.agent, self.right))

    def __str__(self) -> str:
        return f"{self.left} ~{self.agent} {self.right}"


@dataclass(frozen=True, slots=True, eq=False)
class Labelled(_Member):
    """``label: formula``."""

    label: Label
    formula: Formula

    def _make_key(self) -> tuple:
        # the rendering gives a total, readable order; hash-equal formulas share it
        return (1, self.label, render(self.formula), self.formula)

    def __reduce__(self):
        return (Labelled, (self.label, self.formula))

    def __str__(self) -> str:
        return f"{self.label}: {render(self.formula)}"


Expr = Union[RelAtom, Labelled]


_sort_key = attrgetter("_key")


def _canon(items: Iterable[Expr]) -> tuple[Expr, ...]:
    return tuple(sorted(items, key=_sort_key))


class Sequent:
    """An immutable sequent with multiset sides."""

    __slots__ = ("ant", "suc", "_hash", "_ant_set", "_memo")

    def __init__(self, ant: Iterable[Expr] = (), suc: Iterable[Expr] = ()):
        self.ant = _canon(ant)
        self.suc = _canon(suc)
        self._hash = hash((self.ant, self.suc))
        self._ant_set = None
        self._memo = {}

    @property
    def ant_set(self) -> frozenset:
        """The antecedent as a set, for fast membership tests."""
        if self._ant_set is None:
            self._ant_set = frozenset(self.ant)
        return self._ant_set

    def __eq__(self, other) -> bool:
        return isinstance(other, Sequent) and self._hash == other._hash \
            and self.ant == other.ant and self.suc == other.suc

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Sequent({render_sequent(self)!r})"

    def __str__(self) -> str:
        return render_sequent(self)

    def add(self, ant: Iterable[Expr] = (), suc: Iterable[Expr] = ()) -> "Sequent":
        return Sequent(self.ant + tuple(ant), self.suc + tuple(suc))

    def remove(self, side: str, e: Expr) -> "Sequent":
        """Remove one occurrence of ``e`` from ``side`` ('ant' or 'suc')."""
        items = list(getattr(self, side))
        items.remove(e)
        return Sequent(items, self.suc) if side == "ant" else Sequent(self.ant, items)

    def replace(self, side: str, old: Expr, new: Expr) -> "Sequent":
        s = self.remove(side, old)
        return s.add(ant=[new]) if side == "ant" else s.add(suc=[new])

    def count(self, side: str, e: Expr) -> int:
        return getattr(self, side).count(e)

    def _cached(self, key, make):
        if key not in self._memo:
            self._memo[key] = make()
        return self._memo[key]

    def labelled(self, side: str) -> list[Labelled]:
        return list(self._cached(("lab", side), lambda: tuple(
            e for e in getattr(self, side) if isinstance(e, Labelled))))

    def relational(self, side: str = "ant") -> list[RelAtom]:
        return list(self._cached(("rel", side), lambda: tuple(
            e for e in getattr(self, side) if isinstance(e, RelAtom))))

    def map_formulas(self, fn) -> "Sequent":
        def conv(e):
            return Labelled(e.label, fn(e.formula)) if isinstance(e, Labelled) else e
        return Sequent(map(conv, self.ant), map(conv, self.suc))

    def __iter__(self):
        return itertools.chain(self.ant, self.suc)


def labels_of(s: Union[Sequent, Iterable[Expr]]) -> set[Label]:
    if isinstance(s, Sequent):
        return set(s._cached("labels", lambda: frozenset(_labels(s))))
    return _labels(s)


def _labels(s: Iterable[Expr]) -> set[Label]:
    out: set[Label] = set()
    for e in s:
        if isinstance(e, RelAtom):
            out.add(e.left)
            out.add(e.right)
        else:
            out.add(e.label)
    return out


def agents_in(s: Sequent) -> set[str]:
    return set(s._cached("agents", lambda: frozenset(_agents(s))))


def _agents(s: Sequent) -> set[str]:
    out: set[str] = set()
    for e in s:
        if isinstance(e, RelAtom):
            out.add(e.agent)
        else:
            out |= agents_of(e.formula)
    return out


def fresh_label(s: Union[Sequent, Iterable[Expr]]) -> Label:
    """Smallest unused label in the enumeration x0, x1, ..."""
    used = labels_of(s)
    for i in itertools.count():
        if f"x{i}" not in used:
            return f"x{i}"


def holds(m: KripkeModel, assignment: Mapping[Label, World], e: Expr) -> bool:
    try:
        if isinstance(e, RelAtom):
            return m.related(e.agent, assignment[e.left], assignment[e.right])
        return eval_formula(m, assignment[e.label], e.formula)
    except KeyError as exc:
        raise KeyError(f"label {exc.args[0]!r} is not assigned a world") from None


def sequent_holds(m: KripkeModel, assignment: Mapping[Label, World], s: Sequent) -> bool:
    """Some antecedent member is false or some succedent member is true."""
    missing = labels_of(s) - assignment.keys()
    if missing:
        raise KeyError(f"unmapped labels: {sorted(missing)}")
    return (not all(holds(m, assignment, e) for e in s.ant)
            or any(holds(m, assignment, e) for e in s.suc))


def sequent_countermodel(s: Sequent, max_worlds: int = 3, agents: Optional[Iterable[str]] = None
                         ) -> Optional[tuple[KripkeModel, dict]]:
    """Brute-force a model and label assignment falsifying ``s``."""
    labels = sorted(labels_of(s))
    agents = set(agents or ()) | agents_in(s)
    atoms = set()
    for e in s:
        if isinstance(e, Labelled):
            atoms |= atoms_of(e.formula)
    for m in enumerate_models(max_worlds, agents, atoms):
        for ws in itertools.product(m.worlds, repeat=len(labels)):
            assignment = dict(zip(labels, ws))
            if not sequent_holds(m, assignment, s):
                return m, assignment
    return None


# ---------------------------------------------------------------------------
# text syntax:  x: K_a p, x ~a y => y: p

_REL_RE = re.compile(r"^\s*([a-z][a-z0-9_]*)\s*~\s*([a-z0-9_]+)\s+([a-z][a-z0-9_]*)\s*$")
_LAB_RE = re.compile(r"^\s*([a-z][a-z0-9_]*)\s*:(.*)$", re.S)


def parse_expr(text: str, agents: Optional[Iterable[str]] = None) -> Expr:
    m = _LAB_RE.match(text)
    if m:
        return Labelled(m.group(1), parse(m.group(2), agents))
    m = _REL_RE.match(text)
    if m:
        return RelAtom(m.group(1), m.group(2), m.group(3))
    raise ValueError(f"cannot read sequent member {text.strip()!r}")


def parse_sequent(text: str, agents: Optional[Iterable[str]] = None) -> Sequent:
    """Read ``x: K_a p, x ~a y => y: p``."""
    if text.count("=>") != 1:
        raise ValueError("a sequent needs exactly one '=>'")
    left, right = text.split("=>")

    def side(part: str) -> list[Expr]:
        return [parse_expr(item, agents) for item in part.split(",") if item.strip()]
    return Sequent(side(left), side(right))


def render_expr(e: Expr) -> str:
    return str(e)


def render_sequent(s: Sequent) -> str:
    left = ", ".join(map(str, s.ant))
    right = ", ".join(map(str, s.suc))
    return f"{left} => {right}".strip()


def expr_to_latex(e: Expr) -> str:
    if isinstance(e, RelAtom):
        return rf"{e.left} \sim_{{{e.agent}}} {e.right}"
    return f"{e.label} : {to_latex(e.formula)}"


def sequent_to_latex(s: Sequent) -> str:
    left = ", ".join(map(expr_to_latex, s.ant))
    right = ", ".join(map(expr_to_latex, s.suc))
    return rf"{left} \Rightarrow {right}".strip()


def know_count(s: Sequent, agent: str, side: str = "ant") -> int:
    """Occurrences of ``K_agent`` in the labelled formulas on ``side``."""
    return sum(1 for e in s.labelled(side) for g in _walk(e.formula)
               if isinstance(g, Know) and g.agent == agent)
