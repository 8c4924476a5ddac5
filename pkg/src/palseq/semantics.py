"""Finite epistemic models and the truth definition.

Accessibility relations are equivalence relations, so a model stores one
partition of its worlds per agent.  Agents the model does not mention are
interpreted by the identity relation.

Truth sets are computed bottom-up as bitmasks over the world list; a model
restricted by an announcement is the same model seen through a smaller mask.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Iterator, Mapping, Optional

from .formula import (And, Announce, Formula, Implies, Know, Not, Prop,
                      agents_of, atoms_of)

World = Hashable


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class KripkeModel:
    """An epistemic model ``(W, {~_a}, V)`` with each ``~_a`` given as a partition."""

    worlds: tuple
    partitions: Mapping[str, tuple[frozenset, ...]]
    valuation: Mapping[str, frozenset]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)
    _blocks: dict = field(init=False, repr=False, compare=False, hash=False)
    _val: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        worlds = tuple(self.worlds)
        if not worlds:
            raise ModelError("a model needs at least one world")
        if len(set(worlds)) != len(worlds):
            raise ModelError("duplicate worlds")
        index = {w: i for i, w in enumerate(worlds)}
        parts = {}
        blocks = {}
        for agent, part in self.partitions.items():
            part = tuple(frozenset(b) for b in part if b)
            seen = [w for b in part for w in b]
            if len(seen) != len(worlds) or set(seen) != index.keys():
                raise ModelError(f"relation for agent {agent!r} is not a partition of the worlds")
            parts[agent] = part
            blocks[agent] = tuple(_mask(b, index) for b in part)
        val = {}
        for atom, ext in self.valuation.items():
            ext = frozenset(ext)
            if not ext <= index.keys():
                raise ModelError(f"valuation of {atom!r} mentions unknown worlds")
            val[atom] = _mask(ext, index)
        object.__setattr__(self, "worlds", worlds)
        object.__setattr__(self, "partitions", parts)
        object.__setattr__(self, "valuation", {a: frozenset(e) for a, e in self.valuation.items()})
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_blocks", blocks)
        object.__setattr__(self, "_val", val)

    @classmethod
    def from_pairs(cls, worlds: Iterable, relations: Mapping[str, Iterable[tuple]],
                   valuation: Mapping[str, Iterable]) -> "KripkeModel":
        """Build a model from relations given as pair sets; they must be equivalences."""
        worlds = tuple(worlds)
        partitions = {}
        for agent, pairs in relations.items():
            pairs = set(pairs)
            if not is_equivalence(worlds, pairs):
                raise ModelError(f"relation for agent {agent!r} is not an equivalence relation")
            classes = {}
            for w in worlds:
                classes.setdefault(frozenset(v for v in worlds if (w, v) in pairs), None)
            partitions[agent] = tuple(classes)
        return cls(worlds, partitions, {a: frozenset(e) for a, e in valuation.items()})

    @property
    def full_mask(self) -> int:
        return (1 << len(self.worlds)) - 1

    def relation(self, agent: str) -> frozenset[tuple]:
        """The accessibility relation of ``agent`` as a set of pairs."""
        part = self.partitions.get(agent)
        if part is None:
            return frozenset((w, w) for w in self.worlds)
        return frozenset((u, v) for b in part for u in b for v in b)

    def related(self, agent: str, u: World, v: World) -> bool:
        part = self.partitions.get(agent)
        if part is None:
            return u == v
        return any(u in b and v in b for b in part)

    def index(self, w: World) -> int:
        try:
            return self._index[w]
        except KeyError:
            raise ModelError(f"world {w!r} is not in the model") from None

    def worlds_of(self, mask: int) -> frozenset:
        return frozenset(w for i, w in enumerate(self.worlds) if mask >> i & 1)

    def truth_mask(self, f: Formula, within: Optional[int] = None) -> int:
        """Bitmask of the worlds where ``f`` holds, in the submodel on ``within``."""
        return _ext(self, self.full_mask if within is None else within, f, {})

    def to_json(self) -> dict:
        """Serialize in the model-file format (worlds by index)."""
        idx = self._index
        return {
            "worlds": len(self.worlds),
            "relations": {a: sorted(sorted(idx[w] for w in b) for b in part)
                          for a, part in sorted(self.partitions.items())},
            "valuation": {p: sorted(idx[w] for w in ext) for p, ext in sorted(self.valuation.items())},
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "KripkeModel":
        try:
            n = int(data["worlds"])
            if n < 1:
                raise ModelError("'worlds' must be positive")
            worlds = tuple(range(n))
            rels = {a: tuple(frozenset(int(w) for w in b) for b in blocks)
                    for a, blocks in data.get("relations", {}).items()}
            val = {p: frozenset(int(w) for w in ws) for p, ws in data.get("valuation", {}).items()}
        except (KeyError, TypeError, AttributeError) as exc:
            raise ModelError(f"malformed model description: {exc}") from exc
        return cls(worlds, rels, val)


def _mask(ws: Iterable, index: Mapping) -> int:
    m = 0
    for w in ws:
        m |= 1 << index[w]
    return m


def is_equivalence(worlds: Iterable, pairs: set) -> bool:
    worlds = list(worlds)
    ws = set(worlds)
    if any(u not in ws or v not in ws for u, v in pairs):
        return False
    if any((w, w) not in pairs for w in worlds):
        return False
    if any((v, u) not in pairs for u, v in pairs):
        return False
    return all((u, z) in pairs for u, v in pairs for y, z in pairs if v == y)


def _ext(m: KripkeModel, within: int, f: Formula, memo: dict) -> int:
    key = (within, f)
    hit = memo.get(key)
    if hit is not None:
        return hit
    if isinstance(f, Prop):
        r = m._val.get(f.name, 0) & within
    elif isinstance(f, Not):
        r = within & ~_ext(m, within, f.sub, memo)
    elif isinstance(f, And):
        r = _ext(m, within, f.left, memo) & _ext(m, within, f.right, memo)
    elif isinstance(f, Implies):
        r = (within & ~_ext(m, within, f.left, memo)) | _ext(m, within, f.right, memo)
    elif isinstance(f, Know):
        sub = _ext(m, within, f.sub, memo)
        blocks = m._blocks.get(f.agent)
        if blocks is None:
            r = sub
        else:
            r = 0
            for b in blocks:
                b &= within
                if b & sub == b:
                    r |= b
    elif isinstance(f, Announce):
        ann = _ext(m, within, f.announced, memo)
        r = (within & ~ann) | _ext(m, ann, f.body, memo)
    else:
        raise TypeError(f"not a formula: {f!r}")
    memo[key] = r
    return r


def eval_formula(m: KripkeModel, w: World, f: Formula) -> bool:
    """``M, w |= f``."""
    return bool(m.truth_mask(f) >> m.index(w) & 1)


def truth_set(m: KripkeModel, f: Formula) -> frozenset:
    return m.worlds_of(m.truth_mask(f))


def restrict(m: KripkeModel, f: Formula) -> Optional[KripkeModel]:
    """The submodel on the worlds where ``f`` holds, or None if there are none."""
    keep = truth_set(m, f)
    if not keep:
        return None
    worlds = tuple(w for w in m.worlds if w in keep)
    parts = {a: tuple(b & keep for b in part if b & keep) for a, part in m.partitions.items()}
    val = {p: ext & keep for p, ext in m.valuation.items()}
    return KripkeModel(worlds, parts, val)


# ---------------------------------------------------------------------------
# bounded enumeration

def set_partitions(items: tuple) -> Iterator[tuple[frozenset, ...]]:
    """All partitions of ``items`` (restricted-growth order)."""
    if not items:
        yield ()
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield (frozenset([first]),) + part
        for i in range(len(part)):
            yield part[:i] + (part[i] | {first},) + part[i + 1:]


def enumerate_models(max_worlds: int, agents: Iterable[str], atoms: Iterable[str],
                     min_worlds: int = 1) -> Iterator[KripkeModel]:
    """Every model with worlds ``0..n-1`` for ``min_worlds <= n <= max_worlds``.

    Each agent ranges over all partitions, each atom over all subsets.
    """
    agents = sorted(set(agents))
    atoms = sorted(set(atoms))
    for n in range(min_worlds, max_worlds + 1):
        worlds = tuple(range(n))
        parts = list(set_partitions(worlds))
        subsets = [frozenset(w for w in worlds if bits >> w & 1) for bits in range(1 << n)]
        for rel in itertools.product(parts, repeat=len(agents)):
            partitions = dict(zip(agents, rel))
            for val in itertools.product(subsets, repeat=len(atoms)):
                yield KripkeModel(worlds, partitions, dict(zip(atoms, val)))


def brute_force_check(f: Formula, max_worlds: int = 3, agents: Optional[Iterable[str]] = None,
                      atoms: Optional[Iterable[str]] = None) -> Optional[tuple[KripkeModel, World]]:
    """Search for a pointed model falsifying ``f``, smallest models first.

    ``None`` only means no countermodel exists within the bound.
    """
    agents = agents_of(f) if agents is None else set(agents) | agents_of(f)
    atoms = atoms_of(f) if atoms is None else set(atoms) | atoms_of(f)
    for m in enumerate_models(max_worlds, agents, atoms):
        mask = m.truth_mask(f)
        if mask != m.full_mask:
            for i, w in enumerate(m.worlds):
                if not mask >> i & 1:
                    return m, w
    return None


def equivalent_within(f: Formula, g: Formula, max_worlds: int = 3,
                      agents: Optional[Iterable[str]] = None) -> Optional[tuple[KripkeModel, World]]:
    """A pointed model where ``f`` and ``g`` differ, or None within the bound."""
    agents = set(agents or ()) | agents_of(f) | agents_of(g)
    atoms = atoms_of(f) | atoms_of(g)
    for m in enumerate_models(max_worlds, agents, atoms):
        diff = m.truth_mask(f) ^ m.truth_mask(g)
        if diff:
            return m, m.worlds[(diff & -diff).bit_length() - 1]
    return None
