"""Derivation trees: checking, height, export, and the translation transforms.

:func:`lower_to_el` turns a derivation into one of the member-wise
translated endsequent that uses no reduction rule and is no taller.
:func:`lift_to_pal` goes the other way: given a derivation of the translated
endsequent it rebuilds a derivation of the original one, one formula
occurrence at a time.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterator, Union

import jsonschema

from .calculus import (INITIAL_RULES, REDUCTION_RULES, RuleApplication, RuleName,
                       SCHEMAS, check_step, instantiate)
from .formula import (And, Announce, Formula, Implies, Know, Not, Prop, is_el,
                      parse, reduction_step, render, translate)
from .sequent import (Expr, Labelled, RelAtom, Sequent, sequent_to_latex)


@dataclass(frozen=True)
class Derivation:
    root: Sequent
    justification: RuleApplication
    children: tuple["Derivation", ...] = ()

    @property
    def rule(self) -> RuleName:
        return self.justification.rule

    def nodes(self) -> Iterator["Derivation"]:
        stack = [self]
        while stack:
            d = stack.pop()
            yield d
            stack.extend(reversed(d.children))


def node(app: RuleApplication, children: tuple[Derivation, ...] = ()) -> Derivation:
    return Derivation(app.conclusion, app, tuple(children))


def build(rule: RuleName, s: Sequent, principal, children=(), eigenvariable=None) -> Derivation:
    """Instantiate ``rule`` at ``s`` and attach ``children`` (checked for shape)."""
    app = instantiate(rule, s, tuple(principal), eigenvariable)
    children = tuple(children)
    if tuple(c.root for c in children) != app.premises:
        raise ValueError(f"children do not match the premises of {rule}")
    return node(app, children)


def check_derivation(d: Derivation) -> bool:
    """Every node is a correct rule instance and every leaf an initial sequent."""
    for n in d.nodes():
        app = n.justification
        if app.conclusion != n.root or not check_step(app):
            return False
        if len(n.children) != len(app.premises):
            return False
        if any(c.root != p for c, p in zip(n.children, app.premises)):
            return False
        if not n.children and app.rule not in INITIAL_RULES:
            return False
    return True


def height(d: Derivation) -> int:
    """Nodes on the longest branch, leaf included."""
    return 1 + max((height(c) for c in d.children), default=0)


def rules_used(d: Derivation) -> set[RuleName]:
    return {n.rule for n in d.nodes()}


# ---------------------------------------------------------------------------
# translation transforms

def translate_expr(e: Expr) -> Expr:
    return Labelled(e.label, translate(e.formula)) if isinstance(e, Labelled) else e


def translate_sequent(s: Sequent) -> Sequent:
    return s.map_formulas(translate)


_LOWERED = {
    RuleName.R1L: RuleName.ImpL, RuleName.R1R: RuleName.ImpR,
    RuleName.R2L: RuleName.ImpL, RuleName.R2R: RuleName.ImpR,
    RuleName.R3L: RuleName.AndL, RuleName.R3R: RuleName.AndR,
    RuleName.R4L: RuleName.ImpL, RuleName.R4R: RuleName.ImpR,
    RuleName.R5L: RuleName.ImpL, RuleName.R5R: RuleName.ImpR,
}


def lower_to_el(d: Derivation) -> Derivation:
    """A reduction-free derivation of the translated endsequent, no taller than ``d``."""
    if not check_derivation(d):
        raise ValueError("input is not a valid derivation")
    return _lower(d)


def _lower(d: Derivation) -> Derivation:
    app = d.justification
    if app.rule in (RuleName.R6L, RuleName.R6R):
        # premise and conclusion have the same translation
        return _lower(d.children[0])
    children = tuple(_lower(c) for c in d.children)
    rule = _LOWERED.get(app.rule, app.rule)
    principal = tuple(translate_expr(e) for e in app.principal)
    conclusion = translate_sequent(app.conclusion)
    return build(rule, conclusion, principal, children, app.eigenvariable)


def lift_to_pal(d: Derivation, target: Sequent) -> Derivation:
    """A derivation of ``target`` from a derivation of its translation."""
    if not check_derivation(d):
        raise ValueError("input is not a valid derivation")
    if d.root != translate_sequent(target):
        raise ValueError("derivation does not end in the translation of the target")
    for side in ("ant", "suc"):
        for e in getattr(target, side):
            if isinstance(e, Labelled) and not is_el(e.formula):
                d = _lift(d, side, e.label, e.formula)
    assert d.root == target
    return d


def _principal_on(app: RuleApplication, side: str, e: Expr) -> bool:
    """Is ``e`` the principal labelled formula of ``app`` on ``side``?"""
    if not app.principal or app.principal[0] != e:
        return False
    if app.rule is RuleName.KL:
        return side == "ant"
    if app.rule in (RuleName.KR,):
        return side == "suc"
    schema_side = _SIDE.get(app.rule)
    return schema_side == side


_SIDE = {
    RuleName.NegL: "ant", RuleName.AndL: "ant", RuleName.ImpL: "ant",
    RuleName.NegR: "suc", RuleName.AndR: "suc", RuleName.ImpR: "suc",
    **{r: ("ant" if r.value.endswith("L") else "suc") for r in REDUCTION_RULES},
}

_REDUCTION_FOR = {
    Prop: ("R1L", "R1R"), Not: ("R2L", "R2R"), And: ("R3L", "R3R"),
    Implies: ("R4L", "R4R"), Know: ("R5L", "R5R"), Announce: ("R6L", "R6R"),
}


def _lift(d: Derivation, side: str, x: str, phi: Formula) -> Derivation:
    """Replace one occurrence of ``x: t(phi)`` on ``side`` of d's root by ``x: phi``.

    Induction on the height of ``d``; when the occurrence is principal, a
    sub-induction on the complexity of ``phi``.
    """
    t_phi = translate(phi)
    if t_phi == phi:
        return d
    e = Labelled(x, t_phi)
    new = Labelled(x, phi)
    app = d.justification
    root = d.root
    if not _principal_on(app, side, e) or root.count(side, e) > 1:
        # our occurrence is context: it sits in every premise
        children = tuple(_lift(c, side, x, phi) for c in d.children)
        return build(app.rule, root.replace(side, e, new), app.principal, children, app.eigenvariable)

    conclusion = root.replace(side, e, new)
    other = "suc" if side == "ant" else "ant"
    kids = d.children

    if isinstance(phi, Not):
        return build(app.rule, conclusion, (new,), [_lift(kids[0], other, x, phi.sub)])
    if isinstance(phi, And):
        if app.rule is RuleName.AndL:
            c = _lift(_lift(kids[0], "ant", x, phi.left), "ant", x, phi.right)
            return build(app.rule, conclusion, (new,), [c])
        return build(app.rule, conclusion, (new,),
                     [_lift(kids[0], "suc", x, phi.left), _lift(kids[1], "suc", x, phi.right)])
    if isinstance(phi, Implies):
        if app.rule is RuleName.ImpL:
            return build(app.rule, conclusion, (new,),
                         [_lift(kids[0], "suc", x, phi.left), _lift(kids[1], "ant", x, phi.right)])
        c = _lift(_lift(kids[0], "ant", x, phi.left), "suc", x, phi.right)
        return build(app.rule, conclusion, (new,), [c])
    if isinstance(phi, Know):
        if app.rule is RuleName.KL:
            rel = app.principal[1]
            # the principal stays in the premise: lift it there, then the new instance
            c = _lift(kids[0], "ant", x, phi)
            c = _lift(c, "ant", rel.right, phi.sub)
            return build(app.rule, conclusion, (new, rel), [c])
        y = app.eigenvariable
        c = _lift(kids[0], "suc", y, phi.sub)
        return build(app.rule, conclusion, (new,), [c], y)
    if isinstance(phi, Announce):
        left_rule, right_rule = _REDUCTION_FOR[type(phi.body)]
        rule = RuleName(left_rule if side == "ant" else right_rule)
        reduct = reduction_step(phi)
        if isinstance(phi.body, Announce):
            # same translation, smaller complexity: lift the composed announcement
            below = _lift(d, side, x, reduct)
            return build(rule, conclusion, (new,), [below])
        # translation starts with the connective of the reduct
        lifted = _lift_reduct(d, side, x, reduct)
        return build(rule, conclusion, (new,), lifted)
    raise TypeError(f"unexpected formula {phi!r}")


def _lift_reduct(d: Derivation, side: str, x: str, reduct: Formula) -> list[Derivation]:
    """Premise derivations of the reduction rule, from d whose last step
    decomposes ``x: t(reduct)``."""
    kids = d.children
    if isinstance(reduct, Implies):
        if side == "ant":
            return [_lift(kids[0], "suc", x, reduct.left), _lift(kids[1], "ant", x, reduct.right)]
        return [_lift(_lift(kids[0], "ant", x, reduct.left), "suc", x, reduct.right)]
    if isinstance(reduct, And):
        if side == "ant":
            return [_lift(_lift(kids[0], "ant", x, reduct.left), "ant", x, reduct.right)]
        return [_lift(kids[0], "suc", x, reduct.left), _lift(kids[1], "suc", x, reduct.right)]
    raise TypeError(f"unexpected reduct {reduct!r}")


# ---------------------------------------------------------------------------
# export / import

def to_text(d: Derivation, indent: str = "  ") -> str:
    lines = []

    def walk(n: Derivation, level: int):
        eigen = f" {n.justification.eigenvariable}" if n.justification.eigenvariable else ""
        lines.append(f"{indent * level}{n.root}   [{n.rule}{eigen}]")
        for c in n.children:
            walk(c, level + 1)
    walk(d, 0)
    return "\n".join(lines)


_LATEX_INFER = {1: r"\UnaryInfC", 2: r"\BinaryInfC"}


def to_latex(d: Derivation, standalone: bool = True) -> str:
    """bussproofs markup; with ``standalone`` a complete LaTeX document."""
    lines: list[str] = []

    def walk(n: Derivation):
        seq = f"${sequent_to_latex(n.root)}$"
        if not n.children:
            lines.append(rf"\AxiomC{{{seq}}}")
            return
        for c in n.children:
            walk(c)
        lines.append(rf"\RightLabel{{\scriptsize {n.rule.value}}}")
        lines.append(rf"{_LATEX_INFER[len(n.children)]}{{{seq}}}")
    walk(d)
    body = "\n".join(lines) + "\n\\DisplayProof"
    if not standalone:
        return body
    return ("\\documentclass{article}\n\\usepackage{amssymb}\n\\usepackage{bussproofs}\n"
            "\\usepackage[landscape,margin=1cm]{geometry}\n\\begin{document}\n\\tiny\n"
            f"{body}\n\\end{{document}}\n")


def expr_to_json(e: Expr) -> dict:
    if isinstance(e, RelAtom):
        return {"rel": [e.left, e.agent, e.right]}
    return {"lab": [e.label, render(e.formula)]}


def sequent_to_json(s: Sequent) -> dict:
    return {"ant": [expr_to_json(e) for e in s.ant], "suc": [expr_to_json(e) for e in s.suc]}


def to_json_obj(d: Derivation) -> dict:
    return {
        "seq": sequent_to_json(d.root),
        "rule": d.rule.value,
        "eigen": d.justification.eigenvariable,
        "principal": [expr_to_json(e) for e in d.justification.principal],
        "children": [to_json_obj(c) for c in d.children],
    }


def export(d: Derivation, fmt: str = "text") -> str:
    if fmt == "text":
        return to_text(d)
    if fmt == "latex":
        return to_latex(d)
    if fmt == "json":
        return json.dumps(to_json_obj(d), indent=1)
    raise ValueError(f"unknown format {fmt!r}")


class DerivationFormatError(ValueError):
    """The JSON text does not describe a derivation; ``path`` locates the problem."""

    def __init__(self, message: str, path: str = "$"):
        self.path = path
        super().__init__(f"{path}: {message}")


_EXPR_SCHEMA = {
    "oneOf": [
        {"type": "object", "required": ["rel"], "additionalProperties": False,
         "properties": {"rel": {"type": "array", "items": {"type": "string"},
                                "minItems": 3, "maxItems": 3}}},
        {"type": "object", "required": ["lab"], "additionalProperties": False,
         "properties": {"lab": {"type": "array", "items": {"type": "string"},
                                "minItems": 2, "maxItems": 2}}},
    ]
}

JSON_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$ref": "#/$defs/node",
    "$defs": {
        "expr": _EXPR_SCHEMA,
        "node": {
            "type": "object",
            "required": ["seq", "rule", "children"],
            "properties": {
                "seq": {"type": "object", "required": ["ant", "suc"],
                        "properties": {"ant": {"type": "array", "items": {"$ref": "#/$defs/expr"}},
                                       "suc": {"type": "array", "items": {"$ref": "#/$defs/expr"}}}},
                "rule": {"type": "string"},
                "eigen": {"type": ["string", "null"]},
                "principal": {"type": "array", "items": {"$ref": "#/$defs/expr"}},
                "children": {"type": "array", "items": {"$ref": "#/$defs/node"}},
            },
        },
    },
}


def _path(parts) -> str:
    return "$" + "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in parts)


def _expr_from_json(obj: dict, path: list) -> Expr:
    if "rel" in obj:
        return RelAtom(*obj["rel"])
    label, text = obj["lab"]
    try:
        return Labelled(label, parse(text))
    except ValueError as exc:
        raise DerivationFormatError(str(exc), _path(path + ["lab", 1])) from None


def _from_obj(obj: dict, path: list) -> Derivation:
    try:
        rule = RuleName(obj["rule"])
    except ValueError:
        raise DerivationFormatError(f"unknown rule name {obj['rule']!r}", _path(path + ["rule"])) from None
    seq = Sequent([_expr_from_json(e, path + ["seq", "ant", i]) for i, e in enumerate(obj["seq"]["ant"])],
                  [_expr_from_json(e, path + ["seq", "suc", i]) for i, e in enumerate(obj["seq"]["suc"])])
    children = tuple(_from_obj(c, path + ["children", i]) for i, c in enumerate(obj["children"]))
    eigen = obj.get("eigen")
    if "principal" in obj:
        principal = tuple(_expr_from_json(e, path + ["principal", i]) for i, e in enumerate(obj["principal"]))
    else:
        principal = _infer_principal(rule, seq, tuple(c.root for c in children), eigen)
    premises = tuple(c.root for c in children)
    return Derivation(seq, RuleApplication(rule, seq, principal, premises, eigen), children)


def _infer_principal(rule: RuleName, seq: Sequent, premises: tuple, eigen) -> tuple:
    schema = SCHEMAS[rule]
    first = None
    for principal, _ in schema.candidates(seq):
        first = first or principal
        if schema.build(seq, principal, eigen) == list(premises):
            return principal
    return first or ()


def from_json(text: Union[str, dict]) -> Derivation:
    """Read a derivation written by ``export(d, "json")`` (text or parsed object)."""
    if isinstance(text, dict):
        obj = text
    else:
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DerivationFormatError(f"invalid JSON: {exc.msg} (line {exc.lineno})") from None
    validator = jsonschema.Draft202012Validator(JSON_SCHEMA)
    error = jsonschema.exceptions.best_match(validator.iter_errors(obj))
    if error is not None:
        raise DerivationFormatError(error.message, _path(error.absolute_path))
    return _from_obj(obj, [])


import_derivation = from_json
