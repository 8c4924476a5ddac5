"""Proof search, model checking and proof transforms for public announcement logic.

The calculus is a labelled sequent calculus over multi-agent S5 extended
with reduction rules for announcements.  The usual entry points::

    >>> from palseq import parse, prove_formula
    >>> prove_formula(parse("K_a p -> p")).verdict
    'proved'
"""

from .calculus import (RuleApplication, RuleName, applicable, check_step, instantiate,
                       is_initial)
from .derivation import (Derivation, DerivationFormatError, check_derivation, export,
                         from_json, height, import_derivation, lift_to_pal, lower_to_el,
                         rules_used, translate_sequent)
from .formula import (And, Announce, Formula, Implies, Know, Not, ParseError, Prop,
                      complexity, iff, is_el, parse, render, semi_subformulas, translate)
from .search import (DEFAULT_BUDGET, BudgetExhausted, Proved, Refuted, SearchBudget,
                     SearchContext, extract_countermodel, prove, prove_formula)
from .semantics import (KripkeModel, ModelError, brute_force_check, enumerate_models,
                        eval_formula, restrict)
from .sequent import (Labelled, RelAtom, Sequent, fresh_label, labels_of, parse_sequent,
                      sequent_holds)

__all__ = [
    "And", "Announce", "BudgetExhausted", "DEFAULT_BUDGET", "Derivation",
    "DerivationFormatError", "Formula", "Implies", "Know", "KripkeModel", "Labelled",
    "ModelError", "Not", "ParseError", "Prop", "Proved", "Refuted", "RelAtom",
    "RuleApplication", "RuleName", "SearchBudget", "SearchContext", "Sequent",
    "applicable", "brute_force_check", "check_derivation", "check_step", "complexity",
    "enumerate_models", "eval_formula", "export", "extract_countermodel", "fresh_label",
    "from_json", "height", "iff", "import_derivation", "instantiate", "is_el",
    "is_initial", "labels_of", "lift_to_pal", "lower_to_el", "parse", "parse_sequent",
    "prove", "prove_formula", "render", "restrict", "rules_used", "semi_subformulas", "sequent_holds",
    "translate", "translate_sequent",
]
