"""Command-line front end: ``palseq prove|translate|check|modelcheck|fuzz``.

Exit codes: 0 proved / valid / true, 1 refuted / invalid / false,
2 usage errors, malformed input and exhausted budgets.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from typing import Callable, Optional, Sequence, TextIO

from .corpus import random_formula
from .derivation import DerivationFormatError, check_derivation, export, from_json
from .formula import ParseError, parse, render, translate
from .search import (DEFAULT_BUDGET, BudgetExhausted, ProofResult, Proved,
                     SearchBudget, prove, prove_formula)
from .semantics import KripkeModel, ModelError, brute_force_check, equivalent_within, eval_formula
from .sequent import Labelled, Sequent, parse_sequent

EXIT_OK, EXIT_NO, EXIT_ERROR = 0, 1, 2


def _agents(text: Optional[str]) -> Optional[list[str]]:
    if text is None:
        return None
    agents = [a.strip() for a in text.split(",") if a.strip()]
    if not agents:
        raise argparse.ArgumentTypeError("--agents needs at least one agent")
    return agents


def _budget(args) -> SearchBudget:
    return SearchBudget(
        max_branch_depth=args.max_depth,
        max_labels=args.max_labels,
        time_limit=args.budget_ms / 1000.0,
    )


def describe_model(m: KripkeModel) -> str:
    """Plain-text listing of worlds, relation classes and valuation."""
    lines = [f"worlds: {' '.join(map(str, m.worlds))}"]
    for agent in sorted(m.partitions):
        blocks = sorted(sorted(map(str, b)) for b in m.partitions[agent])
        lines.append(f"~{agent}: " + " | ".join("{" + ", ".join(b) + "}" for b in blocks))
    for atom in sorted(m.valuation):
        ws = sorted(map(str, m.valuation[atom]))
        lines.append(f"{atom}: " + (", ".join(ws) if ws else "(nowhere)"))
    return "\n".join(lines)


def model_to_latex(m: KripkeModel) -> str:
    def block(ws):
        return r"\{" + ", ".join(sorted(map(str, ws))) + r"\}"
    rows = [r"W &= " + block(m.worlds)]
    for agent in sorted(m.partitions):
        rows.append(rf"W/{{\sim_{{{agent}}}}} &= \{{" + ", ".join(
            block(b) for b in sorted(m.partitions[agent], key=lambda b: sorted(map(str, b)))) + r"\}")
    for atom in sorted(m.valuation):
        rows.append(rf"V({atom}) &= " + block(m.valuation[atom]))
    return "\\begin{align*}\n" + " \\\\\n".join(rows) + "\n\\end{align*}"


def model_to_json(m: KripkeModel) -> dict:
    """Model-file format, plus the names of the worlds in index order."""
    obj = m.to_json()
    obj["names"] = [str(w) for w in m.worlds]
    return obj


# -- prove -----------------------------------------------------------------------

def cmd_prove(args, out: TextIO) -> int:
    text = args.formula
    if "=>" in text:
        root = parse_sequent(text, args.agents)
    else:
        root = Sequent(suc=[Labelled("x0", parse(text, args.agents))])
    result = prove(root, _budget(args))
    if isinstance(result, BudgetExhausted):
        print(f"budget exhausted: {result.reason}", file=out)
        return EXIT_ERROR
    print(result.verdict, file=out)
    if isinstance(result, Proved):
        if args.emit:
            _emit(args, export(result.derivation, args.emit), out)
        return EXIT_OK
    m = result.countermodel
    if m is None:
        print("no verified countermodel could be read off the saturated branch", file=out)
    elif args.emit == "json":
        _emit(args, json.dumps(model_to_json(m), indent=1), out)
    elif args.emit == "latex":
        _emit(args, model_to_latex(m), out)
    else:
        _emit(args, "countermodel:\n" + describe_model(m), out)
    return EXIT_NO


def _emit(args, text: str, out: TextIO) -> None:
    """Print ``text``, or write it to the ``-o`` file."""
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text, file=out)


def cmd_translate(args, out: TextIO) -> int:
    print(render(translate(parse(args.formula, args.agents))), file=out)
    return EXIT_OK


def cmd_check(args, out: TextIO) -> int:
    try:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    try:
        d = from_json(text)
    except (DerivationFormatError, ParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if check_derivation(d):
        print("valid", file=out)
        return EXIT_OK
    print("invalid", file=out)
    return EXIT_NO


def _world(m: KripkeModel, text: str):
    for w in m.worlds:
        if str(w) == text:
            return w
    raise ModelError(f"world {text!r} is not in the model")


def cmd_modelcheck(args, out: TextIO) -> int:
    try:
        with open(args.model, encoding="utf-8") as fh:
            m = KripkeModel.from_json(json.load(fh))
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    value = eval_formula(m, _world(m, args.world), parse(args.formula, args.agents))
    print("true" if value else "false", file=out)
    return EXIT_OK if value else EXIT_NO


# -- fuzz ------------------------------------------------------------------------

Prover = Callable[..., ProofResult]


def run_fuzz(n: int, seed: int, depth: int, agents: Sequence[str] = ("a", "b"),
             atoms: Sequence[str] = ("p", "q"), oracle_worlds: int = 3,
             budget: SearchBudget = DEFAULT_BUDGET, prover: Prover = prove_formula,
             out: TextIO = sys.stdout) -> int:
    """Differential test of prover, oracle and translation; returns the violation count.

    Each formula is checked for soundness against the bounded oracle,
    verdict agreement with its translation, semantic agreement with its
    translation, and for running out of budget.  ``prover`` is injectable so
    the harness itself can be tested against a broken prover.
    """
    rng = random.Random(seed)
    tally = {"proved": 0, "refuted": 0, "budget": 0}
    violations = 0

    def report(kind, i, f, detail=""):
        nonlocal violations
        violations += 1
        print(f"VIOLATION {kind} #{i}: {render(f)}{detail}", file=out)

    for i in range(n):
        f = random_formula(rng, depth, agents, atoms)
        t = translate(f)
        r, rt = prover(f, budget), prover(t, budget)
        tally[r.verdict] += 1
        if "budget" in (r.verdict, rt.verdict):
            report("budget", i, f)
            continue
        if isinstance(r, Proved) and brute_force_check(f, oracle_worlds, agents, atoms):
            report("unsound", i, f)
        if r.verdict != rt.verdict:
            report("bridge", i, f, f" ({r.verdict} vs {rt.verdict} for translation)")
        if equivalent_within(f, t, oracle_worlds, agents) is not None:
            report("translation", i, f)
    print(f"formulas: {n}  seed: {seed}  depth: {depth}  oracle worlds: {oracle_worlds}", file=out)
    print(f"proved: {tally['proved']}  refuted: {tally['refuted']}  budget: {tally['budget']}", file=out)
    print(f"violations: {violations}", file=out)
    return violations


def cmd_fuzz(args, out: TextIO) -> int:
    agents = args.agents or ["a", "b"]
    bad = run_fuzz(args.n, args.seed, args.depth, agents, oracle_worlds=args.oracle_worlds,
                   budget=_budget(args), out=out)
    return EXIT_OK if bad == 0 else EXIT_NO


# -- wiring ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="palseq", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, search=False):
        sp.add_argument("--agents", type=_agents, default=None,
                        help="comma-separated agents (default: those in the input)")
        if search:
            sp.add_argument("--budget-ms", type=int, default=int(DEFAULT_BUDGET.time_limit * 1000))
            sp.add_argument("--max-labels", type=int, default=DEFAULT_BUDGET.max_labels)
            sp.add_argument("--max-depth", type=int, default=DEFAULT_BUDGET.max_branch_depth,
                            help="maximum branch depth of the search")

    sp = sub.add_parser("prove", help="decide a formula or a sequent 'x: ... => y: ...'")
    sp.add_argument("formula")
    sp.add_argument("--emit", choices=("text", "latex", "json"), default=None)
    sp.add_argument("-o", "--output", default=None, help="write the emitted proof or model here")
    common(sp, search=True)
    sp.set_defaults(run=cmd_prove)

    sp = sub.add_parser("translate", help="print the announcement-free translation")
    sp.add_argument("formula")
    common(sp)
    sp.set_defaults(run=cmd_translate)

    sp = sub.add_parser("check", help="check a JSON derivation file")
    sp.add_argument("file")
    sp.set_defaults(run=cmd_check)

    sp = sub.add_parser("modelcheck", help="evaluate a formula at a world of a model file")
    sp.add_argument("model")
    sp.add_argument("world")
    sp.add_argument("formula")
    common(sp)
    sp.set_defaults(run=cmd_modelcheck)

    sp = sub.add_parser("fuzz", help="differential test on random formulas")
    sp.add_argument("-n", type=int, default=500)
    sp.add_argument("--seed", type=int, default=7)
    sp.add_argument("--depth", type=int, default=4)
    sp.add_argument("--oracle-worlds", type=int, default=3)
    common(sp, search=True)
    sp.set_defaults(run=cmd_fuzz)
    return p


def main(argv: Optional[Sequence[str]] = None, out: TextIO = sys.stdout) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    try:
        return args.run(args, out)
    except (ParseError, ModelError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
