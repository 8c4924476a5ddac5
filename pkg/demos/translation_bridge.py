# Announcements can be translated away; proofs follow the translation both ways.
from palseq import (height, lift_to_pal, lower_to_el, parse, parse_sequent, prove,
                    prove_formula, render, rules_used, translate, translate_sequent)
from palseq.calculus import REDUCTION_RULES

f = parse("[p][q]r <-> [p & [p]q]r")
print(render(translate(parse("[p]K_a q"))))
print(render(translate(parse("[p][q]r"))))

d = prove_formula(f).derivation
low = lower_to_el(d)  # same proof shape, no announcement rules left
print("heights:", height(d), "->", height(low))
print("announcement rules left:", rules_used(low) & set(REDUCTION_RULES))

# the other direction: prove the translation, rebuild a proof of the original
target = parse_sequent("x0: [p]K_a q => x0: p -> K_a [p]q")
el = prove(translate_sequent(target)).derivation
up = lift_to_pal(el, target)
print(up.root, "via", up.rule)
