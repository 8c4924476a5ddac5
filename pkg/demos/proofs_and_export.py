# Proving S5 and reduction axioms, then looking at the proofs.
from palseq import check_derivation, export, from_json, height, parse, prove_formula

for text in ["K_a p -> p", "K_a p -> K_a K_a p", "~K_a p -> K_a ~K_a p",
             "[p]K_a q <-> (p -> K_a [p]q)"]:
    r = prove_formula(parse(text))
    print(f"{text:32} {r.verdict:8} height {height(r.derivation)}")

d = prove_formula(parse("~K_a p -> K_a ~K_a p")).derivation
print(export(d))             # indented text, one sequent per line

doc = export(d, "latex")     # bussproofs document
print(doc.splitlines()[0], "...", len(doc), "chars")

# JSON goes both ways and the result is checked again on the way in
back = from_json(export(d, "json"))
print("same tree:", back == d, "checks:", check_derivation(back))
