# The Moore sentence: "p, but you don't know it" stops being true once it is said.
from palseq import KripkeModel, eval_formula, parse, prove_formula, restrict

# two worlds a cannot tell apart, p true only in the first
m = KripkeModel(("w1", "w2"), {"a": [{"w1", "w2"}]}, {"p": {"w1"}})

moore = parse("p & ~K_a p")
print("before:", eval_formula(m, "w1", moore))

after = restrict(m, moore)  # the announcement deletes w2
print("worlds left:", after.worlds)
print("after:", eval_formula(after, "w1", moore))
print("K_a p now:", eval_formula(after, "w1", parse("K_a p")))

# so [p & ~K_a p]~K_a p is not valid, and the prover finds the same model
r = prove_formula(parse("[p & ~K_a p]~K_a p"))
print(r.verdict)
print(r.countermodel)
