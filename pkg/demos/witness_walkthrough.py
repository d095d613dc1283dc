# Walk through one satisfiable equation end to end:
# black-hole reduction, witness search, the system E, and the term model.

from dioq import decide_q, blackhole_reduce, reduced_model_eval, parse_equation, render_term
from dioq.witness import (
    enumerate_witnesses, extract_reduced_system, build_model_valuation, witness_table,
)

eq = parse_equation("x*y + x*S(S(S(y))) = #8")
names = ["x", "y"]

# %% both sides at the all-infinity valuation
res = blackhole_reduce(eq)
print("reduction:", type(res).__name__, render_term(res.term, names), "=", res.n)

# %% decide, then look at the labels
v = decide_q(eq)
print(v.status)
w = v.certificate.witness
for row in witness_table(w, names):
    print("  %-26s %-3s %-18s %s" % row)

# nothing else labels this term: the brute force agrees
print("witnesses in total:", len(enumerate_witnesses(w.system)))

# %% the system E read off the labels
E = extract_reduced_system(w)
for t, n in E:
    print("E:  0 *", render_term(t, names), "=", n)

# %% evaluate the left side in the model of E
val = build_model_valuation(w, E)
print({names[i]: render_term(t, names) for i, t in val.items()})
out = reduced_model_eval(res.term, val, E)
print("value:", render_term(out, names))   # S^8(0)

# over the naturals there is no solution at all: 4y + 6 and 2y + 3 never hit 8
print(any(x * y + x * (y + 3) == 8 for x in range(9) for y in range(9)))
