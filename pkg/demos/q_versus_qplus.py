# Where Q and Q+ part ways: 0*x is not provably 0 in Q.

from dioq import (
    Theory, decide, decide_positive_existential, parse_equation, parse_formula,
    verify_certificate, render_term,
)

for n in range(1, 5):
    eq = parse_equation(f"0*x = #{n}")
    q, qp = decide(eq, Theory.Q), decide(eq, Theory.QPLUS)
    print(f"0*x = {n}:  Q {q.status:5}  Q+ {qp.status}")

# the witness for Q puts a nonstandard element behind x
v = decide(parse_equation("0*x = #5"))
for t, n in v.certificate.system:
    print("  model where 0 *", render_term(t, ["x"]), "=", n)

# %% joint systems: each equation alone is fine, together they clash
atoms = ["0*(x + S(S(0))) = #5", "0*(y + 0*x) = #7", "0*S(y) = #4"]
for a in atoms:
    print(a, "->", decide_positive_existential(parse_formula(a, ["x", "y"])).status)
both = parse_formula(" & ".join(atoms), ["x", "y"])
print("all three ->", decide_positive_existential(both).status)

# %% disjunctions pick the first disjunct that works
f = parse_formula("S(0) = #0 | 0*x = #5")
v = decide_positive_existential(f)
print(v.status, "via disjunct", v.stats["disjunct"], verify_certificate(v, f))
print("in Q+:", decide_positive_existential(f, Theory.QPLUS).status)
