# Binary numerals stay small under descriptors, while the unary normal form
# would be astronomically large.

import time

import numpy as np

from dioq import (
    bnum, desc_of_reduced, render_descriptor, decide_q, gen_manders_adleman, ma_nat_solvable,
)
from dioq import descriptor as D
from dioq.errors import SearchBudgetExceeded
from dioq.terms import Mul, Var

for k in (8, 32, 64, 128):
    t = bnum(2**k + 1)
    d = desc_of_reduced(t)
    print(f"2^{k}+1: term size {t.size}, descriptor {render_descriptor(d)[:30]} size {D.size(d)}")

# x times a large numeral reduces to a repeated sum, written as one A-block
x = Var(0)
print(render_descriptor(desc_of_reduced(Mul(x, bnum(10**12))), ["x"]))

# %% x*x + a*y = b is satisfiable in Q exactly when it is solvable in N
t0 = time.perf_counter()
agree = np.array([[decide_q(gen_manders_adleman(a, b)).sat == ma_nat_solvable(a, b)
                   for b in range(1, 31)] for a in range(1, 31)])
print("agreement:", agree.all(), f"({agree.size} instances, {time.perf_counter() - t0:.2f} s)")

sat = np.array([[ma_nat_solvable(a, b) for b in range(1, 31)] for a in range(1, 31)])
print("fraction solvable:", sat.mean().round(3))

# one big instance: b far too large to write in unary
eq = gen_manders_adleman(7, 10**9 + 2)
v = decide_q(eq)
print(v.status, ma_nat_solvable(7, 10**9 + 2), v.stats)

# the search is exponential in the worst case; running out of budget is an
# error of its own, never an "unsat"
try:
    decide_q(gen_manders_adleman(7, 10**6 + 2), budget=10**4)
except SearchBudgetExceeded as exc:
    print("gave up:", exc)
