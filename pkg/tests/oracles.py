"""Independent reference implementations and generators used by the tests.

Nothing here calls the code under test except to build terms.
"""

from __future__ import annotations

import random

from dioq import descriptor as D
from dioq.rewrite import ReducedSystem, rtn_normalize
from dioq.terms import Add, Mul, Succ, Var, Zero, is_closed, peel_succ, succ_n


def ref_bnum(n):
    """Binary numeral straight from its recursive definition."""
    if n == 0:
        return Zero
    if n % 2 == 0:
        return Mul(Succ(Succ(Zero)), ref_bnum(n // 2))
    return Succ(ref_bnum(n - 1))


def ref_nat(t, env):
    """Naive recursive evaluator over the naturals."""
    if t is Zero:
        return 0
    if t.op == "var":
        return env[t.index]
    if t.op == "S":
        return ref_nat(t.left, env) + 1
    a, b = ref_nat(t.left, env), ref_nat(t.right, env)
    return a + b if t.op == "+" else a * b


def random_term(rng: random.Random, size: int, nvars: int = 2, closed_weight: float = 0.3):
    """A random term with exactly ``size`` nodes."""
    if size == 1:
        if nvars and rng.random() > closed_weight:
            return Var(rng.randrange(nvars))
        return Zero
    if size == 2 or rng.random() < 0.3:
        return Succ(random_term(rng, size - 1, nvars, closed_weight))
    left = rng.randint(1, size - 2)
    a = random_term(rng, left, nvars, closed_weight)
    b = random_term(rng, size - 1 - left, nvars, closed_weight)
    return Add(a, b) if rng.random() < 0.5 else Mul(a, b)


def random_irreducible(rng: random.Random, max_size: int = 8, nvars: int = 2):
    while True:
        t = rtn_normalize(random_term(rng, rng.randint(1, max_size), nvars))
        if t.op in ("var", "+", "*") and not is_closed(t):
            return t


def random_system(rng: random.Random, k_max: int = 3, n_max: int = 6, nvars: int = 2):
    """A random valid reduced system {0 * t_i = n_i} with k <= k_max."""
    while True:
        k = rng.randint(0, k_max)
        pairs = [(random_irreducible(rng, 7, nvars), rng.randint(0, n_max)) for _ in range(k)]
        sys_ = ReducedSystem(tuple(pairs))
        if not sys_.violations():
            return sys_


def random_descriptor(rng: random.Random, depth: int, nvars: int = 2, max_index: int = 3):
    if depth == 0 or rng.random() < 0.2:
        r = rng.randrange(nvars + 1)
        return D.D0 if r == nvars else D.DVar(r)
    kind = rng.choice("SAB+*")
    sub = lambda: random_descriptor(rng, depth - 1, nvars, max_index)  # noqa: E731
    if kind == "S":
        return D.Sn(rng.randint(1, max_index), sub())
    if kind == "A":
        return D.Anm(rng.randint(0, max_index), rng.randint(2, max_index), sub())
    if kind == "B":
        return D.Bnm(rng.randint(0, max_index), rng.randint(1, max_index), sub(), sub())
    return (D.DAdd if kind == "+" else D.DMul)(sub(), sub())


# -- denotation fingerprints --------------------------------------------------
#
# A 64-bit structural hash of the term a descriptor denotes, computed from
# the children's fingerprints without building the term.  Equal denotations
# always get equal fingerprints; a collision between different descriptors
# is confirmed or refuted by full expansion.

FP_ZERO = hash(("0",))


def fp_var(i):
    return hash(("v", i))


def fp_succ(a, n=1):
    for _ in range(n):
        a = hash((1, a))
    return a


def fp_add(a, b):
    return hash((2, a, b))


def fp_mul(a, b):
    return hash((3, a, b))


def fp_anm(n, m, u):
    acc = fp_add(FP_ZERO, u)
    for _ in range(m - 1):
        acc = fp_add(fp_succ(acc, n), u)
    return acc


def fp_bnm(n, m, t, u):
    acc = fp_add(fp_mul(fp_succ(u, n), t), u)
    for _ in range(m - 1):
        acc = fp_add(fp_succ(acc, n), u)
    return acc


def fingerprint(d):
    if isinstance(d, D.DZero):
        return FP_ZERO
    if isinstance(d, D.DVar):
        return fp_var(d.index)
    if isinstance(d, D.DAdd):
        return fp_add(fingerprint(d.left), fingerprint(d.right))
    if isinstance(d, D.DMul):
        return fp_mul(fingerprint(d.left), fingerprint(d.right))
    if isinstance(d, D.Sn):
        return fp_succ(fingerprint(d.d), d.n)
    if isinstance(d, D.Anm):
        return fp_anm(d.n, d.m, fingerprint(d.u))
    return fp_bnm(d.n, d.m, fingerprint(d.t), fingerprint(d.u))


def term_fingerprint(t):
    k, core = peel_succ(t)
    if core is Zero:
        base = FP_ZERO
    elif core.op == "var":
        base = fp_var(core.index)
    elif core.op == "+":
        base = fp_add(term_fingerprint(core.left), term_fingerprint(core.right))
    else:
        base = fp_mul(term_fingerprint(core.left), term_fingerprint(core.right))
    return fp_succ(base, k)


def canonicity_check(max_size=6, max_index=3, nvars=2):
    """Enumerate every minimal descriptor up to ``max_size`` symbols and
    report pairs of distinct ones with the same denotation.

    Returns (number of minimal descriptors, list of offending pairs).
    Descriptors of the largest size are never stored, only fingerprinted.
    """
    unary = ([("S", n, None) for n in range(1, max_index + 1)]
             + [("A", n, m) for n in range(0, max_index + 1) for m in range(2, max_index + 1)])
    binary = ([("+", None, None), ("*", None, None)]
              + [("B", n, m) for n in range(0, max_index + 1) for m in range(1, max_index + 1)])
    by_size = {1: [(D.D0, FP_ZERO)] + [(D.DVar(i), fp_var(i)) for i in range(nvars)]}
    seen = {}
    clashes = []
    total = 0

    def record(d, f):
        nonlocal total
        total += 1
        other = seen.get(f)
        if other is None:
            seen[f] = d
        elif other != d and D.expand(other) is D.expand(d):
            clashes.append((other, d))

    for d, f in by_size[1]:
        record(d, f)
    for s in range(2, max_size + 1):
        keep = s < max_size
        out = []
        for sym, n, m in unary:
            for c, fc in by_size[s - 1]:
                if sym == "S":
                    if isinstance(c, D.Sn):
                        continue
                    d, f = D.Sn(n, c), fp_succ(fc, n)
                else:
                    d, f = D.Anm(n, m, c), fp_anm(n, m, fc)
                record(d, f)
                if keep:
                    out.append((d, f))
        for i in range(1, s - 1):
            for a, fa in by_size[i]:
                for b, fb in by_size[s - 1 - i]:
                    for sym, n, m in binary:
                        if sym == "+":
                            d = D.DAdd(a, b)
                            if D.rewrite_root(d) is not d:
                                continue
                            f = fp_add(fa, fb)
                        elif sym == "*":
                            d, f = D.DMul(a, b), fp_mul(fa, fb)
                        else:
                            d, f = D.Bnm(n, m, a, b), fp_bnm(n, m, fa, fb)
                        record(d, f)
                        if keep:
                            out.append((d, f))
        if keep:
            by_size[s] = out
    return total, clashes


# -- exhaustive term enumeration ----------------------------------------------


def terms_up_to(max_size, nvars=2):
    """All terms with at most ``max_size`` nodes over variables 0..nvars-1,
    grouped by size."""
    by = {1: [Zero] + [Var(i) for i in range(nvars)]}
    for s in range(2, max_size + 1):
        out = [Succ(t) for t in by[s - 1]]
        for i in range(1, s - 1):
            for a in by[i]:
                for b in by[s - 1 - i]:
                    out.append(Add(a, b))
                    out.append(Mul(a, b))
        by[s] = out
    return by


def first_occurrence_order(t):
    """Variable indices in order of first (pre-order) occurrence."""
    out = []
    stack = [t]
    while stack:
        u = stack.pop()
        if u.op == "var":
            if u.index not in out:
                out.append(u.index)
        elif u.op == "S":
            stack.append(u.left)
        elif u.op in ("+", "*"):
            stack.append(u.right)
            stack.append(u.left)
    return out


def canonical_naming(t):
    """True if variables first occur in index order 0, 1, ... (every term is
    a renaming of exactly one such term)."""
    order = first_occurrence_order(t)
    return order == list(range(len(order)))


def unary(n):
    return succ_n(Zero, n)
