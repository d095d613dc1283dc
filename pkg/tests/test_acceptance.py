"""Acceptance criteria, one test each; every test prints a PASS/FAIL line."""

import random
import time

import pytest

from dioq import descriptor as D
from dioq.decide import (
    InfinityAssignment, WitnessCertificate, decide_positive_existential, decide_q,
    decide_qplus, gen_manders_adleman, ma_nat_solvable, nat_oracle, verify_certificate,
)
from dioq.formula import And, Atom
from dioq.models import (
    EXT_INF, EXT_ZERO, INF, Base, Pred, Scaled, all_infinite, check_ext_axioms,
    check_qforall_axioms, ninfty_eval,
)
from dioq.rewrite import (
    EMPTY_SYSTEM, ReducedSystem, is_irreducible, is_t_reduced, norm_measure,
    normalize_randomly, one_step_reducts, rtn_normalize,
)
from dioq.terms import Add, Equation, Mul, Step, Succ, Var, Zero, bnum, parse_term, unum
from dioq.witness import enumerate_witnesses
from oracles import (
    canonical_naming, canonicity_check, random_descriptor, random_system, random_term,
    terms_up_to, unary,
)


@pytest.fixture
def report(capsys):
    def emit(n, title, ok, detail=""):
        line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {title}" + (f" ({detail})" if detail else "")
        with capsys.disabled():
            print("\n" + line)
        assert ok, line
    return emit


def test_criterion_1_sample_witness(report):
    start = time.perf_counter()
    y = Var(1)
    t = parse_term("x*y + x*S(S(S(y)))")
    v = decide_q(Equation(t, bnum(8)))
    L, R, ML = Step.ADD_LEFT, Step.ADD_RIGHT, Step.MUL_LEFT
    expected = {(0, ()): 8, (0, (L,)): 4, (0, (R,)): 4, (0, (L, ML)): 0, (0, (R, ML)): 0}
    ok = v.sat and isinstance(v.certificate, WitnessCertificate)
    ok = ok and v.certificate.witness.labels == expected
    ok = ok and list(v.certificate.system) == [(y, 4)]
    all_w = enumerate_witnesses([(t, 8)])
    ok = ok and len(all_w) == 1 and all_w[0].labels == expected
    elapsed = time.perf_counter() - start
    report(1, "witness for x*y + x*SSSy = 8 reproduced and unique", ok and elapsed < 1.0,
           f"{elapsed * 1000:.1f} ms, {len(all_w)} witness(es)")


def test_criterion_2_clashing_system(report):
    start = time.perf_counter()
    atoms = (Atom(parse_term("0*(x + S(S(0)))", ["x", "y"]), 5),
             Atom(parse_term("0*(y + 0*x)", ["x", "y"]), 7),
             Atom(parse_term("0*S(y)", ["x", "y"]), 4))
    whole = decide_positive_existential(And(atoms))
    singles = [decide_positive_existential(a) for a in atoms]
    elapsed = time.perf_counter() - start
    ok = not whole.sat and all(s.sat for s in singles)
    ok = ok and all(verify_certificate(s, a) for s, a in zip(singles, atoms))
    report(2, "three-equation conjunction UNSAT, each atom SAT", ok and elapsed < 5.0,
           f"{elapsed * 1000:.1f} ms")


def test_criterion_3_separation(report):
    bad = []
    for n in range(1, 9):
        eq = Equation(Mul(Zero, Var(0)), unum(n))
        vq, vp = decide_q(eq), decide_qplus(eq)
        if not (vq.sat and verify_certificate(vq, eq) and not vp.sat):
            bad.append(n)
    report(3, "0*x = n SAT in Q and UNSAT in Q+ for n = 1..8", not bad, f"failures {bad}")


def test_criterion_4_manders_adleman(report):
    start = time.perf_counter()
    bad = [(a, b) for a in range(1, 51) for b in range(1, 51)
           if decide_q(gen_manders_adleman(a, b)).sat != ma_nat_solvable(a, b)]
    elapsed = time.perf_counter() - start
    report(4, "Manders-Adleman bridge on 2500 instances", not bad and elapsed < 60,
           f"{elapsed:.2f} s, {len(bad)} disagreements")


def test_criterion_5_rewriting(report):
    rng = random.Random(2024)
    violations = []
    steps_checked = 0
    for i in range(1000):
        sys_ = random_system(rng, k_max=3, n_max=6)
        c = sys_.norm_constant
        t = random_term(rng, rng.randint(1, 25), 2)
        # walk one random reduction path, checking every reduct on the way
        u = t
        while True:
            reducts = one_step_reducts(u, sys_)
            if not reducts:
                break
            nu = norm_measure(u, c)
            for r in reducts:
                steps_checked += 1
                if norm_measure(r, c) >= nu:
                    violations.append(("norm", i, u, r))
            u = rng.choice(reducts)
        a = normalize_randomly(t, sys_, random.Random(rng.random()))
        b = normalize_randomly(t, sys_, random.Random(rng.random()))
        nf = rtn_normalize(t, sys_)
        if not (a is b is nf is u):
            violations.append(("confluence", i, t))
        if not is_t_reduced(nf, sys_):
            violations.append(("t-reduced", i, t))
    report(5, "norm decrease, confluence, T-reduced normal forms", not violations,
           f"{steps_checked} reducts checked, {len(violations)} violations")


def test_criterion_6_descriptors(report):
    rng = random.Random(6)
    bad = []
    for _ in range(1000):
        d = random_descriptor(rng, 5, 2, 3)
        if D.expanded_size(d) > 10**5:
            continue
        if D.expand(D.minimize(d)) is not D.expand(d):
            bad.append(("minimize", d))
    start = time.perf_counter()
    total, clashes = canonicity_check(max_size=6, max_index=3, nvars=2)
    canon_time = time.perf_counter() - start
    bad += [("canonicity", p) for p in clashes]
    for _ in range(500):
        t = random_term(rng, rng.randint(1, 20), 2)
        if D.expand(D.desc_of_reduced(t)) is not rtn_normalize(t):
            bad.append(("reduced", t))
    worst = 0.0
    for k in range(65):
        t = bnum(2**k)
        s = time.perf_counter()
        d = D.desc_of_reduced(t)
        el = time.perf_counter() - s
        worst = max(worst, el)
        if el >= 0.01 or D.size(d) > 8 * t.size or D.numeral_value(d) != 2**k:
            bad.append(("bnum", k, el, D.size(d)))
    report(6, "descriptor denotation, canonicity, reduced forms, polynomial size", not bad,
           f"{total} minimal descriptors in {canon_time:.1f} s, "
           f"slowest bnum {worst * 1000:.2f} ms, {len(bad)} violations")


def test_criterion_7_oracle_agreement(report):
    by = terms_up_to(9, 2)
    pool = [t for s in sorted(by) for t in by[s] if canonical_naming(t)]
    bad = []
    checked = 0
    for t in pool:
        for n in range(6):
            eq = Equation(t, unary(n))
            v = decide_q(eq)
            checked += 1
            sol = nat_oracle(eq, 10)
            val = all_infinite(t)
            inf_side = ninfty_eval(t, val) is INF and ninfty_eval(eq.rhs, val) is INF
            if v.sat:
                if not verify_certificate(v, eq):
                    bad.append(("certificate", t, n))
            else:
                if sol is not None or inf_side:
                    bad.append(("missed", t, n))
    report(7, "decide_q against the natural-number and all-infinity oracles", not bad,
           f"{len(pool)} terms, {checked} equations, {len(bad)} violations")


def _ext_sample(rng, sys_):
    r = rng.random()
    if r < 0.05:
        return EXT_INF
    if r < 0.1:
        return EXT_ZERO
    while True:
        t = rtn_normalize(random_term(rng, rng.randint(1, 8), 2), sys_)
        if not is_t_reduced(t, sys_):
            continue
        if r < 0.5:
            return Base(t)
        if not is_irreducible(t):
            continue
        if r < 0.75:
            return Pred(t, rng.randint(1, 4))
        x = rtn_normalize(random_term(rng, rng.randint(1, 6), 2), sys_)
        if D.numeral_value(D.desc_of_reduced(x)) is None and is_t_reduced(x, sys_):
            return Scaled(t, rng.randint(1, 4), x)


def test_criterion_8_models(report):
    rng = random.Random(8)
    reports = []
    for sys_ in (EMPTY_SYSTEM, ReducedSystem(((Var(1), 4),)),
                 ReducedSystem(((Var(0), 2), (Add(Var(1), Mul(Zero, Add(Var(0), Var(1)))), 3)))):
        samples = {unum(k) for k in range(3)}
        while len(samples) < 50:
            t = rtn_normalize(random_term(rng, rng.randint(1, 8), 2), sys_)
            samples.add(t)
        reports.append(check_qforall_axioms(sys_, sorted(samples, key=str), n_max=8))
        pairs = [(_ext_sample(rng, sys_), _ext_sample(rng, sys_)) for _ in range(200)]
        reports.append(check_ext_axioms(pairs, sys_))
    bad = [v for r in reports for v in r.violations]
    report(8, "axioms in the reduced-term model and its extension", not bad,
           f"{sum(r.checked for r in reports)} instances, {len(bad)} violations")


def test_criteria_support_infinity_route():
    eq = Equation(Add(Succ(Var(0)), Var(1)), Mul(Var(0), Var(1)))
    v = decide_q(eq)
    assert isinstance(v.certificate, InfinityAssignment)
