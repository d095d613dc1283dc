import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dioq.errors import RewriteBudgetExceeded
from dioq.models import reduced_model_eval
from dioq.rewrite import (
    EMPTY_SYSTEM, ReducedSystem, is_irreducible, is_normal, is_t_reduced, norm_measure,
    normalize_counting, normalize_randomly, one_step_reducts, rtn_normalize,
)
from dioq.terms import (
    Add, Mul, Succ, Var, Zero, bnum, eval_nat, peel_succ, replace_at, subterm_occurrences,
    unum,
)
from oracles import random_system, random_term, ref_nat
from strategies import terms

x, y = Var(0), Var(1)


def test_normality_predicates():
    assert not is_normal(Add(x, Zero))
    assert is_normal(Mul(Zero, y)) and is_irreducible(Mul(Zero, y))
    assert is_normal(Succ(y)) and not is_irreducible(Succ(y))
    assert not is_irreducible(Zero)


def test_t_reduced_forbids_system_products():
    sys_ = ReducedSystem(((y, 4),))
    assert is_t_reduced(Mul(Zero, x), sys_)
    assert not is_t_reduced(Add(x, Mul(Zero, y)), sys_)
    assert is_t_reduced(Add(x, Mul(Zero, y)))


def test_one_step_reducts_examples():
    assert one_step_reducts(Add(Zero, Succ(Zero))) == [Succ(Add(Zero, Zero))]
    assert one_step_reducts(Mul(Zero, y), ReducedSystem(((y, 4),))) == [unum(4)]
    assert one_step_reducts(Mul(x, Succ(Zero))) == [Add(Mul(x, Zero), x)]
    assert one_step_reducts(Mul(Zero, y)) == []


def test_closed_rule_matches_verbatim_only():
    sys_ = ReducedSystem(((Add(x, y), 2),))
    assert one_step_reducts(Mul(Zero, Add(x, y)), sys_) == [unum(2)]
    assert one_step_reducts(Mul(Zero, Add(y, x)), sys_) == []


def test_normalize_examples():
    assert rtn_normalize(bnum(5)) is unum(5)
    assert rtn_normalize(Mul(x, unum(2))) is Add(Add(Zero, x), x)
    assert rtn_normalize(Mul(Zero, Succ(Succ(x)))) is Mul(Zero, x)
    # zero times a shifted sum collapses onto zero times the sum
    assert rtn_normalize(Mul(Zero, Add(x, unum(2)))) is Mul(Zero, x)


def test_normalize_budget_is_an_error():
    with pytest.raises(RewriteBudgetExceeded):
        rtn_normalize(bnum(2**40), max_steps=1000)
    t, steps = normalize_counting(bnum(5))
    assert t is unum(5) and steps > 0


def test_norm_examples():
    assert norm_measure(Zero, 2) == 2
    assert norm_measure(Add(Zero, Succ(Zero)), 2) == 12
    for n in range(7):
        c = 2 + n
        assert norm_measure(unum(n), c) == 3 * n + c < c * c <= norm_measure(Mul(Zero, x), c)


def test_system_invariants():
    with pytest.raises(ValueError):
        ReducedSystem.checked([(Succ(x), 1)])
    with pytest.raises(ValueError):
        ReducedSystem.checked([(x, 1), (x, 2)])
    with pytest.raises(ValueError):
        ReducedSystem.checked([(x, 1), (Add(y, Mul(Zero, x)), 2)])
    assert ReducedSystem.checked([(x, 1), (Add(y, x), 2)]).norm_constant == 4


@settings(max_examples=200)
@given(terms(10))
def test_reducts_decrease_norm(t):
    for u in one_step_reducts(t):
        assert norm_measure(u, 2) < norm_measure(t, 2)


@settings(max_examples=200)
@given(terms(10))
def test_normal_forms_are_fixed_points_and_decompose(t):
    nf = rtn_normalize(t)
    assert one_step_reducts(nf) == []
    assert is_t_reduced(nf)
    k, core = peel_succ(nf)
    assert core is Zero or is_irreducible(core)


@settings(max_examples=200)
@given(terms(10), st.lists(st.integers(0, 4), min_size=3, max_size=3))
def test_steps_preserve_natural_value(t, vals):
    env = dict(enumerate(vals))
    v = ref_nat(t, env)
    for u in one_step_reducts(t):
        assert eval_nat(u, env) == v


def test_normal_form_matches_model_and_random_strategies():
    rng = random.Random(7)
    for _ in range(150):
        sys_ = random_system(rng)
        t = random_term(rng, rng.randint(1, 12), 2)
        nf = rtn_normalize(t, sys_)
        assert reduced_model_eval(t, None, sys_) is nf
        assert normalize_randomly(t, sys_, random.Random(rng.random())) is nf
        assert is_t_reduced(nf, sys_)


def test_steps_preserve_model_value():
    rng = random.Random(11)
    for _ in range(100):
        sys_ = random_system(rng)
        t = random_term(rng, rng.randint(1, 10), 2)
        v = reduced_model_eval(t, None, sys_)
        c = sys_.norm_constant
        for u in one_step_reducts(t, sys_):
            assert reduced_model_eval(u, None, sys_) is v
            assert norm_measure(u, c) < norm_measure(t, c)


def test_norm_is_strictly_monotone_in_contexts():
    rng = random.Random(3)
    for _ in range(300):
        c = rng.randint(2, 8)
        t = random_term(rng, rng.randint(1, 10), 2)
        a = random_term(rng, rng.randint(1, 6), 2)
        b = random_term(rng, rng.randint(1, 6), 2)
        if norm_measure(a, c) == norm_measure(b, c):
            continue
        if norm_measure(a, c) > norm_measure(b, c):
            a, b = b, a
        path, _ = rng.choice(subterm_occurrences(t))
        assert norm_measure(replace_at(t, path, a), c) < norm_measure(replace_at(t, path, b), c)


def test_empty_system_defaults():
    assert EMPTY_SYSTEM.norm_constant == 2 and len(EMPTY_SYSTEM) == 0
