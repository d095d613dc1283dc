import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dioq.models import (
    EXT_INF, EXT_ZERO, INF, Base, Inf, Pred, Scaled, Theory, check_ext_axioms,
    check_qforall_axioms, constant_fold, decompose_prod, decompose_sum, ext_model_ops,
    ext_pred, ninfty_eval, reduced_model_eval,
)
from dioq.rewrite import ReducedSystem, is_t_reduced, rtn_normalize
from dioq.terms import Add, Mul, Succ, Var, Zero, bnum, eval_nat, parse_term, unum
from oracles import random_system, random_term
from strategies import terms

x, y, a = Var(0), Var(1), Var(2)


def test_blackhole_zero_times_infinity():
    t = Mul(Zero, x)
    assert ninfty_eval(t, {0: INF}, Theory.Q) is INF
    assert ninfty_eval(t, {0: INF}, Theory.QPLUS) == 0
    assert ninfty_eval(Mul(x, Zero), {0: INF}) == 0
    assert ninfty_eval(parse_term("x*y + x*S(S(S(y)))"), {0: INF, 1: INF}) is INF


def test_blackhole_unbound_variable():
    with pytest.raises(KeyError):
        ninfty_eval(x, {})


def test_constant_fold():
    assert constant_fold(bnum(13)) == 13
    assert constant_fold(Mul(Add(x, y), Zero)) == 0
    assert constant_fold(x) is None
    assert constant_fold(bnum(2**200)) == 2**200


@given(terms(10), st.lists(st.integers(0, 6), min_size=3, max_size=3))
def test_blackhole_agrees_with_naturals_on_finite_inputs(t, vals):
    env = dict(enumerate(vals))
    assert ninfty_eval(t, env) == eval_nat(t, env)
    assert ninfty_eval(t, env, Theory.QPLUS) == eval_nat(t, env)


def test_reduced_model_examples():
    sys_ = ReducedSystem(((y, 4),))
    assert reduced_model_eval(Mul(Zero, y), None, sys_) is unum(4)
    assert reduced_model_eval(Mul(x, unum(2))) is Add(Add(Zero, x), x)
    assert reduced_model_eval(Mul(x, y), {0: Zero, 1: y}, sys_) is unum(4)


@given(terms(10))
def test_reduced_model_fixes_reduced_terms(t):
    nf = rtn_normalize(t)
    assert reduced_model_eval(nf) is nf


def test_decompositions():
    assert decompose_sum(2) == [(0, 2), (1, 1), (2, 0)]
    assert decompose_prod(4) == [(0, None), (1, 4), (2, 2), (4, 1)]
    assert decompose_prod(5) == [(0, None), (1, 5), (5, 1)]
    assert decompose_prod(0) == [(0, None), (None, 0)]
    for n in range(1, 60):
        pairs = decompose_prod(n)[1:]
        assert [k for k, _ in pairs] == sorted({k for k in range(1, n + 1) if n % k == 0})
        assert all(k * m == n for k, m in pairs)


def test_qforall_axioms_small():
    rep = check_qforall_axioms(ReducedSystem(()), [Zero, Succ(Zero), x], n_max=3)
    assert rep.ok and rep.checked > 0


def test_qforall_rejects_unreduced_samples():
    with pytest.raises(ValueError):
        check_qforall_axioms(ReducedSystem(((y, 4),)), [Mul(Zero, y)])


def test_qforall_detects_a_broken_model(monkeypatch):
    import dioq.models as M
    monkeypatch.setattr(M, "m_add", lambda p, q: p)
    rep = check_qforall_axioms(ReducedSystem(()), [Zero, Succ(Zero), x], n_max=3)
    assert not rep.ok


def test_extension_examples():
    assert ext_model_ops(Pred(x, 1), None, "S") == Base(x)
    assert ext_model_ops(Base(x), Pred(y, 2), "add") == Pred(Add(x, y), 2)
    assert ext_model_ops(Base(x), Pred(a, 3), "mul") == Scaled(a, 3, x)
    assert ext_pred(Base(x)) == Pred(x, 1)
    assert ext_pred(EXT_ZERO) is None
    with pytest.raises(ValueError):
        ext_model_ops(Pred(Succ(x), 1), None, "S")


def test_extension_axioms_on_samples():
    rng = random.Random(5)
    pool = [EXT_ZERO, EXT_INF, Base(unum(3)), Base(x), Base(Succ(Add(x, y))), Pred(x, 2),
            Pred(Add(x, y), 1), Scaled(x, 1, y), Scaled(Add(x, y), 2, Succ(x)), Scaled(y, 3, x)]
    pairs = [(p, q) for p in pool for q in pool]
    rep = check_ext_axioms(pairs)
    assert rep.ok, rep.violations[:5]
    assert isinstance(ext_model_ops(EXT_INF, Base(x), "add"), Inf)
    assert rng is not None


def test_soundness_of_reduction_in_the_model():
    rng = random.Random(2)
    for _ in range(100):
        sys_ = random_system(rng)
        t = random_term(rng, rng.randint(1, 10), 2)
        v = reduced_model_eval(t, None, sys_)
        assert is_t_reduced(v, sys_)
        assert v is rtn_normalize(t, sys_)
