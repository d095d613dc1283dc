"""Executable models of weak arithmetic.

* The black-hole model: naturals plus an absorbing element INF, in the
  plain-Q variant and the variant where 0*INF = 0.
* The term model M whose elements are T-reduced terms for a reduced system.
* The extension of M by INF, predecessor elements <a,k> and scaled
  elements <a,k,x>, which turns M into a model of all of Q.  Only sampled
  axiom checks are offered for it.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union

from .errors import ExpansionBudgetExceeded
from .rewrite import EMPTY_SYSTEM, ReducedSystem, is_irreducible, is_t_reduced
from .terms import (
    ADD_OP, SUCC_OP, VAR_OP, ZERO_OP, Add, Mul, Succ, Term, Var, Zero,
    numeral_value, peel_succ, succ_n, unum, variables,
)


class Theory(str, enum.Enum):
    Q = "q"
    QPLUS = "qplus"


# -- black-hole model ---------------------------------------------------------


class _Infinity:
    __slots__ = ()

    def __repr__(self):
        return "INF"

    def __reduce__(self):
        return (_infinity, ())


def _infinity():
    return INF


INF = _Infinity()
ExtNat = Union[int, _Infinity]


def bh_mul(a: ExtNat, b: ExtNat, theory: Theory = Theory.Q) -> ExtNat:
    if b is INF:
        if theory is Theory.QPLUS and a == 0:
            return 0
        return INF
    if a is INF:
        return 0 if b == 0 else INF
    return a * b


def ninfty_eval(t: Term, valuation: Mapping[int, ExtNat],
                theory: Theory = Theory.Q) -> ExtNat:
    """Value of ``t`` in the black-hole model; finite values are exact ints."""
    theory = Theory(theory)
    memo: dict[Term, ExtNat] = {}

    def ev(u):
        k, u = peel_succ(u)
        if u.op is ZERO_OP:
            v = 0
        elif u.op is VAR_OP:
            try:
                v = valuation[u.index]
            except KeyError:
                raise KeyError(f"unbound variable index {u.index}") from None
        else:
            v = memo.get(u)
            if v is None:
                a, b = ev(u.left), ev(u.right)
                if u.op is ADD_OP:
                    v = INF if a is INF or b is INF else a + b
                else:
                    v = bh_mul(a, b, theory)
                memo[u] = v
        if v is INF:
            return INF
        return v + k

    return ev(t)


def all_infinite(t: Term) -> dict[int, _Infinity]:
    return {i: INF for i in variables(t)}


def constant_fold(t: Term, theory: Theory = Theory.Q) -> int | None:
    """n if ``t`` evaluates to n at the all-INF valuation (then the theory
    proves t = n identically), otherwise None."""
    v = ninfty_eval(t, all_infinite(t), theory)
    return None if v is INF else v


# -- the T-reduced term model M -----------------------------------------------


def m_add(a: Term, b: Term) -> Term:
    """t + S^n 0 = S^n t;  t + S^n u = S^n(t + u) for irreducible u."""
    n, u = peel_succ(b)
    return succ_n(a if u is Zero else Add(a, u), n)


def m_mul(a: Term, b: Term, sys: ReducedSystem = EMPTY_SYSTEM) -> Term:
    n, t = peel_succ(a)
    m, u = peel_succ(b)
    if t is not Zero:
        # S^n t * S^m w with m nested blocks S^n( . + t)
        acc = Zero if u is Zero else Mul(a, u)
        if u is Zero and m > 0:
            acc = succ_n(Add(Zero, t), n)
            m -= 1
        for _ in range(m):
            acc = succ_n(Add(acc, t), n)
        return acc
    if u is Zero:
        return succ_n(Zero, n * m)
    if n > 0:
        return succ_n(Mul(a, u), n * m)
    k = sys.value_of(u)
    if k is not None:
        return unum(k)
    return Mul(Zero, u)


def reduced_model_eval(t: Term, valuation: Mapping[int, Term] | None = None,
                       sys: ReducedSystem = EMPTY_SYSTEM,
                       max_nodes: int = 10**7) -> Term:
    """Value of ``t`` in M.  ``valuation=None`` is the identity x -> x, in
    which case the result is the reduced form of ``t`` relative to ``sys``."""
    memo: dict[Term, Term] = {}

    def check(r):
        if r.size > max_nodes:
            raise ExpansionBudgetExceeded(f"model value exceeded {max_nodes} nodes")
        return r

    def ev(u):
        k, u = peel_succ(u)
        if u.op is ZERO_OP:
            v = Zero
        elif u.op is VAR_OP:
            v = u if valuation is None else valuation[u.index]
        else:
            v = memo.get(u)
            if v is None:
                a, b = ev(u.left), ev(u.right)
                v = check(m_add(a, b) if u.op is ADD_OP else m_mul(a, b, sys))
                memo[u] = v
        return check(succ_n(v, k))

    return ev(t)


# -- decompositions forced by the universal axioms ----------------------------


def decompose_sum(n: int) -> list[tuple[int, int]]:
    """All (k, m) with k + m = n, ascending in k."""
    return [(k, n - k) for k in range(n + 1)]


def decompose_prod(n: int) -> list[tuple[int | None, int | None]]:
    """Branches of x*y = n.

    ``None`` marks an unconstrained side.  For n > 0 the list is the zero
    branch (0, None) followed by all factor pairs ascending in k; for n = 0
    it is [(0, None), (None, 0)].
    """
    if n == 0:
        return [(0, None), (None, 0)]
    small = [k for k in range(1, math.isqrt(n) + 1) if n % k == 0]
    ks = sorted(set(small) | {n // k for k in small})
    return [(0, None)] + [(k, n // k) for k in ks]


@dataclass
class AxiomReport:
    checked: int = 0
    violations: list[tuple[str, tuple]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def fail(self, axiom, *instance):
        self.violations.append((axiom, instance))


def check_qforall_axioms(sys: ReducedSystem, samples: Sequence[Term],
                         n_max: int = 8) -> AxiomReport:
    """Check Q1, Q2, Q4-Q7 and the decomposition schemata up to ``n_max``
    in M on every pair of sample elements."""
    report = AxiomReport()
    for x in samples:
        if not is_t_reduced(x, sys):
            raise ValueError(f"sample {x} is not T-reduced")
    for x in samples:
        report.checked += 1
        if Succ(x) is Zero:
            report.fail("Q1", x)
        if m_add(x, Zero) is not x:
            report.fail("Q4", x)
        if m_mul(x, Zero, sys) is not Zero:
            report.fail("Q6", x)
        for y in samples:
            report.checked += 1
            if Succ(x) is Succ(y) and x is not y:
                report.fail("Q2", x, y)
            if m_add(x, Succ(y)) is not Succ(m_add(x, y)):
                report.fail("Q5", x, y)
            if m_mul(x, Succ(y), sys) is not m_add(m_mul(x, y, sys), x):
                report.fail("Q7", x, y)
            s = numeral_value(m_add(x, y))
            if s is not None and s <= n_max:
                yv = numeral_value(y)
                if yv is None or yv > s:
                    report.fail(f"Q8_{s}", x, y)
            p = numeral_value(m_mul(x, y, sys))
            if p is not None and p <= n_max and x is not Zero:
                yv = numeral_value(y)
                if yv is None or yv > p:
                    report.fail(f"Q9_{p}", x, y)
    return report


# -- the extension of M to a model of Q ---------------------------------------


@dataclass(frozen=True)
class Base:
    """An element of M (a T-reduced term)."""
    m: Term


@dataclass(frozen=True)
class Inf:
    pass


@dataclass(frozen=True)
class Pred:
    """<a,k>, read as a - k for a nonzero element a of M without predecessor."""
    a: Term
    k: int


@dataclass(frozen=True)
class Scaled:
    """<a,k,x>, read as x * (a - k) for nonstandard x in M."""
    a: Term
    k: int
    x: Term


ExtElem = Union[Base, Inf, Pred, Scaled]
EXT_INF = Inf()
EXT_ZERO = Base(Zero)


def in_a(t: Term) -> bool:
    """Nonzero and without predecessor in M, i.e. irreducible."""
    return is_irreducible(t)


def check_ext_elem(e: ExtElem, sys: ReducedSystem = EMPTY_SYSTEM) -> None:
    if isinstance(e, Base):
        ok = is_t_reduced(e.m, sys)
    elif isinstance(e, Inf):
        ok = True
    elif isinstance(e, Pred):
        ok = e.k >= 1 and in_a(e.a) and is_t_reduced(e.a, sys)
    elif isinstance(e, Scaled):
        ok = (e.k >= 1 and in_a(e.a) and is_t_reduced(e.a, sys)
              and is_t_reduced(e.x, sys) and numeral_value(e.x) is None)
    else:
        ok = False
    if not ok:
        raise ValueError(f"malformed extension element {e!r}")


def _std(e: ExtElem) -> int | None:
    return numeral_value(e.m) if isinstance(e, Base) else None


def _core_offset(e: ExtElem) -> tuple[Term, int] | None:
    """(w, j) with e = S^j w, w irreducible, j in Z; None if e is standard,
    INF or scaled."""
    if isinstance(e, Base):
        j, w = peel_succ(e.m)
        return None if w is Zero else (w, j)
    if isinstance(e, Pred):
        return e.a, -e.k
    return None


def _from_core(w: Term, j: int) -> ExtElem:
    return Base(succ_n(w, j)) if j >= 0 else Pred(w, -j)


def _shift(e: ExtElem, j: int) -> ExtElem:
    """S^j e for nonstandard e in M or a predecessor element; j may be negative."""
    w, off = _core_offset(e)
    return _from_core(w, off + j)


def ext_succ(e: ExtElem) -> ExtElem:
    if isinstance(e, Base):
        return Base(Succ(e.m))
    if isinstance(e, Pred):
        return Base(e.a) if e.k == 1 else Pred(e.a, e.k - 1)
    return e


def ext_pred(e: ExtElem) -> ExtElem | None:
    """A predecessor of ``e`` (None only for zero)."""
    if isinstance(e, Base):
        if e.m.op is SUCC_OP:
            return Base(e.m.left)
        if e.m is Zero:
            return None
        return Pred(e.m, 1)
    if isinstance(e, Pred):
        return Pred(e.a, e.k + 1)
    return e


def ext_add(x: ExtElem, y: ExtElem, sys: ReducedSystem = EMPTY_SYSTEM) -> ExtElem:
    if isinstance(x, Inf):
        return EXT_INF
    if isinstance(x, Pred):
        n = _std(y)
        return EXT_INF if n is None else _shift(Base(x.a), n - x.k)
    if isinstance(x, Scaled):
        if _std(y) is not None:
            return x
        cy, cz = _core_offset(y), _core_offset(Base(x.x))
        if cy is None or cy[0] is not cz[0]:
            return EXT_INF
        n = cy[1] - cz[1]
        if x.k > 1:
            return Scaled(x.a, x.k - 1, x.x)
        return _shift(Base(m_mul(x.x, x.a, sys)), n)
    # x in M
    if isinstance(y, (Inf, Scaled)):
        return EXT_INF
    if isinstance(y, Pred):
        return _shift(Base(m_add(x.m, y.a)), -y.k)
    return Base(m_add(x.m, y.m))


def ext_mul(x: ExtElem, y: ExtElem, sys: ReducedSystem = EMPTY_SYSTEM) -> ExtElem:
    if not isinstance(x, Base):
        n = _std(y)
        if n is None:
            return EXT_INF
        acc = EXT_ZERO
        for _ in range(n):
            acc = ext_add(acc, x, sys)
        return acc
    if isinstance(y, (Inf, Scaled)):
        return EXT_INF
    if isinstance(y, Pred):
        n = _std(x)
        if n is None:
            return Scaled(y.a, y.k, x.m)
        return _shift(Base(m_mul(unum(n), y.a, sys)), -y.k * n) if n else Base(m_mul(Zero, y.a, sys))
    return Base(m_mul(x.m, y.m, sys))


def ext_model_ops(e1: ExtElem, e2: ExtElem | None, op: str,
                  sys: ReducedSystem = EMPTY_SYSTEM) -> ExtElem:
    """Dispatch ``op`` in {'S', 'add', 'mul'}; e2 is ignored for 'S'."""
    check_ext_elem(e1, sys)
    if op == "S":
        return ext_succ(e1)
    check_ext_elem(e2, sys)
    if op == "add":
        return ext_add(e1, e2, sys)
    if op == "mul":
        return ext_mul(e1, e2, sys)
    raise ValueError(f"unknown operation {op!r}")


def check_ext_axioms(pairs: Iterable[tuple[ExtElem, ExtElem]],
                     sys: ReducedSystem = EMPTY_SYSTEM) -> AxiomReport:
    """Sampled Q1-Q7 over pairs of extension elements; Q3 is checked
    constructively through ext_pred."""
    report = AxiomReport()
    for x, y in pairs:
        report.checked += 1
        sx, sy = ext_succ(x), ext_succ(y)
        if sx == EXT_ZERO:
            report.fail("Q1", x)
        if sx == sy and x != y:
            report.fail("Q2", x, y)
        if x != EXT_ZERO:
            p = ext_pred(x)
            if p is None or ext_succ(p) != x:
                report.fail("Q3", x)
        if ext_add(x, EXT_ZERO, sys) != x:
            report.fail("Q4", x)
        if ext_add(x, sy, sys) != ext_succ(ext_add(x, y, sys)):
            report.fail("Q5", x, y)
        if ext_mul(x, EXT_ZERO, sys) != EXT_ZERO:
            report.fail("Q6", x)
        if ext_mul(x, sy, sys) != ext_add(ext_mul(x, y, sys), x, sys):
            report.fail("Q7", x, y)
    return report


def identity_valuation(t: Term) -> dict[int, Term]:
    return {i: Var(i) for i in variables(t)}
