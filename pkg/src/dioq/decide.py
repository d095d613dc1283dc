"""Deciding Diophantine satisfiability in Q and in Q+ (Q with 0*x = 0).

Every SAT verdict carries a certificate that verify_certificate re-checks
from scratch; UNSAT verdicts carry search statistics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from . import witness as W
from .errors import BudgetExceeded, ExpansionBudgetExceeded, SearchBudgetExceeded
from .formula import DEFAULT_DNF_BUDGET, And, Atom, atoms, eval_formula_nat, to_dnf
from .models import INF, Theory, all_infinite, decompose_prod, decompose_sum, ninfty_eval
from .rewrite import ReducedSystem
from .terms import (
    ADD_OP, VAR_OP, ZERO_OP, Add, Equation, Mul, Term, Var,
    bnum, eval_nat, peel_succ, variables,
)

SAT = "sat"
UNSAT = "unsat"

DEFAULT_SOL_BUDGET = 10**6
DEFAULT_ORACLE_BUDGET = 10**7
MODEL_CHECK_BUDGET = 10**6


# -- black-hole reduction -----------------------------------------------------


@dataclass(frozen=True)
class TriviallySat:
    """Both sides are INF at the all-INF valuation."""


@dataclass(frozen=True)
class Decided:
    value: bool
    lhs: int
    rhs: int


@dataclass(frozen=True)
class Reduced:
    term: Term
    n: int


def blackhole_reduce(eq: Equation, theory: Theory = Theory.Q):
    theory = Theory(theory)
    val = all_infinite(Add(eq.lhs, eq.rhs))
    a = ninfty_eval(eq.lhs, val, theory)
    b = ninfty_eval(eq.rhs, val, theory)
    if a is INF and b is INF:
        return TriviallySat()
    if a is not INF and b is not INF:
        return Decided(a == b, a, b)
    if a is INF:
        return Reduced(eq.lhs, b)
    return Reduced(eq.rhs, a)


# -- certificates -------------------------------------------------------------


@dataclass(frozen=True)
class NatAssignment:
    values: dict = field(hash=False)

    kind = "nat"


@dataclass(frozen=True)
class InfinityAssignment:
    variables: tuple

    kind = "infinity"


@dataclass(frozen=True)
class WitnessCertificate:
    witness: W.Witness
    system: ReducedSystem
    valuation: dict = field(hash=False)

    kind = "witness"


@dataclass(frozen=True)
class ExhaustionRecord:
    reason: str
    space_size: int = 0
    explored: int = 0

    kind = "exhaustion"


@dataclass(frozen=True)
class Verdict:
    status: str
    theory: Theory
    certificate: object
    stats: dict = field(default_factory=dict, hash=False, compare=False)

    @property
    def sat(self) -> bool:
        return self.status == SAT


# -- Q+ -----------------------------------------------------------------------


def _sol_assignments(E, budget):
    """Depth-first realization of the nondeterministic sol procedure for Q+.

    Yields variable assignments (dicts) under which every constraint holds
    in the naturals; variables never constrained are left out.
    """
    steps = [0]
    assign: dict[int, int] = {}

    def rec(pending):
        steps[0] += 1
        if steps[0] > budget:
            raise SearchBudgetExceeded(f"sol exceeded {budget} steps")
        if not pending:
            yield assign
            return
        (t, n), rest = pending[0], pending[1:]
        k, t = peel_succ(t)
        if k > n:
            return
        n -= k
        if t.op is ZERO_OP:
            if n == 0:
                yield from rec(rest)
        elif t.op is VAR_OP:
            have = assign.get(t.index)
            if have is None:
                assign[t.index] = n
                yield from rec(rest)
                del assign[t.index]
            elif have == n:
                yield from rec(rest)
        elif t.op is ADD_OP:
            for a, b in decompose_sum(n):
                yield from rec([(t.left, a), (t.right, b)] + rest)
        else:
            for a, b in decompose_prod(n):
                if n != 0:
                    if a == 0:
                        continue        # 0 * t = 0 in Q+, never n > 0
                    yield from rec([(t.left, a), (t.right, b)] + rest)
                elif a is not None:
                    yield from rec([(t.left, 0)] + rest)
                else:
                    yield from rec([(t.right, 0)] + rest)

    yield from rec(list(E))


def sol_qplus_assignment(E, budget: int = DEFAULT_SOL_BUDGET) -> dict[int, int] | None:
    """A natural-number solution of the system E = [(t, n)], or None.

    Variables left free by the search (only under a zero factor) get 0.
    """
    E = [(t, int(n)) for t, n in E]
    for a in _sol_assignments(E, budget):
        out = dict(a)
        for t, _ in E:
            for i in variables(t):
                out.setdefault(i, 0)
        return out
    return None


def sol_qplus(E, budget: int = DEFAULT_SOL_BUDGET) -> bool:
    return sol_qplus_assignment(E, budget) is not None


# -- deciders -----------------------------------------------------------------


def _decided(res, eq, theory):
    if res.value:
        cert = NatAssignment({i: 0 for i in variables(Add(eq.lhs, eq.rhs))})
        return Verdict(SAT, theory, cert, {"route": "constant"})
    return Verdict(UNSAT, theory,
                   ExhaustionRecord(f"both sides are constant: {res.lhs} != {res.rhs}"),
                   {"route": "constant"})


def _witness_verdict(system, theory, budget, route):
    w, st = W.search_witness_with_stats(system, budget)
    stats = {"route": route, "subterms": st.nodes, "explored": st.explored}
    if w is None:
        return Verdict(UNSAT, theory,
                       ExhaustionRecord("no witness in the labelling space",
                                        st.space_size, st.explored), stats)
    E = W.extract_reduced_system(w)
    try:
        val = W.build_model_valuation(w, E, MODEL_CHECK_BUDGET)
    except ExpansionBudgetExceeded:
        val = {}
    return Verdict(SAT, theory, WitnessCertificate(w, E, val), stats)


def _checked(verdict, inp):
    if verdict.sat and not verify_certificate(verdict, inp):
        raise AssertionError("internal error: certificate failed verification")
    return verdict


def decide_q(eq: Equation, budget: int = W.DEFAULT_SEARCH_BUDGET) -> Verdict:
    res = blackhole_reduce(eq, Theory.Q)
    if isinstance(res, TriviallySat):
        v = Verdict(SAT, Theory.Q, InfinityAssignment(tuple(variables(Add(eq.lhs, eq.rhs)))),
                    {"route": "infinity"})
    elif isinstance(res, Decided):
        v = _decided(res, eq, Theory.Q)
    else:
        v = _witness_verdict([(res.term, res.n)], Theory.Q, budget, "witness")
    return _checked(v, eq)


def decide_qplus(eq: Equation, budget: int = DEFAULT_SOL_BUDGET) -> Verdict:
    res = blackhole_reduce(eq, Theory.QPLUS)
    if isinstance(res, TriviallySat):
        v = Verdict(SAT, Theory.QPLUS, InfinityAssignment(tuple(variables(Add(eq.lhs, eq.rhs)))),
                    {"route": "infinity"})
    elif isinstance(res, Decided):
        v = _decided(res, eq, Theory.QPLUS)
    else:
        a = sol_qplus_assignment([(res.term, res.n)], budget)
        if a is None:
            v = Verdict(UNSAT, Theory.QPLUS, ExhaustionRecord("sol rejects every branch"),
                        {"route": "sol"})
        else:
            for i in variables(Add(eq.lhs, eq.rhs)):
                a.setdefault(i, 0)      # variables on the constant side are free
            v = Verdict(SAT, Theory.QPLUS, NatAssignment(a), {"route": "sol"})
    return _checked(v, eq)


def decide(eq: Equation, theory: Theory = Theory.Q, budget: int | None = None) -> Verdict:
    theory = Theory(theory)
    if theory is Theory.Q:
        return decide_q(eq, budget or W.DEFAULT_SEARCH_BUDGET)
    return decide_qplus(eq, budget or DEFAULT_SOL_BUDGET)


def decide_positive_existential(f, theory: Theory = Theory.Q,
                                budget: int | None = None,
                                dnf_budget: int = DEFAULT_DNF_BUDGET) -> Verdict:
    """SAT iff some disjunct of the DNF has a joint witness (Q) or a
    natural-number solution (Q+)."""
    theory = Theory(theory)
    conjuncts = to_dnf(f, dnf_budget)
    space, explored = 0, 0
    for i, conj in enumerate(conjuncts):
        system = [(a.term, a.value) for a in conj]
        if theory is Theory.Q:
            v = _witness_verdict(system, theory, budget or W.DEFAULT_SEARCH_BUDGET, "witness")
            if v.sat:
                v.stats["disjunct"] = i
                return _checked(v, f)
            space += v.certificate.space_size
            explored += v.certificate.explored
        else:
            a = sol_qplus_assignment(system, budget or DEFAULT_SOL_BUDGET)
            if a is not None:
                for atom in atoms(f):
                    for j in variables(atom.term):
                        a.setdefault(j, 0)
                return _checked(Verdict(SAT, theory, NatAssignment(a),
                                        {"route": "sol", "disjunct": i}), f)
    return Verdict(UNSAT, theory,
                   ExhaustionRecord(f"none of {len(conjuncts)} disjuncts is satisfiable",
                                    space, explored),
                   {"disjuncts": len(conjuncts)})


# -- verification -------------------------------------------------------------


def _input_variables(inp) -> list[int]:
    if isinstance(inp, Equation):
        return variables(Add(inp.lhs, inp.rhs))
    found = set()
    for a in atoms(inp):
        found.update(variables(a.term))
    return sorted(found)


def verify_certificate(v: Verdict, inp) -> bool:
    """Re-check a SAT verdict's certificate against the input (an Equation
    or a positive formula) without trusting the decider."""
    if not v.sat:
        return False
    c = v.certificate
    theory = Theory(v.theory)
    if isinstance(c, NatAssignment):
        env = dict(c.values)
        if any(not isinstance(x, int) or x < 0 for x in env.values()):
            return False
        if any(i not in env for i in _input_variables(inp)):
            return False
        if isinstance(inp, Equation):
            return eval_nat(inp.lhs, env) == eval_nat(inp.rhs, env)
        return eval_formula_nat(inp, env)
    if isinstance(c, InfinityAssignment):
        if not isinstance(inp, Equation):
            return False
        val = all_infinite(Add(inp.lhs, inp.rhs))
        return ninfty_eval(inp.lhs, val, theory) is INF and ninfty_eval(inp.rhs, val, theory) is INF
    if isinstance(c, WitnessCertificate):
        if theory is not Theory.Q:
            return False
        w = c.witness
        if isinstance(inp, Equation):
            res = blackhole_reduce(inp, Theory.Q)
            if not isinstance(res, Reduced) or w.system != ((res.term, res.n),):
                return False
        else:
            target = set(w.system)
            if not any(set((a.term, a.value) for a in conj) == target for conj in to_dnf(inp)):
                return False
        if not W.check_witness(w).ok:
            return False
        try:
            E = W.extract_reduced_system(w)
        except Exception:
            return False
        if E.entries != c.system.entries:
            return False
        try:
            val = W.build_model_valuation(w, E, MODEL_CHECK_BUDGET)
            return W.model_check(w, E, val, MODEL_CHECK_BUDGET)
        except ExpansionBudgetExceeded:
            # numerals too large to write in unary: the witness conditions,
            # checked above through descriptors, are the certificate
            return True
    return False


# -- natural-number oracle ----------------------------------------------------


def _np_eval(t: Term, grids, memo):
    k, u = peel_succ(t)
    if u.op is ZERO_OP:
        return k
    if u.op is VAR_OP:
        v = grids[u.index]
    else:
        v = memo.get(u)
        if v is None:
            a, b = _np_eval(u.left, grids, memo), _np_eval(u.right, grids, memo)
            v = a + b if u.op is ADD_OP else a * b
            memo[u] = v
    return v + k if k else v


def _np_formula(f, grids, memo):
    if isinstance(f, Atom):
        return _np_eval(f.term, grids, memo) == f.value
    parts = [_np_formula(p, grids, memo) for p in f.parts]
    out = parts[0]
    for p in parts[1:]:
        out = (out & p) if isinstance(f, And) else (out | p)
    return out


def nat_oracle(f, bound: int, budget: int = DEFAULT_ORACLE_BUDGET) -> dict[int, int] | None:
    """Least solution with all values <= bound, in lexicographic order of
    (value of the lowest-indexed variable, next variable, ...); None if there
    is none in range."""
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    vs = _input_variables(f)
    size = (bound + 1) ** len(vs)
    if size > budget:
        raise BudgetExceeded(f"{size} assignments exceed the oracle budget {budget}")
    top = {i: bound for i in vs}
    if isinstance(f, Equation):
        peak = max(eval_nat(f.lhs, top), eval_nat(f.rhs, top))
    else:
        peak = max((eval_nat(a.term, top) for a in atoms(f)), default=0)
    if peak < 2**62:
        axes = np.indices((bound + 1,) * len(vs), dtype=np.int64).reshape(len(vs), -1) \
            if vs else np.zeros((0, 1), dtype=np.int64)
        grids = {i: axes[j] for j, i in enumerate(vs)}
        memo: dict = {}
        if isinstance(f, Equation):
            ok = np.asarray(_np_eval(f.lhs, grids, memo) == _np_eval(f.rhs, grids, memo))
        else:
            ok = np.asarray(_np_formula(f, grids, memo))
        ok = np.broadcast_to(ok, (axes.shape[1],))
        hits = np.flatnonzero(ok)
        if hits.size == 0:
            return None
        h = int(hits[0])
        return {i: int(axes[j, h]) for j, i in enumerate(vs)}
    for combo in product(range(bound + 1), repeat=len(vs)):
        env = dict(zip(vs, combo))
        if isinstance(f, Equation):
            if eval_nat(f.lhs, env) == eval_nat(f.rhs, env):
                return env
        elif eval_formula_nat(f, env):
            return env
    return None


# -- Manders-Adleman instances ------------------------------------------------


def gen_manders_adleman(a: int, b: int) -> Equation:
    """x*x + a*y = b with binary numerals a, b."""
    if a <= 0:
        raise ValueError("a must be positive")
    if b < 0:
        raise ValueError("b must be nonnegative")
    x, y = Var(0), Var(1)
    return Equation(Add(Mul(x, x), Mul(bnum(a), y)), bnum(b))


def ma_nat_solvable(a: int, b: int) -> bool:
    if a <= 0:
        raise ValueError("a must be positive")
    return any((b - x * x) % a == 0 for x in range(math.isqrt(b) + 1))
