"""The rewriting system t+0 -> t, t+Su -> S(t+u), t*0 -> 0, t*Su -> t*u+t,
optionally extended by closed rules 0*t_i -> S^{n_i}0 for a reduced system.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable

from .errors import RewriteBudgetExceeded
from .terms import (
    ADD_OP, MUL_OP, SUCC_OP, VAR_OP, ZERO_OP, Add, Mul, Term, Zero,
    peel_succ, replace_at, subterm_occurrences, succ_n, unum,
)

DEFAULT_MAX_STEPS = 10**6
DEFAULT_MAX_NODES = 10**7


@dataclass(frozen=True)
class ReducedSystem:
    """The system {0*t_i = n_i}: distinct irreducible, mutually T-reduced t_i."""

    entries: tuple[tuple[Term, int], ...] = ()
    _lookup: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        entries = tuple((t, int(n)) for t, n in self.entries)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "_lookup", {t: n for t, n in entries})

    @classmethod
    def checked(cls, pairs: Iterable[tuple[Term, int]]) -> "ReducedSystem":
        sys_ = cls(tuple(pairs))
        problems = sys_.violations()
        if problems:
            raise ValueError("invalid reduced system: " + "; ".join(problems))
        return sys_

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def value_of(self, t: Term) -> int | None:
        return self._lookup.get(t)

    @property
    def terms(self) -> tuple[Term, ...]:
        return tuple(t for t, _ in self.entries)

    @property
    def norm_constant(self) -> int:
        return 2 + max((n for _, n in self.entries), default=0)

    def violations(self) -> list[str]:
        out = []
        if len(self._lookup) != len(self.entries):
            out.append("left-hand sides are not pairwise distinct")
        for t, n in self.entries:
            if n < 0:
                out.append(f"negative value {n}")
            if not is_irreducible(t):
                out.append(f"{t} is not irreducible")
            for u in _distinct_subterms(t):
                if u.op is MUL_OP and u.left is Zero and u.right in self._lookup:
                    out.append(f"0*{u.right} occurs inside {t}")
        return out


EMPTY_SYSTEM = ReducedSystem()


def _distinct_subterms(t: Term):
    seen = set()
    stack = [t]
    while stack:
        u = stack.pop()
        if u in seen:
            continue
        seen.add(u)
        yield u
        if u.left is not None:
            stack.append(u.left)
        if u.right is not None:
            stack.append(u.right)


def _is_r_redex(u: Term) -> bool:
    return u.op in (ADD_OP, MUL_OP) and u.right.op in (ZERO_OP, SUCC_OP)


def is_normal(t: Term) -> bool:
    return not any(_is_r_redex(u) for u in _distinct_subterms(t))


def is_irreducible(t: Term) -> bool:
    return t.op not in (ZERO_OP, SUCC_OP) and is_normal(t)


def is_t_reduced(t: Term, sys: ReducedSystem = EMPTY_SYSTEM) -> bool:
    for u in _distinct_subterms(t):
        if _is_r_redex(u):
            return False
        if u.op is MUL_OP and u.left is Zero and sys.value_of(u.right) is not None:
            return False
    return True


def root_reduct(u: Term, sys: ReducedSystem = EMPTY_SYSTEM) -> Term | None:
    """Result of rewriting the redex at the root of ``u``, or None."""
    if u.op is ADD_OP:
        b = u.right
        if b is Zero:
            return u.left
        if b.op is SUCC_OP:
            return succ_n(Add(u.left, b.left), 1)
    elif u.op is MUL_OP:
        b = u.right
        if b is Zero:
            return Zero
        if b.op is SUCC_OP:
            return Add(Mul(u.left, b.left), u.left)
        if u.left is Zero:
            n = sys.value_of(b)
            if n is not None:
                return unum(n)
    return None


def one_step_reducts(t: Term, sys: ReducedSystem = EMPTY_SYSTEM) -> list[Term]:
    """All terms one rewrite away from ``t``, duplicate-free, in redex-path order."""
    out = []
    seen = set()
    for path, u in subterm_occurrences(t):
        r = root_reduct(u, sys)
        if r is None:
            continue
        v = replace_at(t, path, r)
        if v not in seen:
            seen.add(v)
            out.append(v)
    return out


class _Normalizer:
    """Innermost normalization; children are normalized before their parent."""

    def __init__(self, sys, max_steps, max_nodes):
        self.sys = sys
        self.max_steps = max_steps
        self.max_nodes = max_nodes
        self.steps = 0
        self.memo: dict[Term, Term] = {}

    def tick(self, k=1):
        self.steps += k
        if self.steps > self.max_steps:
            raise RewriteBudgetExceeded(f"normalization exceeded {self.max_steps} steps")

    def check(self, t):
        if t.size > self.max_nodes:
            raise RewriteBudgetExceeded(f"normal form exceeded {self.max_nodes} nodes")
        return t

    def nf(self, t: Term) -> Term:
        k, core = peel_succ(t)
        if core.op in (ZERO_OP, VAR_OP):
            return t
        r = self.memo.get(core)
        if r is None:
            a = self.nf(core.left)
            b = self.nf(core.right)
            r = self.plus(a, b) if core.op is ADD_OP else self.times(a, b)
            self.memo[core] = r
        return self.check(succ_n(r, k))

    def plus(self, a: Term, b: Term) -> Term:
        # a + S^k c  ~>  S^k(a + c)  (k steps), then a + 0 ~> a
        k, c = peel_succ(b)
        self.tick(k)
        if c is Zero:
            self.tick()
            r = a
        else:
            r = Add(a, c)
        return self.check(succ_n(r, k))

    def times(self, a: Term, b: Term) -> Term:
        # a * S^k c  ~>  (...((a*c) + a)...) + a
        k, c = peel_succ(b)
        if c is Zero:
            self.tick()
            acc = Zero
        else:
            acc = Mul(a, c)
            if a is Zero:
                n = self.sys.value_of(c)
                if n is not None:
                    self.tick()
                    acc = unum(n, self.max_nodes)
        for _ in range(k):
            self.tick()
            acc = self.plus(acc, a)
        return acc


def rtn_normalize(t: Term, sys: ReducedSystem = EMPTY_SYSTEM,
                  max_steps: int = DEFAULT_MAX_STEPS,
                  max_nodes: int = DEFAULT_MAX_NODES) -> Term:
    """The unique normal form of ``t`` (red(t) for the empty system).

    Raises RewriteBudgetExceeded rather than truncating; unary unfolding of
    binary numerals makes the normal form exponentially large in general.
    """
    return _Normalizer(sys, max_steps, max_nodes).nf(t)


def normalize_counting(t: Term, sys: ReducedSystem = EMPTY_SYSTEM,
                       max_steps: int = DEFAULT_MAX_STEPS,
                       max_nodes: int = DEFAULT_MAX_NODES) -> tuple[Term, int]:
    """Like rtn_normalize but also returns the number of rule applications
    (shared subterms are rewritten once)."""
    n = _Normalizer(sys, max_steps, max_nodes)
    r = n.nf(t)
    return r, n.steps


def normalize_randomly(t: Term, sys: ReducedSystem = EMPTY_SYSTEM,
                       rng: random.Random | None = None,
                       max_steps: int = 100_000) -> Term:
    """Rewrite a uniformly chosen redex until none is left.

    Slow; exists so confluence can be tested against independent strategies.
    """
    rng = rng or random.Random()
    for _ in range(max_steps):
        reducts = one_step_reducts(t, sys)
        if not reducts:
            return t
        t = rng.choice(reducts)
    raise RewriteBudgetExceeded(f"random strategy exceeded {max_steps} steps")


def norm_measure(t: Term, c: int) -> int:
    """Weight that every rewrite step strictly decreases (for c >= 2 + max n_i):
    |x| = |0| = c, |St| = |t| + 3, |t+u| = |t| + 2|u|, |t*u| = |t|*|u|."""
    memo: dict[Term, int] = {}

    def go(u):
        k, u = peel_succ(u)
        if u.op in (ZERO_OP, VAR_OP):
            return c + 3 * k
        got = memo.get(u)
        if got is None:
            a, b = go(u.left), go(u.right)
            got = a + 2 * b if u.op is ADD_OP else a * b
            memo[u] = got
        return got + 3 * k

    return go(t)
