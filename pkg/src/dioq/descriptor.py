"""Succinct descriptors for reduced terms.

Besides 0, variables, + and *, a descriptor may use

    S[n](t)       S^n t                                   (n >= 1)
    A[n,m](u)     S^n(...S^n(0 + u) + u ...) + u           (n >= 0, m >= 2)
    B[n,m](t, u)  S^n(...S^n(S^n(u) * t + u) + u ...) + u  (n >= 0, m >= 1)

with m copies of u and m - 1 blocks S^n in the A and B forms (no outer
S^n).  Indices are Python ints, so reduced forms of binary numerals stay
small: red(bnum(2**64)) is S[2**64](0).

Minimal descriptors are canonical: two minimal descriptors denote the same
term iff they are identical, which gives polynomial-time equality of reduced
forms without ever expanding them.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .errors import ExpansionBudgetExceeded, TermParseError
from .terms import (
    ADD_OP, VAR_OP, ZERO_OP, Add, Mul, Term, Var, Zero,
    peel_succ, succ_n, var_name,
)

DEFAULT_EXPAND_BUDGET = 10**6


@dataclass(frozen=True)
class DZero:
    pass


@dataclass(frozen=True)
class DVar:
    index: int


@dataclass(frozen=True)
class DAdd:
    left: "Descriptor"
    right: "Descriptor"


@dataclass(frozen=True)
class DMul:
    left: "Descriptor"
    right: "Descriptor"


@dataclass(frozen=True)
class Sn:
    n: int
    d: "Descriptor"

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"S[n] needs n >= 1, got {self.n}")


@dataclass(frozen=True)
class Anm:
    n: int
    m: int
    u: "Descriptor"

    def __post_init__(self):
        if self.n < 0 or self.m < 2:
            raise ValueError(f"A[n,m] needs n >= 0, m >= 2, got {self.n},{self.m}")


@dataclass(frozen=True)
class Bnm:
    n: int
    m: int
    t: "Descriptor"
    u: "Descriptor"

    def __post_init__(self):
        if self.n < 0 or self.m < 1:
            raise ValueError(f"B[n,m] needs n >= 0, m >= 1, got {self.n},{self.m}")


Descriptor = Union[DZero, DVar, DAdd, DMul, Sn, Anm, Bnm]
D0 = DZero()


def wrap(n: int, d: Descriptor) -> Descriptor:
    """S_n(d), where S_0 is the identity."""
    return Sn(n, d) if n else d


def split_s(d: Descriptor) -> tuple[int, Descriptor]:
    if isinstance(d, Sn):
        return d.n, d.d
    return 0, d


def children(d: Descriptor) -> tuple:
    if isinstance(d, (DAdd, DMul)):
        return (d.left, d.right)
    if isinstance(d, Sn):
        return (d.d,)
    if isinstance(d, Anm):
        return (d.u,)
    if isinstance(d, Bnm):
        return (d.t, d.u)
    return ()


def size(d: Descriptor) -> int:
    """Number of symbols; an indexed symbol counts once whatever its indices."""
    return 1 + sum(size(c) for c in children(d))


def expanded_size(d: Descriptor) -> int:
    """Node count of expand(d), computed without expanding."""
    if isinstance(d, (DZero, DVar)):
        return 1
    if isinstance(d, (DAdd, DMul)):
        return 1 + expanded_size(d.left) + expanded_size(d.right)
    if isinstance(d, Sn):
        return d.n + expanded_size(d.d)
    if isinstance(d, Anm):
        su = expanded_size(d.u)
        return 2 + su + (d.m - 1) * (d.n + 1 + su)
    su, st = expanded_size(d.u), expanded_size(d.t)
    return (d.n + su + st + 1 + su + 1) + (d.m - 1) * (d.n + 1 + su)


def expand(d: Descriptor, budget: int = DEFAULT_EXPAND_BUDGET) -> Term:
    """The term a descriptor denotes."""
    if expanded_size(d) > budget:
        raise ExpansionBudgetExceeded(f"expansion of descriptor exceeds {budget} nodes")
    memo: dict = {}

    def go(d):
        got = memo.get(d)
        if got is not None:
            return got
        if isinstance(d, DZero):
            r = Zero
        elif isinstance(d, DVar):
            r = Var(d.index)
        elif isinstance(d, DAdd):
            r = Add(go(d.left), go(d.right))
        elif isinstance(d, DMul):
            r = Mul(go(d.left), go(d.right))
        elif isinstance(d, Sn):
            r = succ_n(go(d.d), d.n)
        elif isinstance(d, Anm):
            u = go(d.u)
            r = Add(Zero, u)
            for _ in range(d.m - 1):
                r = Add(succ_n(r, d.n), u)
        else:
            t, u = go(d.t), go(d.u)
            r = Add(Mul(succ_n(u, d.n), t), u)
            for _ in range(d.m - 1):
                r = Add(succ_n(r, d.n), u)
        memo[d] = r
        return r

    return go(d)


def from_term(t: Term) -> Descriptor:
    """Literal descriptor of a term (successor chains become S[k])."""
    k, core = peel_succ(t)
    if core.op is ZERO_OP:
        d = D0
    elif core.op is VAR_OP:
        d = DVar(core.index)
    elif core.op is ADD_OP:
        d = DAdd(from_term(core.left), from_term(core.right))
    else:
        d = DMul(from_term(core.left), from_term(core.right))
    return wrap(k, d)


# -- minimization -------------------------------------------------------------


def rewrite_root(d: Descriptor) -> Descriptor:
    """Apply the minimization rule matching at the root of ``d`` (children
    are assumed minimal).  Returns ``d`` itself when no rule applies."""
    if isinstance(d, Sn):
        if isinstance(d.d, Sn):
            return Sn(d.n + d.d.n, d.d.d)
        return d
    if not isinstance(d, DAdd):
        return d
    u = d.right
    j, inner = split_s(d.left)
    # S_j(0 + u) + u  ->  A[j,2](u)
    if isinstance(inner, DAdd) and isinstance(inner.left, DZero) and inner.right == u:
        return Anm(j, 2, u)
    # S_j(A[j,m](u)) + u  ->  A[j,m+1](u)
    if isinstance(inner, Anm) and inner.n == j and inner.u == u:
        return Anm(j, inner.m + 1, u)
    # S_j(B[j,m](t,u)) + u  ->  B[j,m+1](t,u)
    if isinstance(inner, Bnm) and inner.n == j and inner.u == u:
        return Bnm(j, inner.m + 1, inner.t, u)
    # S_k(u) * t + u  ->  B[k,1](t,u); u may itself carry an S-stack that has
    # been merged into the factor, so compare modulo the common S prefix.
    if j == 0 and isinstance(inner, DMul):
        jp, cp = split_s(inner.left)
        ju, cu = split_s(u)
        if cp == cu and jp >= ju:
            return Bnm(jp - ju, 1, inner.right, u)
    return d


def _rebuild(d: Descriptor, kids: tuple) -> Descriptor:
    if isinstance(d, DAdd):
        return DAdd(*kids)
    if isinstance(d, DMul):
        return DMul(*kids)
    if isinstance(d, Sn):
        return Sn(d.n, kids[0])
    if isinstance(d, Anm):
        return Anm(d.n, d.m, kids[0])
    if isinstance(d, Bnm):
        return Bnm(d.n, d.m, kids[0], kids[1])
    return d


def minimize(d: Descriptor) -> Descriptor:
    """Minimal descriptor with the same denotation (innermost-first)."""
    kids = children(d)
    if kids:
        new = tuple(minimize(c) for c in kids)
        if any(a is not b for a, b in zip(new, kids)):
            d = _rebuild(d, new)
    return rewrite_root(d)


def is_minimal(d: Descriptor) -> bool:
    return all(is_minimal(c) for c in children(d)) and rewrite_root(d) is d


def desc_equal(d1: Descriptor, d2: Descriptor) -> bool:
    return minimize(d1) == minimize(d2)


def numeral_value(d: Descriptor) -> int | None:
    """k if ``d`` denotes S^k 0."""
    d = minimize(d)
    if isinstance(d, DZero):
        return 0
    if isinstance(d, Sn) and isinstance(d.d, DZero):
        return d.n
    return None


# -- reduced forms ------------------------------------------------------------

# A "pair" (n, core) stands for S_n(core) where core is 0 or denotes an
# irreducible term; cores are minimal and never S-rooted.
Pair = tuple


def pair_succ(p: Pair) -> Pair:
    return (p[0] + 1, p[1])


def pair_add(p: Pair, q: Pair) -> Pair:
    n0, c0 = p
    n1, c1 = q
    if isinstance(c1, DZero):
        return (n0 + n1, c0)
    return (n1, rewrite_root(DAdd(wrap(n0, c0), c1)))


def pair_mul(p: Pair, q: Pair) -> Pair:
    n, t = p
    m, u = q
    if not isinstance(t, DZero):
        if isinstance(u, DZero):
            if m == 0:
                return (0, D0)
            if m == 1:
                return (n, DAdd(D0, t))
            return (n, Anm(n, m, t))
        if m == 0:
            return (0, DMul(wrap(n, t), u))
        return (n, Bnm(n, m, u, t))
    if isinstance(u, DZero):
        return (n * m, D0)
    if n > 0:
        return (n * m, DMul(Sn(n, D0), u))
    return (0, DMul(D0, u))


def pair_of_numeral(k: int) -> Pair:
    return (k, D0)


def reduced_pair(t: Term, memo: dict | None = None) -> Pair:
    """(n, core) with S_n(core) denoting red(t)."""
    memo = {} if memo is None else memo

    def go(u):
        k, u = peel_succ(u)
        if u.op is ZERO_OP:
            p = (0, D0)
        elif u.op is VAR_OP:
            p = (0, DVar(u.index))
        else:
            p = memo.get(u)
            if p is None:
                a, b = go(u.left), go(u.right)
                p = pair_add(a, b) if u.op is ADD_OP else pair_mul(a, b)
                memo[u] = p
        return (p[0] + k, p[1]) if k else p

    return go(t)


def desc_of_reduced(t: Term) -> Descriptor:
    """A minimal descriptor denoting red(t), in time polynomial in |t|."""
    return wrap(*reduced_pair(t))


# -- text form ----------------------------------------------------------------


def render_descriptor(d: Descriptor, names=None) -> str:
    if isinstance(d, DZero):
        return "0"
    if isinstance(d, DVar):
        return var_name(d.index, names)
    if isinstance(d, DAdd):
        return f"({render_descriptor(d.left, names)} + {render_descriptor(d.right, names)})"
    if isinstance(d, DMul):
        return f"({render_descriptor(d.left, names)} * {render_descriptor(d.right, names)})"
    if isinstance(d, Sn):
        return f"S[{d.n}]({render_descriptor(d.d, names)})"
    if isinstance(d, Anm):
        return f"A[{d.n},{d.m}]({render_descriptor(d.u, names)})"
    return f"B[{d.n},{d.m}]({render_descriptor(d.t, names)},{render_descriptor(d.u, names)})"


_DTOKEN = re.compile(r"\s*(?:(?P<hash>#\d+)|(?P<num>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_']*)|(?P<op>[()+*\[\],]))")


class _DescParser:
    def __init__(self, text, names):
        self.text = text
        self.names = names if names is not None else []
        self.toks = []
        pos = 0
        while True:
            while pos < len(text) and text[pos].isspace():
                pos += 1
            if pos >= len(text):
                break
            m = _DTOKEN.match(text, pos)
            if not m:
                raise TermParseError(f"unexpected character {text[pos]!r}", text, pos)
            self.toks.append((m.lastgroup, m.group(m.lastgroup), m.start(m.lastgroup)))
            pos = m.end()
        self.toks.append(("end", "", len(text)))
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def next(self):
        self.i += 1
        return self.toks[self.i - 1]

    def at(self, value):
        k, v, _ = self.peek()
        return k == "op" and v == value

    def expect(self, value):
        tok = self.next()
        if tok[0] != "op" or tok[1] != value:
            raise TermParseError(f"expected {value!r}, found {tok[1] or 'end of input'!r}",
                                 self.text, tok[2])

    def number(self):
        tok = self.next()
        if tok[0] != "num":
            raise TermParseError("expected an index", self.text, tok[2])
        return int(tok[1])

    def expr(self):
        d = self.prod()
        while self.at("+"):
            self.next()
            d = DAdd(d, self.prod())
        return d

    def prod(self):
        d = self.atom()
        while self.at("*"):
            self.next()
            d = DMul(d, self.atom())
        return d

    def atom(self):
        tok = self.next()
        kind, value, pos = tok
        if kind == "hash":
            return wrap(int(value[1:]), D0)
        if kind == "num" and value == "0":
            return D0
        if kind == "op" and value == "(":
            d = self.expr()
            self.expect(")")
            return d
        if kind == "ident":
            try:
                if value == "S" and self.at("["):
                    self.next()
                    n = self.number()
                    self.expect("]")
                    self.expect("(")
                    d = self.expr()
                    self.expect(")")
                    return Sn(n, d)
                if value == "S" and self.at("("):
                    self.next()
                    d = self.expr()
                    self.expect(")")
                    return Sn(1, d)
                if value in ("A", "B") and self.at("["):
                    self.next()
                    n = self.number()
                    self.expect(",")
                    m = self.number()
                    self.expect("]")
                    self.expect("(")
                    first = self.expr()
                    if value == "A":
                        self.expect(")")
                        return Anm(n, m, first)
                    self.expect(",")
                    second = self.expr()
                    self.expect(")")
                    return Bnm(n, m, first, second)
            except ValueError as exc:
                if isinstance(exc, TermParseError):
                    raise
                raise TermParseError(str(exc), self.text, pos) from None
            if value == "S":
                raise TermParseError("'S' is reserved", self.text, pos)
            try:
                idx = self.names.index(value)
            except ValueError:
                idx = len(self.names)
                self.names.append(value)
            return DVar(idx)
        raise TermParseError(f"unexpected {value or 'end of input'!r}", self.text, pos)


def parse_descriptor(text: str, names: list[str] | None = None) -> Descriptor:
    """Parse the text form; plain term syntax (S(...), #n) is accepted too."""
    p = _DescParser(text, names)
    d = p.expr()
    tok = p.peek()
    if tok[0] != "end":
        raise TermParseError(f"unexpected {tok[1]!r}", text, tok[2])
    return d
