"""Terms of the language {0, S, +, *}, numerals, parsing and printing.

Terms are hash-consed: building the same tree twice returns the same object,
so structural equality is object identity and hashing is O(1).  Variables are
plain indices; source names live in a separate name table (a list of str)
that the parser fills in first-occurrence order.
"""

from __future__ import annotations

import enum
import re
import weakref
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import TermParseError, ExpansionBudgetExceeded

ZERO_OP = "0"
VAR_OP = "var"
SUCC_OP = "S"
ADD_OP = "+"
MUL_OP = "*"

DEFAULT_MAX_VAR_INDEX = 2**16
DEFAULT_UNARY_BUDGET = 10**6

_table: "weakref.WeakValueDictionary[tuple, Term]" = weakref.WeakValueDictionary()


class Term:
    """An interned term node.  Do not instantiate directly; use the factories."""

    __slots__ = ("op", "left", "right", "index", "size", "_hash", "__weakref__")

    def __init__(self, op, left, right, index, key):
        self.op = op
        self.left = left
        self.right = right
        self.index = index
        size = 1
        if left is not None:
            size += left.size
        if right is not None:
            size += right.size
        self.size = size
        self._hash = hash(key)

    def __hash__(self):
        return self._hash

    # identity equality is structural equality because of interning
    __eq__ = object.__eq__

    def __reduce__(self):
        return (_rebuild, (self.op, self.left, self.right, self.index))

    @property
    def child(self) -> "Term":
        return self.left

    def __repr__(self):
        return f"Term({render_term(self, display=True)})"

    def __str__(self):
        return render_term(self)


def _intern(op, left=None, right=None, index=None) -> Term:
    if op == VAR_OP:
        key = (op, index)
    else:
        key = (op, left, right)
    node = _table.get(key)
    if node is None:
        node = Term(op, left, right, index, key)
        _table[key] = node
    return node


def _rebuild(op, left, right, index):
    return _intern(op, left, right, index)


Zero = _intern(ZERO_OP)


def Var(index: int, max_index: int = DEFAULT_MAX_VAR_INDEX) -> Term:
    if not 0 <= index < max_index:
        raise ValueError(f"variable index {index} outside [0, {max_index})")
    return _intern(VAR_OP, index=index)


def Succ(t: Term) -> Term:
    return _intern(SUCC_OP, t)


def Add(a: Term, b: Term) -> Term:
    return _intern(ADD_OP, a, b)


def Mul(a: Term, b: Term) -> Term:
    return _intern(MUL_OP, a, b)


def succ_n(t: Term, n: int) -> Term:
    """Apply S to ``t`` n times."""
    for _ in range(n):
        t = _intern(SUCC_OP, t)
    return t


def peel_succ(t: Term) -> tuple[int, Term]:
    """Split ``t`` as S^k(core) with core not S-rooted."""
    k = 0
    while t.op is SUCC_OP:
        t = t.left
        k += 1
    return k, t


def unum(n: int, budget: int = DEFAULT_UNARY_BUDGET) -> Term:
    """Unary numeral S^n 0."""
    if n < 0:
        raise ValueError("numerals are nonnegative")
    if n > budget:
        raise ExpansionBudgetExceeded(f"unary numeral {n} exceeds budget {budget}")
    return succ_n(Zero, n)


def bnum(n: int) -> Term:
    """Binary numeral: bnum(0)=0, bnum(2n)=SS0*bnum(n), bnum(2n+1)=S(bnum(2n))."""
    if n < 0:
        raise ValueError("numerals are nonnegative")
    two = Succ(Succ(Zero))
    t = Zero
    for bit in bin(n)[2:] if n else "":
        if t is not Zero:
            t = Mul(two, t)
        if bit == "1":
            t = Succ(t)
    return t


def numeral_value(t: Term) -> int | None:
    """k if ``t`` is literally S^k 0, else None."""
    k, core = peel_succ(t)
    return k if core is Zero else None


def is_closed(t: Term) -> bool:
    return not variables(t)


def variables(t: Term) -> list[int]:
    """Sorted variable indices occurring in ``t``."""
    found = set()
    seen = set()
    stack = [t]
    while stack:
        u = stack.pop()
        if u in seen:
            continue
        seen.add(u)
        if u.op is VAR_OP:
            found.add(u.index)
        else:
            if u.left is not None:
                stack.append(u.left)
            if u.right is not None:
                stack.append(u.right)
    return sorted(found)


def eval_nat(t: Term, env: Mapping[int, int]) -> int:
    """Standard value of ``t`` in the natural numbers."""
    memo: dict[Term, int] = {}

    def ev(u):
        k, u = peel_succ(u)
        if u.op is ZERO_OP:
            return k
        if u.op is VAR_OP:
            return env[u.index] + k
        got = memo.get(u)
        if got is None:
            a, b = ev(u.left), ev(u.right)
            got = a + b if u.op is ADD_OP else a * b
            memo[u] = got
        return got + k

    return ev(t)


# -- occurrences --------------------------------------------------------------


class Step(str, enum.Enum):
    SUCC = "succ"
    ADD_LEFT = "add-left"
    ADD_RIGHT = "add-right"
    MUL_LEFT = "mul-left"
    MUL_RIGHT = "mul-right"


Path = tuple  # tuple[Step, ...]; () is the root

_CHILD_STEPS = {
    SUCC_OP: (Step.SUCC,),
    ADD_OP: (Step.ADD_LEFT, Step.ADD_RIGHT),
    MUL_OP: (Step.MUL_LEFT, Step.MUL_RIGHT),
}
_STEP_OP = {
    Step.SUCC: (SUCC_OP, 0),
    Step.ADD_LEFT: (ADD_OP, 0),
    Step.ADD_RIGHT: (ADD_OP, 1),
    Step.MUL_LEFT: (MUL_OP, 0),
    Step.MUL_RIGHT: (MUL_OP, 1),
}


def children(t: Term) -> list[tuple[Step, Term]]:
    steps = _CHILD_STEPS.get(t.op, ())
    kids = (t.left, t.right)
    return [(s, kids[i]) for i, s in enumerate(steps)]


def subterm_occurrences(t: Term) -> list[tuple[Path, Term]]:
    """Every occurrence of every subterm, in pre-order."""
    out = []
    stack = [((), t)]
    while stack:
        path, u = stack.pop()
        out.append((path, u))
        for step, c in reversed(children(u)):
            stack.append((path + (step,), c))
    return out


def subterm_at(t: Term, path: Sequence[Step]) -> Term:
    for step in path:
        step = Step(step)
        op, i = _STEP_OP[step]
        if t.op is not op:
            raise KeyError(f"path step {step.value!r} does not apply to {t}")
        t = t.left if i == 0 else t.right
    return t


def replace_at(t: Term, path: Sequence[Step], new: Term) -> Term:
    """Copy of ``t`` with the subterm at ``path`` replaced by ``new``."""
    spine = []
    for step in path:
        spine.append((t, step))
        t = subterm_at(t, (step,))
    for parent, step in reversed(spine):
        if step is Step.SUCC:
            new = Succ(new)
        elif _STEP_OP[step][1] == 0:
            new = _intern(parent.op, new, parent.right)
        else:
            new = _intern(parent.op, parent.left, new)
    return new


@dataclass(frozen=True)
class Equation:
    lhs: Term
    rhs: Term

    def __str__(self):
        return f"{render_term(self.lhs)} = {render_term(self.rhs)}"


# -- printing -----------------------------------------------------------------

_DEFAULT_NAMES = ("x", "y", "z", "u", "v", "w")


def var_name(index: int, names: Sequence[str] | None = None) -> str:
    if names is not None and index < len(names):
        return names[index]
    if index < len(_DEFAULT_NAMES):
        return _DEFAULT_NAMES[index]
    return f"x{index}"


def render_term(t: Term, names: Sequence[str] | None = None, display: bool = False) -> str:
    """Fully parenthesized text form.

    ``display=True`` abbreviates successor chains of length >= 2 as S^k(...)
    and closed numerals S^k(0) as #k; that form is for humans only.
    """
    parts: list[str] = []

    def go(u):
        k, core = peel_succ(u)
        if display and k >= 2:
            if core is Zero:
                parts.append(f"#{k}")
                return
            parts.append(f"S^{k}(")
            go(core)
            parts.append(")")
            return
        parts.append("S(" * k)
        if core.op is ZERO_OP:
            parts.append("0")
        elif core.op is VAR_OP:
            parts.append(var_name(core.index, names))
        else:
            parts.append("(")
            go(core.left)
            parts.append(" + " if core.op is ADD_OP else " * ")
            go(core.right)
            parts.append(")")
        parts.append(")" * k)

    go(t)
    return "".join(parts)


# -- parsing ------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<hash>#\d+)|(?P<num>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_']*)|(?P<op>[()+*=&|^]))"
)


def tokenize(text: str) -> list[tuple[str, str, int]]:
    """(kind, value, position) triples; kind is hash/num/ident/op/end."""
    tokens = []
    pos = 0
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise TermParseError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


class Parser:
    """Recursive-descent parser for terms, equations and positive formulas.

    ``*`` binds tighter than ``+``; both associate to the left, so the
    canonical fully parenthesized output parses back to the same tree.
    """

    def __init__(self, text: str, names: list[str] | None = None,
                 max_var_index: int = DEFAULT_MAX_VAR_INDEX):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self.names = names if names is not None else []
        self.max_var_index = max_var_index

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        return TermParseError(message, self.text, tok[2])

    def expect(self, value):
        tok = self.next()
        if tok[0] != "op" or tok[1] != value:
            raise self.error(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok)
        return tok

    def at_op(self, value):
        tok = self.peek()
        return tok[0] == "op" and tok[1] == value

    def finish(self):
        tok = self.peek()
        if tok[0] != "end":
            raise self.error(f"unexpected {tok[1]!r}", tok)

    def term(self) -> Term:
        t = self.product()
        while self.at_op("+"):
            self.next()
            t = Add(t, self.product())
        return t

    def product(self) -> Term:
        t = self.atom()
        while self.at_op("*"):
            self.next()
            t = Mul(t, self.atom())
        return t

    def atom(self) -> Term:
        tok = self.next()
        kind, value, _ = tok
        if kind == "hash":
            return bnum(int(value[1:]))
        if kind == "num":
            if value == "0":
                return Zero
            raise self.error(f"bare numeral {value!r}; write #{value} for a binary numeral", tok)
        if kind == "op" and value == "(":
            t = self.term()
            self.expect(")")
            return t
        if kind == "ident":
            if value == "S" and (self.at_op("(") or self.at_op("^")):
                k = 1
                if self.at_op("^"):
                    self.next()
                    ktok = self.next()
                    if ktok[0] != "num":
                        raise self.error("expected repetition count after 'S^'", ktok)
                    k = int(ktok[1])
                self.expect("(")
                t = self.term()
                self.expect(")")
                return succ_n(t, k)
            if value == "S":
                raise self.error("'S' is reserved for successor", tok)
            return self.variable(value, tok)
        raise self.error(f"unexpected {value or 'end of input'!r}", tok)

    def variable(self, name, tok) -> Term:
        try:
            idx = self.names.index(name)
        except ValueError:
            idx = len(self.names)
            if idx >= self.max_var_index:
                raise self.error(f"too many variables (limit {self.max_var_index})", tok)
            self.names.append(name)
        return Var(idx, self.max_var_index)

    def equation(self) -> Equation:
        lhs = self.term()
        self.expect("=")
        rhs = self.term()
        return Equation(lhs, rhs)


def parse_term(text: str, names: list[str] | None = None,
               max_var_index: int = DEFAULT_MAX_VAR_INDEX) -> Term:
    """Parse a term; ``#n`` is the binary numeral of n.

    ``names`` (mutated in place) maps variable indices to source names;
    unseen names are appended.
    """
    p = Parser(text, names, max_var_index)
    t = p.term()
    p.finish()
    return t


def parse_equation(text: str, names: list[str] | None = None) -> Equation:
    p = Parser(text, names)
    eq = p.equation()
    p.finish()
    return eq
