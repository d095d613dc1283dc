"""Monotone formulas: conjunctions and disjunctions of atoms t = k."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .errors import BudgetExceeded, TermParseError
from .terms import Parser, Term, eval_nat, is_closed, render_term

DEFAULT_DNF_BUDGET = 4096


@dataclass(frozen=True)
class Atom:
    term: Term
    value: int

    def render(self, names=None):
        return f"{render_term(self.term, names)} = #{self.value}"


@dataclass(frozen=True)
class And:
    parts: tuple

    def render(self, names=None):
        return "(" + " & ".join(p.render(names) for p in self.parts) + ")"


@dataclass(frozen=True)
class Or:
    parts: tuple

    def render(self, names=None):
        return "(" + " | ".join(p.render(names) for p in self.parts) + ")"


PositiveFormula = Atom | And | Or


def atoms(f) -> list[Atom]:
    if isinstance(f, Atom):
        return [f]
    return [a for p in f.parts for a in atoms(p)]


def to_dnf(f, budget: int = DEFAULT_DNF_BUDGET) -> list[tuple[Atom, ...]]:
    """Disjuncts as atom tuples; duplicates within a disjunct are dropped."""
    if isinstance(f, Atom):
        return [(f,)]
    if isinstance(f, Or):
        out = []
        for p in f.parts:
            out.extend(to_dnf(p, budget))
            if len(out) > budget:
                raise BudgetExceeded(f"disjunctive normal form exceeds {budget} conjuncts")
        return out
    parts = [to_dnf(p, budget) for p in f.parts]
    total = 1
    for p in parts:
        total *= len(p)
    if total > budget:
        raise BudgetExceeded(f"disjunctive normal form exceeds {budget} conjuncts")
    out = []
    for combo in product(*parts):
        conj = []
        for c in combo:
            for a in c:
                if a not in conj:
                    conj.append(a)
        out.append(tuple(conj))
    return out


def eval_formula_nat(f, env) -> bool:
    if isinstance(f, Atom):
        return eval_nat(f.term, env) == f.value
    if isinstance(f, And):
        return all(eval_formula_nat(p, env) for p in f.parts)
    return any(eval_formula_nat(p, env) for p in f.parts)


class _FormulaParser(Parser):
    def formula(self):
        parts = [self.conjunction()]
        while self.at_op("|"):
            self.next()
            parts.append(self.conjunction())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def conjunction(self):
        parts = [self.primary()]
        while self.at_op("&"):
            self.next()
            parts.append(self.primary())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def primary(self):
        # "(" may open a term or a subformula; try the atom reading first
        if self.at_op("("):
            save_i, save_names = self.i, list(self.names)
            try:
                return self.atom_formula()
            except TermParseError:
                self.i = save_i
                self.names[:] = save_names
            self.next()
            f = self.formula()
            self.expect(")")
            return f
        return self.atom_formula()

    def atom_formula(self):
        lhs = self.term()
        tok = self.expect("=")
        rhs = self.term()
        if not is_closed(rhs):
            raise self.error("right-hand side of an atom must be a closed numeral", tok)
        return Atom(lhs, eval_nat(rhs, {}))


def parse_formula(text: str, names: list[str] | None = None):
    """Atoms ``term = #k`` combined with ``&``, ``|`` and parentheses."""
    p = _FormulaParser(text, names)
    f = p.formula()
    p.finish()
    return f
