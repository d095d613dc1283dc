"""Certifying decision procedures for Diophantine equations in Robinson
arithmetic Q and in Q+ (Q with 0*x = 0)."""

from .decide import (
    SAT, UNSAT, Decided, ExhaustionRecord, InfinityAssignment, NatAssignment,
    Reduced, TriviallySat, Verdict, WitnessCertificate, blackhole_reduce, decide,
    decide_positive_existential, decide_q, decide_qplus, gen_manders_adleman,
    ma_nat_solvable, nat_oracle, sol_qplus, sol_qplus_assignment, verify_certificate,
)
from .descriptor import (
    desc_equal, desc_of_reduced, expand, minimize, parse_descriptor, render_descriptor,
)
from .errors import (
    BudgetExceeded, DioqError, ExpansionBudgetExceeded, InvariantViolation,
    RewriteBudgetExceeded, SearchBudgetExceeded, TermParseError,
)
from .formula import And, Atom, Or, parse_formula
from .models import INF, Theory, ninfty_eval, reduced_model_eval
from .rewrite import ReducedSystem, is_irreducible, is_normal, is_t_reduced, rtn_normalize
from .terms import (
    Add, Equation, Mul, Succ, Term, Var, Zero, bnum, parse_equation, parse_term,
    render_term, subterm_occurrences, unum,
)
from .witness import (
    Witness, check_witness, extract_reduced_system, label_image, search_witness,
)

__version__ = "0.1.0"

__all__ = [
    "Add",
    "And",
    "Atom",
    "BudgetExceeded",
    "Decided",
    "DioqError",
    "Equation",
    "ExhaustionRecord",
    "ExpansionBudgetExceeded",
    "INF",
    "InfinityAssignment",
    "InvariantViolation",
    "Mul",
    "NatAssignment",
    "Or",
    "Reduced",
    "ReducedSystem",
    "RewriteBudgetExceeded",
    "SAT",
    "SearchBudgetExceeded",
    "Succ",
    "Term",
    "TermParseError",
    "Theory",
    "TriviallySat",
    "UNSAT",
    "Var",
    "Verdict",
    "Witness",
    "WitnessCertificate",
    "Zero",
    "blackhole_reduce",
    "bnum",
    "check_witness",
    "decide",
    "decide_positive_existential",
    "decide_q",
    "decide_qplus",
    "desc_equal",
    "desc_of_reduced",
    "expand",
    "extract_reduced_system",
    "gen_manders_adleman",
    "is_irreducible",
    "is_normal",
    "is_t_reduced",
    "label_image",
    "ma_nat_solvable",
    "minimize",
    "nat_oracle",
    "ninfty_eval",
    "parse_descriptor",
    "parse_equation",
    "parse_formula",
    "parse_term",
    "reduced_model_eval",
    "render_descriptor",
    "render_term",
    "rtn_normalize",
    "search_witness",
    "sol_qplus",
    "sol_qplus_assignment",
    "subterm_occurrences",
    "unum",
    "verify_certificate",
]
