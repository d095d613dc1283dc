"""Witnesses for Q-satisfiability of systems t_j = n_j.

A witness labels subterm occurrences with naturals <= N (N = max n_j) so that

  (i)   the root of each t_j is labelled n_j;
  (ii)  occurrences u, v with red(u_l) == red(v_l) have equal labels
        (both unlabelled, or both labelled with the same number);
  (iii) a labelled u with red(u_l) == S^k 0 is labelled k;
  (iv)  a labelled u has all immediate subterms labelled, unless u = v*w
        with v or w labelled 0.

u_l is u with its maximal proper labelled subterms replaced by numerals.
All red() comparisons go through minimal descriptors, so checking a witness
is polynomial even when labels are astronomically large.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from itertools import chain
from typing import Iterator, Sequence

from . import descriptor as D
from .errors import InvariantViolation, SearchBudgetExceeded
from .models import reduced_model_eval
from .rewrite import ReducedSystem
from .terms import (
    ADD_OP, MUL_OP, SUCC_OP, VAR_OP, ZERO_OP, Add, Mul, Path, Step, Succ, Term,
    bnum, render_term, subterm_at, subterm_occurrences, unum,
)

DEFAULT_SEARCH_BUDGET = 10**6

System = Sequence[tuple[Term, int]]


@dataclass(frozen=True)
class Witness:
    """Labels keyed by (equation index, occurrence path)."""

    system: tuple[tuple[Term, int], ...]
    labels: dict = field(hash=False)

    def __post_init__(self):
        object.__setattr__(self, "system", tuple((t, int(n)) for t, n in self.system))

    @property
    def bound(self) -> int:
        return max((n for _, n in self.system), default=0)

    def label(self, eq: int, path: Path) -> int | None:
        return self.labels.get((eq, tuple(path)))

    def sorted_labels(self) -> list[tuple[int, Path, int]]:
        """(equation, path, value) in equation order, then pre-order."""
        out = []
        for j, (t, _) in enumerate(self.system):
            for path, _u in subterm_occurrences(t):
                v = self.labels.get((j, path))
                if v is not None:
                    out.append((j, path, v))
        return out

    def same_as(self, other: "Witness") -> bool:
        return self.system == other.system and self.labels == other.labels


@dataclass(frozen=True)
class Violation:
    condition: str          # "i", "ii", "iii", "iv", "bound" or "path"
    equation: int
    path: Path
    message: str

    def __str__(self):
        where = "/".join(s.value for s in self.path) or "root"
        return f"({self.condition}) equation {self.equation} at {where}: {self.message}"


@dataclass(frozen=True)
class CheckResult:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


def _image(label, key):
    return (label, D.D0) if label is not None else key


def _combine(u: Term, imgs) -> D.Pair:
    if u.op is ZERO_OP:
        return (0, D.D0)
    if u.op is VAR_OP:
        return (0, D.DVar(u.index))
    if u.op is SUCC_OP:
        return D.pair_succ(imgs[0])
    if u.op is ADD_OP:
        return D.pair_add(imgs[0], imgs[1])
    return D.pair_mul(imgs[0], imgs[1])


def _kids(u: Term):
    if u.op is SUCC_OP:
        return (u.left,)
    if u.op in (ADD_OP, MUL_OP):
        return (u.left, u.right)
    return ()


_KID_STEPS = {
    SUCC_OP: (Step.SUCC,),
    ADD_OP: (Step.ADD_LEFT, Step.ADD_RIGHT),
    MUL_OP: (Step.MUL_LEFT, Step.MUL_RIGHT),
}


def _occurrence_keys(t: Term, labels_of) -> dict[Path, D.Pair]:
    """red(u_l) as a descriptor pair for every occurrence path of ``t``."""
    keys: dict[Path, D.Pair] = {}
    # reverse pre-order visits children before parents
    for path, u in reversed(subterm_occurrences(t)):
        steps = _KID_STEPS.get(u.op, ())
        imgs = [_image(labels_of(path + (s,)), keys[path + (s,)]) for s in steps]
        keys[path] = _combine(u, imgs)
    return keys


def is_numeral_pair(p: D.Pair) -> bool:
    return isinstance(p[1], D.DZero)


def occurrence_keys(w: Witness) -> list[dict[Path, D.Pair]]:
    return [_occurrence_keys(t, lambda p, j=j: w.labels.get((j, p)))
            for j, (t, _) in enumerate(w.system)]


def label_image(w: Witness, eq: int, path: Path) -> Term:
    """u_l for the occurrence at ``path`` of equation ``eq``, with binary numerals."""
    path = tuple(path)
    u = subterm_at(w.system[eq][0], path)

    def go(v, p, proper):
        lab = w.labels.get((eq, p)) if proper else None
        if lab is not None:
            return bnum(lab)
        if v.op is SUCC_OP:
            return Succ(go(v.left, p + (Step.SUCC,), True))
        if v.op is ADD_OP:
            return Add(go(v.left, p + (Step.ADD_LEFT,), True), go(v.right, p + (Step.ADD_RIGHT,), True))
        if v.op is MUL_OP:
            return Mul(go(v.left, p + (Step.MUL_LEFT,), True), go(v.right, p + (Step.MUL_RIGHT,), True))
        return v

    return go(u, path, False)


def check_witness(w: Witness) -> CheckResult:
    out: list[Violation] = []
    bound = w.bound
    valid_paths = set()
    for j, (t, _) in enumerate(w.system):
        for path, _u in subterm_occurrences(t):
            valid_paths.add((j, path))
    for (j, path), v in w.labels.items():
        if (j, path) not in valid_paths:
            out.append(Violation("path", j, tuple(path), "label on a nonexistent occurrence"))
        elif not (isinstance(v, int) and 0 <= v <= bound):
            out.append(Violation("bound", j, path, f"label {v} outside 0..{bound}"))
    if out:
        return CheckResult(tuple(out))

    all_keys = occurrence_keys(w)
    groups: dict = {}
    for j, (t, n) in enumerate(w.system):
        keys = all_keys[j]
        if w.labels.get((j, ())) != n:
            out.append(Violation("i", j, (), f"root labelled {w.labels.get((j, ()))}, expected {n}"))
        for path, u in subterm_occurrences(t):
            lab = w.labels.get((j, path))
            key = keys[path]
            groups.setdefault(key, []).append((j, path, lab))
            if lab is None:
                continue
            if is_numeral_pair(key) and key[0] != lab:
                out.append(Violation("iii", j, path, f"reduces to numeral {key[0]} but labelled {lab}"))
            steps = _KID_STEPS.get(u.op, ())
            kid_labels = [w.labels.get((j, path + (s,))) for s in steps]
            if any(k is None for k in kid_labels):
                if not (u.op is MUL_OP and 0 in kid_labels):
                    out.append(Violation("iv", j, path, "labelled with an unlabelled immediate subterm"))
    for key, members in groups.items():
        labs = {lab for _, _, lab in members}
        if len(labs) > 1:
            j, path, _ = members[0]
            shown = sorted(labs, key=lambda v: -1 if v is None else v)
            out.append(Violation("ii", j, path,
                                 f"occurrences with reduced form {D.render_descriptor(D.wrap(*key))} "
                                 f"carry different labels {shown}"))
    return CheckResult(tuple(out))


# -- search -------------------------------------------------------------------


@dataclass(frozen=True)
class SearchStats:
    nodes: int            # distinct subterms across the system
    space_size: int       # (N + 2) ** nodes: unlabelled or 0..N per subterm
    explored: int         # candidate labels tried


class _Need:
    """Labels a node may take given what its ancestors already demand."""

    __slots__ = ("none_ok", "values")

    def __init__(self, none_ok, values):
        self.none_ok = none_ok
        self.values = values          # range or sorted tuple

    def allows(self, lab):
        return self.none_ok if lab is None else lab in self.values


def _divisors(k: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= k:
        if k % d == 0:
            small.append(d)
            if d * d != k:
                large.append(k // d)
        d += 1
    return small + large[::-1]


class _Search:
    def __init__(self, system, budget):
        self.system = [(t, int(n)) for t, n in system]
        self.N = max((n for _, n in self.system), default=0)
        self.budget = budget
        self.explored = 0
        self.label: dict[Term, int | None] = {}
        self.key: dict[Term, D.Pair] = {}
        self.keymap: dict = {}            # key -> [label, refcount]
        self.free = _Need(True, range(self.N + 1))
        self.nothing = _Need(True, ())

    def exact(self, k):
        return _Need(False, (k,) if 0 <= k <= self.N else ())

    def upto(self, k):
        return _Need(False, range(min(k, self.N) + 1))

    def img(self, c):
        lab = self.label[c]
        return (lab, D.D0) if lab is not None else self.key[c]

    def assign(self, u: Term, need: _Need) -> Iterator[None]:
        if u in self.label:
            if need.allows(self.label[u]):
                yield
            return
        for _ in self.assign_kids(u, need):
            kids = _kids(u)
            key = _combine(u, [self.img(c) for c in kids])
            for lab in self.candidates(u, key, need):
                self.tick()
                self.label[u] = lab
                self.key[u] = key
                entry = self.keymap.get(key)
                if entry is None:
                    self.keymap[key] = [lab, 1]
                else:
                    entry[1] += 1
                yield
                entry = self.keymap[key]
                entry[1] -= 1
                if not entry[1]:
                    del self.keymap[key]
                del self.label[u]
                del self.key[u]

    def tick(self):
        self.explored += 1
        if self.explored > self.budget:
            raise SearchBudgetExceeded(f"witness search exceeded {self.budget} candidate labels")

    def candidates(self, u, key, need):
        entry = self.keymap.get(key)
        if is_numeral_pair(key):
            # Labelling every numeral-valued subterm (when <= N) loses no
            # witnesses: it leaves all reduced forms unchanged.
            k = key[0]
            opts = [k if k <= self.N else None]
        elif entry is not None:
            opts = [entry[0]]
        elif u.op is VAR_OP or (u.op is MUL_OP and 0 in (self.label[u.left], self.label[u.right])):
            opts = chain((None,), need.values)     # lazily: values may span 0..N
        else:
            opts = (None,)
        for lab in opts:
            if not need.allows(lab):
                continue
            if entry is not None and entry[0] != lab:
                continue
            if lab is not None and not self.kids_ok(u):
                continue
            yield lab

    def kids_ok(self, u):
        kids = _kids(u)
        labs = [self.label[c] for c in kids]
        if all(v is not None for v in labs):
            return True
        return u.op is MUL_OP and 0 in labs

    def assign_kids(self, u: Term, need: _Need) -> Iterator[None]:
        op = u.op
        if op in (ZERO_OP, VAR_OP):
            yield
            return
        constrained = not need.none_ok
        if op is SUCC_OP:
            if not constrained:
                yield from self.assign(u.left, self.free)
            elif isinstance(need.values, range):
                hi = need.values.stop - 1
                if hi >= 1:
                    yield from self.assign(u.left, self.upto(hi - 1))
            else:
                ks = [k - 1 for k in need.values if k >= 1]
                if ks:
                    yield from self.assign(u.left, _Need(False, tuple(ks)))
            return
        if op is ADD_OP:
            if not constrained:
                for _ in self.assign(u.left, self.free):
                    yield from self.assign(u.right, self.free)
                return
            hi = max(need.values, default=-1)
            if hi < 0:
                return
            for _ in self.assign(u.left, self.upto(hi)):
                a = self.label[u.left]
                if isinstance(need.values, range):
                    rneed = self.upto(hi - a) if hi >= a else None
                else:
                    rs = tuple(k - a for k in need.values if k >= a)
                    rneed = _Need(False, rs) if rs else None
                if rneed is not None:
                    yield from self.assign(u.right, rneed)
            return
        # multiplication
        if not constrained:
            for _ in self.assign(u.left, self.free):
                yield from self.assign(u.right, self.free)
            return
        values = need.values
        if not values:
            return
        exact = None if isinstance(values, range) else values
        if exact is not None and len(exact) == 1 and exact[0] != 0:
            k = exact[0]
            lneed = _Need(False, tuple([0] + [d for d in _divisors(k) if d <= self.N]))
        else:
            lneed = self.free if 0 in values else _Need(False, range(self.N + 1))
        for _ in self.assign(u.left, lneed):
            a = self.label[u.left]
            if a is None:
                rneed = self.exact(0)
            elif a == 0:
                # nonzero target: the right factor must stay unlabelled
                rneed = self.free if 0 in values else self.nothing
            elif exact is not None:
                rs = tuple(sorted({k // a for k in exact if k % a == 0}))
                rneed = _Need(False, rs)
            else:
                rneed = self.upto((values.stop - 1) // a)
            yield from self.assign(u.right, rneed)

    def run(self) -> Iterator[None]:
        def walk(j):
            if j == len(self.system):
                yield
                return
            t, n = self.system[j]
            for _ in self.assign(t, self.exact(n)):
                yield from walk(j + 1)
        yield from walk(0)


def _distinct_nodes(system) -> int:
    seen = set()
    for t, _ in system:
        for _p, u in subterm_occurrences(t):
            seen.add(u)
    return len(seen)


def _to_witness(system, labels_by_node) -> Witness:
    labels = {}
    for j, (t, _) in enumerate(system):
        for path, u in subterm_occurrences(t):
            lab = labels_by_node.get(u)
            if lab is not None:
                labels[(j, path)] = lab
    return Witness(tuple(system), labels)


def _deep_recursion(system):
    depth = max((t.size for t, _ in system), default=0)
    need = 4 * depth + 1000
    if sys.getrecursionlimit() < need:
        sys.setrecursionlimit(need)


def search_witness_with_stats(system: System, budget: int = DEFAULT_SEARCH_BUDGET
                              ) -> tuple[Witness | None, SearchStats]:
    """Depth-first search for a witness.

    Distinct subterms are labelled in post-order (children first, left to
    right); equal subterms share one label, as condition (ii) forces.
    Candidates per subterm: unlabelled, then 0..N ascending, narrowed by
    what the already-placed ancestors require.  A subterm whose reduced form
    is a numeral k is labelled k when k <= N.
    """
    system = [(t, int(n)) for t, n in system]
    _deep_recursion(system)
    s = _Search(system, budget)
    found = None
    for _ in s.run():
        found = _to_witness(system, dict(s.label))
        break
    nodes = _distinct_nodes(system)
    stats = SearchStats(nodes, (s.N + 2) ** nodes, s.explored)
    return found, stats


def search_witness(system: System, budget: int = DEFAULT_SEARCH_BUDGET) -> Witness | None:
    return search_witness_with_stats(system, budget)[0]


def enumerate_witnesses(system: System, limit: int | None = None,
                        max_candidates: int = 10**7) -> list[Witness]:
    """Every witness, by brute force over labellings of distinct subterms.

    Only checks that look at a subterm and its children are applied while
    enumerating (bound, (i), (iii), (iv)); every complete labelling is then
    run through check_witness.  Independent of search_witness, for testing.
    """
    system = [(t, int(n)) for t, n in system]
    _deep_recursion(system)
    N = max((n for _, n in system), default=0)
    order: list[Term] = []
    seen = set()
    for t, _ in system:
        for _p, u in reversed(subterm_occurrences(t)):
            if u not in seen:
                seen.add(u)
                order.append(u)
    roots: dict[Term, set] = {}
    for t, n in system:
        roots.setdefault(t, set()).add(n)
    label: dict[Term, int | None] = {}
    key: dict[Term, D.Pair] = {}
    found: list[Witness] = []
    counter = [0]

    def img(c):
        return (label[c], D.D0) if label[c] is not None else key[c]

    def rec(i):
        if limit is not None and len(found) >= limit:
            return
        if i == len(order):
            w = _to_witness(system, label)
            if check_witness(w).ok:
                found.append(w)
            return
        u = order[i]
        kids = _kids(u)
        k = _combine(u, [img(c) for c in kids])
        key[u] = k
        for lab in [None, *range(N + 1)]:
            counter[0] += 1
            if counter[0] > max_candidates:
                raise SearchBudgetExceeded("exhaustive witness enumeration budget exhausted")
            if u in roots and (len(roots[u]) > 1 or lab not in roots[u]):
                continue
            if lab is not None:
                if is_numeral_pair(k) and k[0] != lab:
                    continue
                labs = [label[c] for c in kids]
                if any(v is None for v in labs) and not (u.op is MUL_OP and 0 in labs):
                    continue
            label[u] = lab
            rec(i + 1)
            del label[u]
        del key[u]

    rec(0)
    return found


# -- from a witness to a model --------------------------------------------------


def extract_reduced_system(w: Witness, expand_budget: int = D.DEFAULT_EXPAND_BUDGET) -> ReducedSystem:
    """E = {red(u_l) = k : u = v*w, l(u) = k, l(v) = 0, red(u_l) != 0},
    each red(u_l) being 0*u- with u- irreducible; returned as pairs (u-, k)."""
    all_keys = occurrence_keys(w)
    entries: list[tuple[Term, int]] = []
    seen: dict = {}
    for j, (t, _) in enumerate(w.system):
        for path, u in subterm_occurrences(t):
            if u.op is not MUL_OP:
                continue
            k = w.labels.get((j, path))
            if k is None or w.labels.get((j, path + (Step.MUL_LEFT,))) != 0:
                continue
            key = all_keys[j][path]
            if is_numeral_pair(key) and key[0] == 0:
                continue
            n, core = key
            if n != 0 or not isinstance(core, D.DMul) or not isinstance(core.left, D.DZero):
                raise InvariantViolation(f"reduced form of a zero-factor product is not 0*u: {key}")
            if key in seen:
                if seen[key] != k:
                    raise InvariantViolation("two equations of E share a left-hand side")
                continue
            seen[key] = k
            entries.append((D.expand(core.right, expand_budget), k))
    system = ReducedSystem(tuple(entries))
    problems = system.violations()
    if problems:
        raise InvariantViolation("extracted system is not reduced: " + "; ".join(problems))
    return system


def build_model_valuation(w: Witness, system: ReducedSystem | None = None,
                          unary_budget: int = 10**6) -> dict[int, Term]:
    """Labelled variables go to their numeral, the rest to themselves."""
    val: dict[int, Term] = {}
    for j, (t, _) in enumerate(w.system):
        for path, u in subterm_occurrences(t):
            if u.op is VAR_OP:
                lab = w.labels.get((j, path))
                if lab is not None:
                    val[u.index] = unum(lab, unary_budget)
                else:
                    val.setdefault(u.index, u)
    return val


def model_check(w: Witness, system: ReducedSystem, valuation: dict[int, Term],
                max_nodes: int = 10**6) -> bool:
    """Each t_j evaluates to S^{n_j} 0 in the term model of ``system``."""
    for t, n in w.system:
        if reduced_model_eval(t, valuation, system, max_nodes=max_nodes) is not unum(n, max_nodes):
            return False
    return True


def render_label_image(w: Witness, eq: int, path: Path, names=None) -> str:
    """u_l as text, labelled proper subterms shown as #k."""
    path = tuple(path)
    u = subterm_at(w.system[eq][0], path)
    def build(v, p, proper):
        lab = w.labels.get((eq, p)) if proper else None
        if lab is not None:
            return f"#{lab}"
        if v.op is SUCC_OP:
            return f"S({build(v.left, p + (Step.SUCC,), True)})"
        if v.op in (ADD_OP, MUL_OP):
            steps = _KID_STEPS[v.op]
            sym = " + " if v.op is ADD_OP else " * "
            return "(" + build(v.left, p + (steps[0],), True) + sym + \
                build(v.right, p + (steps[1],), True) + ")"
        return render_term(v, names)

    return build(u, path, False)


def witness_table(w: Witness, names=None) -> list[tuple[str, str, str, str]]:
    """Rows (u, l(u), u_l, red(u_l)) for each distinct subterm, pre-order."""
    all_keys = occurrence_keys(w)
    rows = []
    seen = set()
    for j, (t, _) in enumerate(w.system):
        for path, u in subterm_occurrences(t):
            if u in seen:
                continue
            seen.add(u)
            lab = w.labels.get((j, path))
            rows.append((
                render_term(u, names, display=True),
                "-" if lab is None else str(lab),
                render_label_image(w, j, path, names),
                D.render_descriptor(D.wrap(*all_keys[j][path]), names),
            ))
    return rows
