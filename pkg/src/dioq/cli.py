"""Command-line interface.

Exit codes: 0 SAT / success / equal, 1 UNSAT / unequal / not found /
invalid witness, 2 error (including an exhausted budget, which is never
reported as UNSAT).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from importlib import resources

from . import descriptor as D
from . import witness as W
from .decide import (
    DEFAULT_SOL_BUDGET, ExhaustionRecord, InfinityAssignment, NatAssignment, Verdict,
    WitnessCertificate, decide_positive_existential, decide_q, decide_qplus,
    gen_manders_adleman, ma_nat_solvable, nat_oracle,
)
from .errors import BudgetExceeded, DioqError
from .formula import DEFAULT_DNF_BUDGET, parse_formula
from .models import Theory
from .rewrite import DEFAULT_MAX_STEPS, normalize_counting
from .terms import Equation, Parser, Step, TermParseError, parse_term, render_term, var_name

EXIT_OK, EXIT_NO, EXIT_ERROR = 0, 1, 2


@dataclass
class RunConfig:
    theory: Theory = Theory.Q
    output: str = "text"
    budget_steps: int = DEFAULT_MAX_STEPS
    budget_search: int = W.DEFAULT_SEARCH_BUDGET
    budget_dnf: int = DEFAULT_DNF_BUDGET
    batch: str | None = None

    def __post_init__(self):
        self.theory = Theory(self.theory)
        for name in ("budget_steps", "budget_search", "budget_dnf"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name.replace('_', '-')} must be positive")


def load_schema() -> dict:
    """The JSON Schema every --output json record conforms to."""
    text = resources.files("dioq").joinpath("schema/output.schema.json").read_text()
    return json.loads(text)


# -- inputs -------------------------------------------------------------------


def parse_decide_input(text: str, names: list[str]):
    """An equation t = u, or a formula of atoms t = #k joined by & and |."""
    if "&" not in text and "|" not in text:
        p = Parser(text, names)
        try:
            eq = p.equation()
            p.finish()
            return eq
        except TermParseError:
            names.clear()
    return parse_formula(text, names)


def _path_json(path):
    return [s.value for s in path]


# -- reports ------------------------------------------------------------------


def verdict_record(v: Verdict, names) -> dict:
    c = v.certificate
    cert: dict = {"kind": c.kind}
    if isinstance(c, NatAssignment):
        cert["assignment"] = {var_name(i, names): n for i, n in sorted(c.values.items())}
    elif isinstance(c, InfinityAssignment):
        cert["assignment"] = {var_name(i, names): "inf" for i in c.variables}
    elif isinstance(c, WitnessCertificate):
        w = c.witness
        cert["assignment"] = {var_name(i, names): render_term(t, names)
                              for i, t in sorted(c.valuation.items())}
        cert["system"] = [{"term": render_term(t, names), "value": n} for t, n in w.system]
        cert["labels"] = [{"equation": j, "path": _path_json(p), "value": k}
                          for j, p, k in w.sorted_labels()]
        cert["reduced_system"] = [{"term": render_term(t, names), "value": n}
                                  for t, n in c.system.entries]
    elif isinstance(c, ExhaustionRecord):
        cert["reason"] = c.reason
        cert["space_size"] = c.space_size
        cert["explored"] = c.explored
    return {"status": v.status, "theory": v.theory.value, "certificate": cert,
            "stats": dict(v.stats)}


def error_record(exc: Exception, command: str, theory: Theory | None = None) -> dict:
    rec = {"status": "error", "command": command,
           "error": {"type": type(exc).__name__, "message": str(exc),
                     "budget": isinstance(exc, BudgetExceeded)}}
    if theory is not None:
        rec["theory"] = theory.value
    return rec


def verdict_text(v: Verdict, names) -> str:
    c = v.certificate
    lines = [f"{v.status.upper()} (theory {v.theory.value})"]
    if isinstance(c, NatAssignment):
        lines.append("natural-number solution: " + (", ".join(
            f"{var_name(i, names)} = {n}" for i, n in sorted(c.values.items())) or "(no variables)"))
    elif isinstance(c, InfinityAssignment):
        lines.append("both sides are infinite when every variable is infinite")
    elif isinstance(c, WitnessCertificate):
        rows = W.witness_table(c.witness, names)
        head = ("u", "label", "u_l", "red(u_l)")
        widths = [max(len(r[i]) for r in rows + [head]) for i in range(4)]
        lines.append("witness:")
        for r in [head] + rows:
            lines.append("  " + "  ".join(s.ljust(w) for s, w in zip(r, widths)).rstrip())
        if c.system.entries:
            lines.append("reduced system: " + ", ".join(
                f"0 * {render_term(t, names, display=True)} = #{n}" for t, n in c.system.entries))
        else:
            lines.append("reduced system: (empty)")
        if c.valuation:
            lines.append("model valuation: " + ", ".join(
                f"{var_name(i, names)} -> {render_term(t, names, display=True)}"
                for i, t in sorted(c.valuation.items())))
    elif isinstance(c, ExhaustionRecord):
        lines.append(f"{c.reason} (labelling space {c.space_size}, explored {c.explored})")
    return "\n".join(lines)


# -- commands -----------------------------------------------------------------


def cmd_decide(cfg: RunConfig, text: str) -> tuple[int, dict, str]:
    names: list[str] = []
    inp = parse_decide_input(text, names)
    if not isinstance(inp, Equation):
        v = decide_positive_existential(inp, cfg.theory, cfg.budget_search, cfg.budget_dnf)
    elif cfg.theory is Theory.Q:
        v = decide_q(inp, cfg.budget_search)
    else:
        v = decide_qplus(inp, cfg.budget_search or DEFAULT_SOL_BUDGET)
    rec = verdict_record(v, names)
    return (EXIT_OK if v.sat else EXIT_NO), rec, verdict_text(v, names)


def cmd_normalize(cfg: RunConfig, text: str) -> tuple[int, dict, str]:
    names: list[str] = []
    t = parse_term(text, names)
    d = D.desc_of_reduced(t)
    rec = {"command": "normalize", "descriptor": D.render_descriptor(d, names)}
    try:
        r, steps = normalize_counting(t, max_steps=cfg.budget_steps)
        rec.update(term=render_term(r, names), steps=steps, budget_exceeded=False)
        shown = rec["term"]
    except BudgetExceeded:
        rec.update(term=None, steps=None, budget_exceeded=True)
        shown = "(normal form exceeds the rewrite budget)"
    num = D.numeral_value(d)
    rec["numeral"] = num
    return EXIT_OK, rec, f"term: {shown}\ndescriptor: {rec['descriptor']}"


def cmd_descriptor(cfg: RunConfig, mode: str, texts: list[str]) -> tuple[int, dict, str]:
    names: list[str] = []
    if mode == "min":
        if len(texts) != 1:
            raise ValueError("descriptor min takes one descriptor")
        d = D.minimize(D.parse_descriptor(texts[0], names))
        s = D.render_descriptor(d, names)
        rec = {"command": "descriptor", "mode": "min", "descriptor": s,
               "numeral": D.numeral_value(d)}
        return EXIT_OK, rec, s
    if len(texts) != 2:
        raise ValueError("descriptor eq takes two descriptors")
    d1 = D.minimize(D.parse_descriptor(texts[0], names))
    d2 = D.minimize(D.parse_descriptor(texts[1], names))
    eq = d1 == d2
    rec = {"command": "descriptor", "mode": "eq", "equal": eq,
           "left": D.render_descriptor(d1, names), "right": D.render_descriptor(d2, names)}
    return (EXIT_OK if eq else EXIT_NO), rec, "equal" if eq else "not equal"


def cmd_oracle(cfg: RunConfig, bound: int, text: str) -> tuple[int, dict, str]:
    names: list[str] = []
    inp = parse_decide_input(text, names)
    a = nat_oracle(inp, bound)
    rec = {"command": "oracle", "bound": bound, "found": a is not None,
           "assignment": None if a is None else {var_name(i, names): n for i, n in sorted(a.items())}}
    if a is None:
        return EXIT_NO, rec, f"no solution with values <= {bound}"
    shown = ", ".join(f"{k} = {n}" for k, n in rec["assignment"].items()) or "(no variables)"
    return EXIT_OK, rec, shown


def cmd_gen(cfg: RunConfig, family: str, a: int, b: int) -> tuple[int, dict, str]:
    if family != "ma":
        raise ValueError(f"unknown generator {family!r}")
    gen_manders_adleman(a, b)           # validates a, b
    text = f"((x*x) + (#{a}*y)) = #{b}"
    rec = {"command": "gen", "equation": text, "nat_solvable": ma_nat_solvable(a, b)}
    return EXIT_OK, rec, text


def load_witness(data: dict, names: list[str]) -> W.Witness:
    system = []
    for entry in data["system"]:
        system.append((parse_term(entry["term"], names), int(entry["value"])))
    labels = {}
    for entry in data.get("labels", []):
        path = tuple(Step(s) for s in entry["path"])
        labels[(int(entry.get("equation", 0)), path)] = int(entry["value"])
    return W.Witness(tuple(system), labels)


def cmd_witness(cfg: RunConfig, mode: str, path: str) -> tuple[int, dict, str]:
    if mode != "check":
        raise ValueError(f"unknown witness mode {mode!r}")
    with open(path) as fh:
        data = json.load(fh)
    if "certificate" in data:
        data = data["certificate"]
    names: list[str] = []
    w = load_witness(data, names)
    res = W.check_witness(w)
    rec = {"command": "witness", "valid": res.ok, "violations": [str(v) for v in res.violations]}
    if res.ok:
        E = W.extract_reduced_system(w)
        rec["reduced_system"] = [{"term": render_term(t, names), "value": n} for t, n in E.entries]
        return EXIT_OK, rec, "valid witness"
    return EXIT_NO, rec, "invalid witness:\n" + "\n".join(f"  {v}" for v in rec["violations"])


# -- driver -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--theory", choices=[t.value for t in Theory], default="q")
    common.add_argument("--output", choices=["text", "json"], default="text")
    common.add_argument("--budget-steps", type=int, default=DEFAULT_MAX_STEPS,
                        help="rewrite steps allowed when normalizing")
    common.add_argument("--budget-search", type=int, default=W.DEFAULT_SEARCH_BUDGET,
                        help="candidate labels (Q) or sol steps (Q+) allowed per decision")
    common.add_argument("--budget-dnf", type=int, default=DEFAULT_DNF_BUDGET,
                        help="maximum number of disjuncts after DNF conversion")
    common.add_argument("--batch", metavar="FILE",
                        help="read one input per line from FILE ('-' for stdin); "
                             "writes one JSON record per line")

    p = argparse.ArgumentParser(prog="dioq", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("decide", parents=[common], help="decide an equation or positive formula")
    d.add_argument("input", nargs="?", help="equation 't = u' or formula of 't = #k' atoms")
    d.add_argument("-f", "--file", help="read the equation or formula from a file")

    n = sub.add_parser("normalize", parents=[common], help="reduced form and minimal descriptor")
    n.add_argument("input", nargs="?")

    ds = sub.add_parser("descriptor", parents=[common], help="minimize or compare descriptors")
    ds.add_argument("mode", choices=["min", "eq"])
    ds.add_argument("inputs", nargs="*")

    o = sub.add_parser("oracle", parents=[common], help="brute-force search over the naturals")
    o.add_argument("kind", choices=["nat"])
    o.add_argument("--bound", type=int, default=10)
    o.add_argument("input", nargs="?")

    g = sub.add_parser("gen", parents=[common], help="generate instances")
    g.add_argument("family", choices=["ma"])
    g.add_argument("a", type=int)
    g.add_argument("b", type=int)

    w = sub.add_parser("witness", parents=[common], help="check a witness file")
    w.add_argument("mode", choices=["check"])
    w.add_argument("path", nargs="?")
    return p


def _run_one(args, cfg: RunConfig, item: str | None) -> tuple[int, dict, str]:
    c = args.command
    if c == "decide":
        return cmd_decide(cfg, item)
    if c == "normalize":
        return cmd_normalize(cfg, item)
    if c == "descriptor":
        if item is not None:
            return cmd_descriptor(cfg, args.mode, item.split("\t") if args.mode == "eq" else [item])
        return cmd_descriptor(cfg, args.mode, args.inputs)
    if c == "oracle":
        return cmd_oracle(cfg, args.bound, item)
    if c == "gen":
        if item is not None:
            a, b = item.split()
            return cmd_gen(cfg, args.family, int(a), int(b))
        return cmd_gen(cfg, args.family, args.a, args.b)
    return cmd_witness(cfg, args.mode, item)


def _guarded(args, cfg, item):
    try:
        return _run_one(args, cfg, item)
    except (DioqError, ValueError, KeyError, OSError, RecursionError) as exc:
        theory = cfg.theory if args.command == "decide" else None
        return EXIT_ERROR, error_record(exc, args.command, theory), f"error: {exc}"


def main(argv=None) -> int:
    parser = build_parser()
    args, extra = parser.parse_known_args(argv)
    # argparse cannot place an optional positional after an option
    # ("oracle nat --bound 12 'x = #3'"), so pick it up here
    slot = {"witness": "path"}.get(args.command, "input")
    if len(extra) == 1 and not extra[0].startswith("--") and getattr(args, slot, 0) is None:
        setattr(args, slot, extra[0])
    elif extra:
        parser.error("unrecognized arguments: " + " ".join(extra))
    try:
        cfg = RunConfig(args.theory, args.output, args.budget_steps, args.budget_search,
                        args.budget_dnf, args.batch)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR

    if cfg.batch is not None:
        fh = sys.stdin if cfg.batch == "-" else open(cfg.batch)
        worst = EXIT_OK
        with fh:
            for line in fh:
                line = line.rstrip("\n")
                if not line.strip():
                    continue
                code, rec, _ = _guarded(args, cfg, line)
                rec.setdefault("input", line)
                print(json.dumps(rec), flush=True)
                if code == EXIT_ERROR:
                    worst = EXIT_ERROR
        return worst

    item = None
    if args.command == "decide":
        item = args.input
        if args.file:
            with open(args.file) as fh:
                item = fh.read().strip()
    elif args.command in ("normalize", "oracle"):
        item = args.input
    elif args.command == "witness":
        item = args.path
    if item is None and args.command in ("decide", "normalize", "oracle", "witness"):
        parser.error(f"{args.command} needs an input")

    code, rec, text = _guarded(args, cfg, item)
    if cfg.output == "json":
        print(json.dumps(rec, indent=2))
    else:
        print(text, file=sys.stderr if code == EXIT_ERROR else sys.stdout)
    return code
