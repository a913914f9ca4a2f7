"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 parse error, 3 inconsistent input,
4 cap exceeded, 5 property-check failure.
"""

from __future__ import annotations

import argparse
import cmd
import json
import os
import sys
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Any, TextIO

from . import basefile
from .accessibility import RankedBase, cut_at, cut_at_level, degree, is_bad_cut
from .context import (
    Context,
    Desideratum,
    Goal,
    achievable_goals,
    construct_context,
    context_from_cut,
    select_optimal,
    verify_theorem1,
)
from .errors import (
    InconsistentBase,
    InconsistentEvidence,
    LimitExceeded,
    ObrError,
    ParseError,
    RankingError,
)
from .limits import current_limits, using_limits
from .revision import Policy, RevisionOutcome, revise
from .syntax import atoms_in_order, parse
from .verifier import PROPERTIES, run_case, summarize, sweep

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_INCONSISTENT, EXIT_LIMIT, EXIT_CHECK = range(6)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def exit_code(exc: BaseException) -> int:
    if isinstance(exc, ParseError):
        return EXIT_PARSE
    if isinstance(exc, (InconsistentBase, InconsistentEvidence, RankingError)):
        return EXIT_INCONSISTENT
    if isinstance(exc, LimitExceeded):
        return EXIT_LIMIT
    return EXIT_USAGE


# -- rendering ------------------------------------------------------------

def _strs(xs) -> list[str]:
    return [str(x) for x in xs]


def _set(xs) -> str:
    return "{" + ", ".join(map(str, xs)) + "}"


def revision_json(out: RevisionOutcome) -> dict[str, Any]:
    return {
        "retained": _strs(out.retained),
        "retracted": _strs(out.retracted),
        "added": str(out.added),
        "ranking": basefile.to_json(out.new_ranking),
    }


def revision_text(out: RevisionOutcome) -> str:
    return "\n".join([
        f"retained: {_set(out.retained)}",
        f"retracted: {_set(out.retracted)}",
        f"added: {out.added}",
        f"ranking: {out.new_ranking}",
    ])


def context_json(rb: RankedBase, ctx: Context) -> dict[str, Any]:
    e = ctx.effort(rb)
    return {
        "negA": _strs(ctx.neg_a_part),
        "goal": _strs(ctx.goal_part),
        "negGoal": _strs(ctx.neg_goal_part),
        "slice": _strs(ctx.base_slice),
        "target": str(ctx.goal.formula),
        "method": ctx.method,
        "effort": {"accessibility": e.accessibility, "size": e.size},
    }


def context_text(rb: RankedBase, ctx: Context) -> str:
    e = ctx.effort(rb)
    lines = [
        f"goal: {ctx.goal}",
        f"negA part: {_set(ctx.neg_a_part)}",
        f"goal part: {_set(ctx.goal_part)}",
    ]
    if len(ctx.neg_goal_part):
        lines.append(f"negated-goal part: {_set(ctx.neg_goal_part)}")
    lines += [f"slice: {_set(ctx.base_slice)}", f"effort: accessibility {e.accessibility}, size {e.size}"]
    return "\n".join(lines)


# -- session --------------------------------------------------------------

@dataclass
class SessionState:
    initial: RankedBase
    current: RankedBase
    history: list[RevisionOutcome] = field(default_factory=list)
    desideratum: Desideratum | None = None
    policy: Policy = Policy.ACCESSIBILITY

    @classmethod
    def start(cls, rb: RankedBase, policy: Policy = Policy.ACCESSIBILITY) -> SessionState:
        return cls(rb, rb, [], None, policy)

    def revise(self, a) -> RevisionOutcome:
        out = revise(self.current, a, self.policy)
        self.history.append(out)
        self.current = out.new_ranking
        return out

    def replay(self) -> RankedBase:
        rb = self.initial
        for out in self.history:
            rb = revise(rb, out.added, self.policy).new_ranking
        return rb

    def undo(self) -> RevisionOutcome:
        if not self.history:
            raise UsageError("nothing to undo")
        out = self.history.pop()
        self.current = self.replay()
        return out


# -- commands -------------------------------------------------------------

@dataclass
class Output:
    text: str
    data: dict[str, Any]
    code: int = EXIT_OK


def _goal_arg(text: str) -> Goal:
    return Goal.single(parse(text))


def _read_lines(path: str) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return [ln.split("#", 1)[0].strip() for ln in fh if ln.split("#", 1)[0].strip()]


def _desideratum(path: str) -> Desideratum:
    return Desideratum.of(*_read_lines(path))


def cmd_parse(args) -> Output:
    formulas = [parse(t) for t in args.formula]
    return Output(
        "\n".join(map(str, formulas)),
        {"formulas": [{"formula": str(f), "atoms": list(atoms_in_order(f))} for f in formulas]},
    )


def cmd_degree(args) -> Output:
    rb = basefile.load(args.base)
    f = parse(args.formula)
    d = degree(rb, f, method=args.method)
    return Output(str(d), {"formula": str(f), "degree": d})


def cmd_order(args) -> Output:
    rb = basefile.load(args.base)
    f, g = parse(args.left), parse(args.right)
    df, dg = degree(rb, f), degree(rb, g)
    rel = "=" if df == dg else ("<" if df < dg else ">")
    return Output(
        f"{f} {rel} {g}  (degrees {df}, {dg})",
        {"left": str(f), "right": str(g), "leq": df <= dg, "geq": df >= dg,
         "degrees": {"left": df, "right": dg}},
    )


def cmd_cut(args) -> Output:
    rb = basefile.load(args.base)
    if args.level is not None:
        cut = cut_at_level(rb, args.level)
    elif args.formula is not None:
        cut = cut_at(rb, parse(args.formula))
    else:
        raise UsageError("cut needs a formula or --level")
    bad = is_bad_cut(rb, cut)
    text = f"level: {cut.level}\nslice: {_set(cut.base_slice)}"
    text += f"\nbad cut: derives {bad.culprit} (rank {bad.rank})" if bad else "\nbad cut: no"
    data = {
        "level": cut.level,
        "base": [{"rank": rb.rank(f), "formula": str(f)} for f in cut.base_slice],
        "bad_cut": {"culprit": str(bad.culprit), "rank": bad.rank} if bad else None,
    }
    return Output(text, data)


def cmd_context(args) -> Output:
    rb = basefile.load(args.base)
    a = parse(args.evidence)
    policy = Policy(args.policy)
    if args.goal is not None:
        goals = [_goal_arg(args.goal)]
    elif args.desideratum is not None:
        goals = achievable_goals(rb, a, _desideratum(args.desideratum), policy)
        if not goals:
            return Output("no goal of the desideratum is achievable by this evidence",
                          {"context": None, "achievable": []}, EXIT_CHECK)
    else:
        raise UsageError("context needs --goal or --desideratum")
    g = goals[0]
    candidates = [construct_context(rb, a, g, policy, complete_negated_goal=not args.literal)]
    if args.cuts:
        candidates.append(context_from_cut(rb, a, g, policy))
    ctx = select_optimal(rb, candidates)
    k = current_limits().exhaustive_atoms if args.classes else None
    report = verify_theorem1(rb, a, ctx, policy, k)
    text = context_text(rb, ctx)
    if len(goals) > 1:
        text = f"achievable goals: {', '.join(map(str, goals))}\n" + text
    text += "\nchecks: " + ", ".join(f"{n} {'ok' if v else 'FAIL'}" for n, v in report.flags().items())
    data = {"context": context_json(rb, ctx), "achievable": _strs(goals), "checks": report.flags()}
    return Output(text, data, EXIT_OK if report.passed else EXIT_CHECK)


def cmd_revise(args) -> Output:
    rb = basefile.load(args.base)
    out = revise(rb, parse(args.evidence), Policy(args.policy))
    if args.output:
        basefile.dump(out.new_ranking, args.output)
    return Output(revision_text(out), {"revision": revision_json(out), "base": basefile.to_json(out.new_ranking)})


def cmd_iterate(args) -> Output:
    session = SessionState.start(basefile.load(args.base), Policy(args.policy))
    for step, line in enumerate(_read_lines(args.evidence)):
        try:
            session.revise(parse(line))
        except ObrError as exc:
            exc.step = step
            raise
    if args.output:
        basefile.dump(session.current, args.output)
    blocks = [f"step {i}: {o.added}\n" + revision_text(o) for i, o in enumerate(session.history)]
    return Output(
        "\n\n".join(blocks) if blocks else f"ranking: {session.current}",
        {"revisions": [revision_json(o) for o in session.history], "base": basefile.to_json(session.current)},
    )


def cmd_verify(args) -> Output:
    if args.case is not None:
        results = [run_case(args.property, args.seed, args.case, args.policy)]
    else:
        results = sweep(args.property, args.trials, args.seed, policy=args.policy, workers=args.workers)
    summary = summarize(args.property, results)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            json.dump([r.to_dict() for r in results], fh, indent=2, sort_keys=True)
    text = f"{args.property}: {summary['passes']}/{summary['trials']} pass"
    for cex in summary["failures"][:5]:
        text += f"\n  counterexample: {json.dumps(cex, sort_keys=True)}"
    return Output(text, {"verify": summary}, EXIT_OK if not summary["failures"] else EXIT_CHECK)


# -- repl -----------------------------------------------------------------

class Repl(cmd.Cmd):
    intro = "obr interactive session; type help for commands."
    prompt = "obr> "

    def __init__(self, session: SessionState, stdin: TextIO | None = None, stdout: TextIO | None = None):
        super().__init__(stdin=stdin, stdout=stdout)
        if stdin is not None:
            self.use_rawinput = False
        self.session = session

    def _say(self, text: str) -> None:
        self.stdout.write(text + "\n")

    def onecmd(self, line: str) -> bool:
        try:
            return super().onecmd(line)
        except (ObrError, UsageError, OSError, ValueError) as exc:
            self._say(f"error: {exc}")
            return False

    def emptyline(self) -> bool:
        return False

    def default(self, line: str) -> None:
        self._say(f"unknown command: {line.split()[0]}")

    def do_show(self, arg: str) -> None:
        """show: print the current ranking"""
        self._say(str(self.session.current))

    def do_degree(self, arg: str) -> None:
        """degree FORMULA: degree of accessibility"""
        self._say(str(degree(self.session.current, parse(arg))))

    def do_order(self, arg: str) -> None:
        """order F ; G: compare two formulas"""
        left, _, right = arg.partition(";")
        df, dg = degree(self.session.current, parse(left)), degree(self.session.current, parse(right))
        self._say(f"{'=' if df == dg else ('<' if df < dg else '>')}  (degrees {df}, {dg})")

    def do_cut(self, arg: str) -> None:
        """cut FORMULA: slice at the formula's level"""
        cut = cut_at(self.session.current, parse(arg))
        bad = is_bad_cut(self.session.current, cut)
        self._say(f"level {cut.level}: {_set(cut.base_slice)}" + (f" (bad: derives {bad.culprit})" if bad else ""))

    def do_revise(self, arg: str) -> None:
        """revise FORMULA: revise the current ranking"""
        self._say(revision_text(self.session.revise(parse(arg))))

    def do_undo(self, arg: str) -> None:
        """undo: drop the last revision"""
        out = self.session.undo()
        self._say(f"undid revision by {out.added}; ranking: {self.session.current}")

    def do_history(self, arg: str) -> None:
        """history: evidence received so far"""
        for i, out in enumerate(self.session.history):
            self._say(f"{i}: {out.added}")

    def do_desideratum(self, arg: str) -> None:
        """desideratum G1 ; G2 ; ...: set basic goals"""
        self.session.desideratum = Desideratum.of(*[g for g in arg.split(";") if g.strip()])
        self._say(f"presupposition: {self.session.desideratum.presupposition}")

    def do_context(self, arg: str) -> None:
        """context EVIDENCE [; GOAL]: build a context (goal from the desideratum if omitted)"""
        evidence, _, goal = arg.partition(";")
        rb, a = self.session.current, parse(evidence)
        if goal.strip():
            g = _goal_arg(goal)
        elif self.session.desideratum is not None:
            goals = achievable_goals(rb, a, self.session.desideratum, self.session.policy)
            if not goals:
                self._say("no achievable goal")
                return
            g = goals[0]
        else:
            raise UsageError("give a goal or set a desideratum first")
        self._say(context_text(rb, construct_context(rb, a, g, self.session.policy)))

    def do_quit(self, arg: str) -> bool:
        """quit: leave the session"""
        return True

    do_exit = do_quit
    do_EOF = do_quit


def cmd_repl(args) -> Output:
    rb = basefile.load(args.base) if args.base else RankedBase.from_pairs([])
    Repl(SessionState.start(rb, Policy(args.policy))).cmdloop()
    return Output("", {})


# -- argument parsing -----------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    def options(suppress: bool) -> argparse.ArgumentParser:
        # subcommands repeat the global options without defaults so that
        # "obr --json degree ..." and "obr degree --json ..." both work
        def d(value):
            return argparse.SUPPRESS if suppress else value
        p = argparse.ArgumentParser(add_help=False)
        p.add_argument("--json", action="store_true", default=d(False), help="emit JSON instead of text")
        p.add_argument("--max-atoms", type=int, default=d(None),
                       help="atom cap for semantic-class sweeps (env OBR_MAX_ATOMS, default 3)")
        p.add_argument("--policy", choices=[x.value for x in Policy], default=d(Policy.ACCESSIBILITY.value),
                       help="remainder selection policy")
        p.add_argument("-o", "--output", default=d(None),
                       help="write the resulting base (or verify cases) to this file")
        return p

    common = options(suppress=True)

    parser = _Parser(prog="obr", description="Accessibility-ranked belief bases: revision and contexts.",
                     parents=[options(suppress=False)])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, func, help: str, base: bool = True) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help, parents=[common])
        if base:
            p.add_argument("-b", "--base", required=True, help="ranked base file")
        p.set_defaults(func=func)
        return p

    p = add("parse", cmd_parse, "parse and print formulas canonically", base=False)
    p.add_argument("formula", nargs="+")

    p = add("degree", cmd_degree, "degree of accessibility of a formula")
    p.add_argument("formula")
    p.add_argument("--method", choices=["strata", "entailment-sets"], default="strata")

    p = add("order", cmd_order, "compare two formulas by accessibility")
    p.add_argument("left")
    p.add_argument("right")

    p = add("cut", cmd_cut, "cut of the base at a formula or level")
    p.add_argument("formula", nargs="?")
    p.add_argument("--level", type=int)

    p = add("context", cmd_context, "build a context for evidence and a goal")
    p.add_argument("evidence")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--goal")
    g.add_argument("--desideratum", help="file of basic goals, one per line")
    p.add_argument("--cuts", action="store_true", help="also consider stratum cuts as candidates")
    p.add_argument("--literal", action="store_true", help="do not complete with a negated-goal entailment set")
    p.add_argument("--classes", action="store_true", help="also check over every semantic class")

    p = add("revise", cmd_revise, "revise the base by one sentence")
    p.add_argument("evidence")

    p = add("iterate", cmd_iterate, "revise by each line of an evidence file in turn")
    p.add_argument("evidence", help="file with one formula per line")

    p = add("verify", cmd_verify, "run a seeded property sweep", base=False)
    p.add_argument("property", choices=list(PROPERTIES))
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--case", type=int, help="replay a single case")
    p.add_argument("--workers", type=int, default=1)

    p = add("repl", cmd_repl, "interactive session", base=False)
    p.add_argument("-b", "--base", help="ranked base file to start from")
    return parser


def _max_atoms(args) -> int | None:
    if args.max_atoms is not None:
        return args.max_atoms
    env = os.environ.get("OBR_MAX_ATOMS")
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"OBR_MAX_ATOMS={env!r} is not an integer") from None
    return None


def run(argv: Sequence[str] | None = None, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        cap = _max_atoms(args)
        overrides = {"exhaustive_atoms": cap} if cap is not None else {}
        with using_limits(**overrides):
            out = args.func(args)
    except (ObrError, UsageError, OSError) as exc:
        code = exit_code(exc) if isinstance(exc, ObrError) else EXIT_USAGE
        step = getattr(exc, "step", None)
        if args.json:
            err = {"error": type(exc).__name__, "message": str(exc)}
            if step is not None:
                err["step"] = step
            stdout.write(json.dumps(err, sort_keys=True) + "\n")
        else:
            prefix = f"step {step}: " if step is not None and not str(exc).startswith("step") else ""
            stderr.write(f"obr: {prefix}{exc}\n")
        return code
    if args.json:
        stdout.write(json.dumps(out.data, sort_keys=True) + "\n")
    elif out.text:
        stdout.write(out.text + "\n")
    return out.code


def main() -> None:
    sys.exit(run())


__all__ = ["run", "main", "build_parser", "SessionState", "Repl", "exit_code"]
