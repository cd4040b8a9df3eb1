"""Command-line front end.

Exit status: 0 when the command's expectations hold, 2 when they fail,
1 on usage, input or IO errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Callable, Optional, Sequence, TextIO

from . import core, shiftspace as ss
from .counterexamples import obstruction_report, xi_convergence_demo, zero_step_report

SCHEMA = "shiftlab/1"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit 2, which means "failed expectation" here
        raise UsageError(message)


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {text}")
    return value


def _natural(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected an integer >= 0, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    g = common.add_argument_group("budget")
    g.add_argument("--truncation", type=_positive, default=16, help="symbols searched are 0..n-1")
    g.add_argument("--threshold", type=int, default=8, help="witness count standing in for 'infinitely many'")
    g.add_argument("--period-bound", type=_positive, default=8, help="max period of searched continuations")
    g.add_argument("--depth", type=_positive, default=64, help="unrolling depth for cross-checks")
    common.add_argument("--json", metavar="PATH", help="also write the JSON report to PATH")
    common.add_argument("--audit", action="store_true", help="re-parse the JSON report and re-verify its witnesses")

    parser = _Parser(prog="shiftlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("verify-prop1", parents=[common], help="replay the (M+1)-step obstruction for M >= 1")
    p.add_argument("--m", type=_positive, required=True)
    p = sub.add_parser("zero-step", parents=[common], help="the M = 0 case")
    p.add_argument("--x0", type=_natural, default=0)
    p = sub.add_parser("spectrum", parents=[common], help="lengths of finite elements")
    p.add_argument("--spec", required=True, metavar="PATH")
    p.add_argument("--max-len", type=_natural, required=True)
    p = sub.add_parser("periodic", parents=[common], help="points fixed by a power of the shift")
    p.add_argument("--spec", required=True, metavar="PATH")
    p.add_argument("--period", type=_positive, required=True)
    p = sub.add_parser("member", parents=[common], help="membership of one point")
    p.add_argument("--spec", required=True, metavar="PATH")
    p.add_argument("--point", required=True, metavar="JSON")
    p = sub.add_parser("converge-demo", parents=[common], help="convergence certificate of the periodic family")
    p.add_argument("--m", type=_positive, required=True)
    sub.add_parser("sigma-demo", parents=[common], help="discontinuity of the shift map at Ø")
    return parser


def _load_spec(path: str) -> ss.ShiftSpec:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc.msg}") from exc
    try:
        return ss.spec_from_json(data)
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise UsageError(f"{path} is not a valid shift spec: {exc}") from exc


def _load_point(text: str) -> core.Point:
    try:
        return core.point_from_json(json.loads(text))
    except (json.JSONDecodeError, KeyError, TypeError, ValueError, AttributeError) as exc:
        raise UsageError(f"--point is not a valid point: {exc}") from exc


def _word(w) -> str:
    return core.fmt_word(w)


# -- commands: each returns (ok, text lines, json payload) ------------------------------------


def _cmd_verify_prop1(args, budget):
    r = obstruction_report(args.m, budget)
    lines = [f"shift: {ss.describe(r.spec)}"]
    if r.condition1:
        c1 = r.condition1
        lines.append(
            f"condition (1): base {_word(c1.base)}, {len(c1.witnesses)} witnesses "
            f"({c1.checked_equalities} cyclic windows each)"
        )
    else:
        lines.append("condition (1): NOT FOUND within budget")
    for row in r.condition2.rows:
        counts = ", ".join(f"n={t}: {c}" for t, c in row.counts.items())
        lines.append(f"condition (2): {_word(row.sample)} -> {counts} {'STABLE' if row.stable else 'GROWING'}")
    for k, w in r.spectrum.items():
        lines.append(f"length {k}: " + (f"verified by {_word(w)}" if w is not None else "absent up to budget"))
    if r.xi_convergence:
        lines.append("xi convergence n0(m): " + " ".join(str(t) for t in r.xi_convergence.thresholds()))
    lines.append(f"conclusion: {r.conclusion}")
    return r.passes, lines, r.to_dict()


def _cmd_zero_step(args, budget):
    r = zero_step_report(args.x0, budget)
    lines = [
        f"shift: {ss.describe(ss.Step(ss.ZeroStepExample(args.x0)))}",
        f"condition (i): {'every symbol has a follower' if r.condition_i else 'FAILED'}",
        f"condition (ii): rich symbols {list(r.rich_symbols)}",
        f"length-1 elements verified: {list(r.verified_length_one)}",
        f"full shift length-1 elements verified: {len(r.full_shift_verified)}",
        f"conclusion: {r.conclusion}",
    ]
    return r.passes, lines, r.to_dict()


def _cmd_spectrum(args, budget):
    spec = _load_spec(args.spec)
    spectrum = ss.length_spectrum(spec, args.max_len, budget)
    lines = [f"spectrum of {ss.describe(spec)}"]
    lines += [
        f"length {k}: " + (f"verified by {_word(w)}" if w is not None else "absent up to budget")
        for k, w in spectrum.items()
    ]
    payload = {
        "spec": ss.spec_to_json(spec),
        "spectrum": [
            {"length": k, "status": "verified" if w is not None else "absent", "witness": None if w is None else list(w)}
            for k, w in spectrum.items()
        ],
    }
    return True, lines, payload


def _cmd_periodic(args, budget):
    spec = _load_spec(args.spec)
    points = ss.periodic_points(spec, args.period, budget)
    lines = [f"{len(points)} points of {ss.describe(spec)} fixed by shift^{args.period}"]
    lines += [f"  {p}" for p in points]
    payload = {"spec": ss.spec_to_json(spec), "q": args.period, "points": [core.point_to_json(p) for p in points]}
    return True, lines, payload


def _cmd_member(args, budget):
    spec = _load_spec(args.spec)
    point = _load_point(args.point)
    verdict = ss.membership(spec, point, budget)
    payload = {"spec": ss.spec_to_json(spec), "point": core.point_to_json(point)}
    if isinstance(verdict, bool):
        payload.update(exact=True, member=verdict)
        lines = [f"{point}: {'IN' if verdict else 'OUT'} (exact)"]
        return verdict, lines, payload
    payload.update(
        exact=False,
        status=verdict.status.value,
        counts={str(t): c for t, c in verdict.counts_at.items()},
        witnesses=[{"symbol": a, "continuation": core.point_to_json(y)} for a, y in verdict.witnesses],
    )
    counts = ", ".join(f"n={t}: {c}" for t, c in verdict.counts_at.items())
    lines = [f"{point}: {verdict.status.value} ({counts})"]
    return verdict.verified, lines, payload


def _cmd_converge_demo(args, budget):
    profile = xi_convergence_demo(args.m, budget)
    lines = [
        f"periodic family for M={args.m} -> {profile.limit}",
        "n0(m): " + " ".join("FAIL" if t is None else str(t) for t in profile.thresholds()),
    ]
    return profile.passes, lines, {"M": args.m, "convergence": profile.to_dict()}


def _cmd_sigma_demo(args, budget):
    demo = core.sigma_discontinuity_demo()
    fmt = lambda prof: " ".join("FAIL" if t is None else str(t) for t in prof.thresholds())  # noqa: E731
    lines = [
        f"x_j = (j-1) 0^∞ -> Ø, n0(m): {fmt(demo.to_empty)}",
        "shift(x_j) = " + str(demo.shifted[1]) + " for every j",
        f"shift(x_j) -> shift(Ø) = Ø, n0(m): {fmt(demo.shifted_to_empty)}",
        "shift map is " + ("not continuous at Ø" if demo.demonstrates_discontinuity else "UNDETERMINED"),
    ]
    return demo.demonstrates_discontinuity, lines, demo.to_dict()


COMMANDS: dict[str, Callable] = {
    "verify-prop1": _cmd_verify_prop1,
    "zero-step": _cmd_zero_step,
    "spectrum": _cmd_spectrum,
    "periodic": _cmd_periodic,
    "member": _cmd_member,
    "converge-demo": _cmd_converge_demo,
    "sigma-demo": _cmd_sigma_demo,
}


# -- audit ---------------------------------------------------------------------------------------


def audit(command: str, report: dict, budget: ss.SearchBudget) -> list[str]:
    """Re-verify every witness embedded in a parsed JSON report.

    Returns a list of problems (empty when the audit passes).
    """
    problems = []
    spec = ss.spec_from_json(report["spec"]) if "spec" in report else None
    if command in ("verify-prop1", "spectrum"):
        for row in report["spectrum"]:
            if row["status"] == "verified" and not ss.in_fin(spec, row["witness"], budget).verified:
                problems.append(f"spectrum witness {row['witness']} does not re-verify")
            if row["status"] == "verified":
                for a, y in ss.in_fin(spec, row["witness"], budget).witnesses:
                    z = core.concat(tuple(row["witness"]) + (a,), y)
                    if not (ss.in_inf(spec, z) and ss.in_inf_by_prefix(spec, z, budget.depth)):
                        problems.append(f"continuation {z} of {row['witness']} is not in the shift")
    if command == "verify-prop1" and report["condition1"]:
        c1 = report["condition1"]
        for s in c1["witnesses"]:
            p = core.EventuallyPeriodic((), tuple(c1["base"]) + (s,))
            if not ss.in_inf(spec, p):
                problems.append(f"condition (1) witness {s} gives a point outside the shift")
    if command == "periodic":
        for data in report["points"]:
            p = core.point_from_json(data)
            if not ss.in_inf(spec, p) or core.shift_n(p, report["q"]) != p:
                problems.append(f"periodic point {p} does not re-verify")
    if command == "member":
        point = core.point_from_json(report["point"])
        verdict = ss.membership(spec, point, budget)
        if report["exact"]:
            if verdict != report["member"] or ss.in_inf_by_prefix(spec, point, budget.depth) != verdict:
                problems.append("exact membership does not re-verify")
        else:
            prefix = core.prefix(point, budget.depth)
            for w in report["witnesses"]:
                y = core.point_from_json(w["continuation"])
                if not ss.in_inf(spec, core.concat(prefix + (w["symbol"],), y)):
                    problems.append(f"extension witness {w['symbol']} does not re-verify")
    if command == "zero-step":
        spec0 = ss.Step(ss.ZeroStepExample(report["x0"]))
        for x in report["length_one_verified"]:
            if not ss.in_fin(spec0, (x,), budget).verified:
                problems.append(f"length-1 element {x} does not re-verify")
    if command in ("sigma-demo", "converge-demo"):
        profile = report["to_empty"] if command == "sigma-demo" else report["convergence"]
        if profile["passes"] and any(r["n0"] is None for r in profile["rows"]):
            problems.append("convergence profile is inconsistent")
    return problems


# -- entry point -----------------------------------------------------------------------------------


def run(argv: Optional[Sequence[str]] = None, stdout: TextIO = None, stderr: TextIO = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        try:
            budget = ss.SearchBudget(args.truncation, args.threshold, args.period_bound, args.depth)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        try:
            ok, lines, payload = COMMANDS[args.command](args, budget)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        report = {"schema": SCHEMA, "command": args.command, **payload}
        text = json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False)
        if args.audit:
            problems = audit(args.command, json.loads(text), budget)
            lines.append("audit: ok" if not problems else f"audit: {len(problems)} problem(s)")
            lines += [f"  {p}" for p in problems]
            ok = ok and not problems
        if args.json:
            try:
                Path(args.json).write_text(text + "\n")
            except OSError as exc:
                raise UsageError(f"cannot write {args.json}: {exc.strerror}") from exc
    except UsageError as exc:
        print(f"shiftlab: error: {exc}", file=stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    print("\n".join(lines), file=stdout)
    return 0 if ok else 2


def main() -> None:
    sys.exit(run())
