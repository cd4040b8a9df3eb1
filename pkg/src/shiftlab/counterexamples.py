"""(M+1)-step shifts that are not conjugate to any M-step shift.

For M >= 1 the shift is cut out by the window-(M+2) rule "first symbol
equals last symbol". Every (M+1)-periodic sequence passes that rule, so
the periodic points ``(x_1..x_M s)^∞`` exist for every s and converge to
the finite word ``x_1..x_M``. In any M-step shift, such a family forces a
finite point of length 2M+1 (the z-lemma); the rule, on the other hand,
leaves each word of length M+1 with a single possible next symbol, so the
shift has no finite points of length M+1 or more. Conjugacies preserve
lengths, which settles it.

For M = 0 the obstruction is counting: a 0-step shift over an infinite
alphabet is a full shift and has infinitely many finite points of
length 1, while the window-2 rule from :func:`zero_step_predicate` has
exactly one.

Everything here is a finite check inside a :class:`SearchBudget`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .core import (
    ConvergenceProfile,
    EventuallyPeriodic,
    Finite,
    Point,
    Word,
    as_word,
    concat,
    convergence_profile,
    fmt_word,
    point_to_json,
    shift_n,
)
from .shiftspace import (
    FirstEqualsLast,
    FullShift,
    SearchBudget,
    ShiftSpec,
    Step,
    Table,
    WindowPredicate,
    WitnessVerdict,
    ZeroStepExample,
    in_fin,
    in_inf,
    length_spectrum,
    spec_to_json,
)


def theorem_predicate(M: int) -> FirstEqualsLast:
    if M < 1:
        raise ValueError("the first-equals-last construction needs M >= 1; use zero_step_predicate for M = 0")
    return FirstEqualsLast(M + 2)


def zero_step_predicate(x0: int) -> ZeroStepExample:
    return ZeroStepExample(x0)


def constant_one(window: int = 2) -> Table:
    """Window predicate that accepts everything (the full shift as a step shift)."""
    return Table(window, 0, (), default=1)


def _check_window(pred: WindowPredicate, M: int) -> None:
    if M < 1:
        raise ValueError("M must be >= 1")
    if pred.window != M + 2:
        raise ValueError(f"predicate window {pred.window} does not match M + 2 = {M + 2}")


# -- condition (1) -------------------------------------------------------------------------


@dataclass(frozen=True)
class ConditionOneWitness:
    base: Word
    witnesses: tuple[int, ...]
    checked_equalities: int  # cyclic windows evaluated per witness

    def to_dict(self) -> dict:
        return {
            "base": list(self.base),
            "witnesses": list(self.witnesses),
            "checked_equalities": self.checked_equalities,
        }


def cyclic_windows(block: Word, size: int) -> list[Word]:
    """Windows of ``size`` starting at each position of ``block^∞``'s period."""
    q = len(block)
    return [tuple(block[(i + j) % q] for j in range(size)) for i in range(q)]


def check_condition_one(
    pred: WindowPredicate, M: int, budget: SearchBudget
) -> Optional[ConditionOneWitness]:
    """First base x_1..x_M (lexicographic, symbols < n) with at least T symbols
    s for which every cyclic window of ``(x_1..x_M s)^∞`` evaluates to 1.

    None means nothing qualified inside the budget, which is not a refutation.
    """
    _check_window(pred, M)
    n = budget.truncation
    for base in itertools.product(range(n), repeat=M):
        good = tuple(
            s for s in range(n) if all(pred(w) for w in cyclic_windows(base + (s,), M + 2))
        )
        if len(good) >= budget.threshold:
            return ConditionOneWitness(base, good, M + 1)
    return None


# -- condition (2) -------------------------------------------------------------------------


@dataclass(frozen=True)
class ConditionTwoRow:
    sample: Word
    counts: dict[int, int]

    @property
    def stable(self) -> bool:
        return len(set(self.counts.values())) == 1

    def to_dict(self) -> dict:
        return {
            "sample": list(self.sample),
            "counts": {str(t): c for t, c in self.counts.items()},
            "trend": "STABLE" if self.stable else "GROWING",
        }


@dataclass(frozen=True)
class ConditionTwoReport:
    rows: tuple[ConditionTwoRow, ...]
    analytic: bool  # the first-equals-last rule admits exactly one next symbol

    @property
    def stable(self) -> bool:
        return all(r.stable for r in self.rows)

    def to_dict(self) -> dict:
        return {"analytic": self.analytic, "stable": self.stable, "rows": [r.to_dict() for r in self.rows]}


def check_condition_two(
    pred: WindowPredicate, M: int, budget: SearchBudget, samples: Sequence[Sequence[int]]
) -> ConditionTwoReport:
    """How many a < t give pred(w·a) = 1, at t = n // 2 and t = n.

    Equal counts are evidence of finiteness (STABLE), not a proof; for the
    first-equals-last rule the count is 1 by inspection and ``analytic`` is set.
    """
    _check_window(pred, M)
    n = budget.truncation
    rows = []
    for w in samples:
        w = as_word(w)
        if len(w) != M + 1:
            raise ValueError(f"sample {fmt_word(w)} does not have length M + 1 = {M + 1}")
        counts = {t: sum(pred(w + (a,)) for a in range(t)) for t in sorted({max(1, n // 2), n})}
        rows.append(ConditionTwoRow(w, counts))
    return ConditionTwoReport(tuple(rows), isinstance(pred, FirstEqualsLast))


def default_samples(M: int, budget: SearchBudget) -> list[Word]:
    top = budget.truncation - 1
    return [
        (0,) * (M + 1),
        tuple(range(1, M + 2)),
        tuple(top if i % 2 else 0 for i in range(M + 1)),
    ]


# -- the ξ and z families --------------------------------------------------------------------


def fresh_symbol(base: Sequence[int], j: int) -> int:
    return max(base, default=0) + j


def xi_family(M: int, base: Sequence[int], count: int) -> dict[int, EventuallyPeriodic]:
    """j ↦ (base · s_j)^∞ with pairwise distinct s_j = max(base) + j."""
    base = as_word(base)
    if len(base) != M:
        raise ValueError(f"base must have length M = {M}")
    return {j: EventuallyPeriodic((), base + (fresh_symbol(base, j),)) for j in range(1, count + 1)}


def z_point(y: Sequence[int], s0: int, tail: Point) -> Point:
    """The point y · s0 · tail, for a tail fixed by σ^(M+1) where M = len(y)."""
    y = as_word(y)
    M = len(y)
    if not isinstance(tail, EventuallyPeriodic) or shift_n(tail, M + 1) != tail:
        raise ValueError(f"tail must be an infinite point of period dividing {M + 1}")
    return concat(y + (s0,), tail)


@dataclass(frozen=True)
class ZLemmaReport:
    y: Word
    s0: int
    family: dict[int, EventuallyPeriodic]
    family_in_shift: bool
    z_points: dict[int, Point]
    z_failures: tuple[int, ...]
    limit: Word
    profile: ConvergenceProfile
    limit_verdict: WitnessVerdict

    @property
    def passes(self) -> bool:
        return self.family_in_shift and not self.z_failures and self.profile.passes

    def to_dict(self) -> dict:
        return {
            "y": list(self.y),
            "s0": self.s0,
            "family_in_shift": self.family_in_shift,
            "z_points": {str(k): point_to_json(p) for k, p in self.z_points.items()},
            "z_failures": list(self.z_failures),
            "limit": list(self.limit),
            "limit_length": len(self.limit),
            "convergence": self.profile.to_dict(),
            "limit_in_fin": self.limit_verdict.status.value,
            "passes": self.passes,
        }


def z_lemma_check(
    spec: ShiftSpec, y: Sequence[int], s0: int, count: int, budget: SearchBudget
) -> ZLemmaReport:
    """Replay the z construction inside an M-step shift (M = len(y)).

    With y^k = (y · s_k)^∞ in the shift for distinct s_k, every
    z^k = y · s0 · y^k must be in the shift too, and z^k tends to the finite
    word y · s0 · y of length 2M+1.
    """
    y = as_word(y)
    M = len(y)
    if M < 1:
        raise ValueError("y must be nonempty")
    if not isinstance(spec, Step) or spec.pred.window != M + 1:
        raise ValueError(f"spec must be an M-step shift with window M + 1 = {M + 1}")
    family = {k: EventuallyPeriodic((), y + (fresh_symbol(y, k),)) for k in range(1, count + 1)}
    family_ok = all(in_inf(spec, p) for p in family.values())
    zs = {k: z_point(y, s0, p) for k, p in family.items()}
    failures = tuple(k for k, z in zs.items() if not in_inf(spec, z))
    limit = y + (s0,) + y
    profile = convergence_profile(zs, Finite(limit), count, count)
    return ZLemmaReport(y, s0, family, family_ok, zs, failures, limit, profile, in_fin(spec, limit, budget))


# -- reports ---------------------------------------------------------------------------------


@dataclass(frozen=True)
class ObstructionReport:
    M: int
    spec: ShiftSpec
    budget: SearchBudget
    condition1: Optional[ConditionOneWitness]
    condition2: ConditionTwoReport
    spectrum: dict[int, Optional[Word]]
    xi_convergence: Optional[ConvergenceProfile]
    flags: dict[str, bool] = field(default_factory=dict)

    @property
    def passes(self) -> bool:
        return all(self.flags.values())

    @property
    def conclusion(self) -> str:
        M = self.M
        if not self.passes:
            failed = ", ".join(k for k, v in self.flags.items() if not v)
            return f"inconclusive within budget: failed sections {failed}"
        return (
            f"no finite element of length {2 * M + 1} found (none of any length {M + 1}..{2 * M + 1}); "
            f"the periodic points (base · s)^∞ converge to a base word of length {M}, which inside any "
            f"{M}-step shift would force a finite element of length {2 * M + 1}; "
            f"so this {M + 1}-step shift is not conjugate to any {M}-step shift"
        )

    def to_dict(self) -> dict:
        return {
            "M": self.M,
            "spec": spec_to_json(self.spec),
            "condition1": self.condition1.to_dict() if self.condition1 else None,
            "condition2": self.condition2.to_dict()["rows"],
            "condition2_analytic": self.condition2.analytic,
            "spectrum": [
                {"length": k, "status": "verified", "witness": list(w)}
                if w is not None
                else {"length": k, "status": "absent", "witness": None}
                for k, w in self.spectrum.items()
            ],
            "xi_convergence": self.xi_convergence.to_dict() if self.xi_convergence else None,
            "flags": dict(self.flags),
            "passes": self.passes,
            "conclusion": self.conclusion,
            "budget": self.budget.to_dict(),
        }


def obstruction_report(M: int, budget: SearchBudget = SearchBudget()) -> ObstructionReport:
    pred = theorem_predicate(M)
    spec = Step(pred)
    cond1 = check_condition_one(pred, M, budget)
    cond2 = check_condition_two(pred, M, budget, default_samples(M, budget))
    spectrum = length_spectrum(spec, 2 * M + 1, budget)
    xi = None
    if cond1 is not None:
        family = xi_family(M, cond1.base, budget.truncation)
        xi = convergence_profile(family, Finite(cond1.base), budget.truncation, budget.threshold)
    flags = {
        "condition1": cond1 is not None,
        "condition2": cond2.stable,
        "spectrum_short": all(spectrum[k] is not None for k in range(M + 1)),
        "spectrum_long": all(spectrum[k] is None for k in range(M + 1, 2 * M + 2)),
        "xi_convergence": xi is not None and xi.passes,
    }
    return ObstructionReport(M, spec, budget, cond1, cond2, spectrum, xi, flags)


@dataclass(frozen=True)
class ZeroStepReport:
    x0: int
    budget: SearchBudget
    follower: dict[int, Optional[int]]  # least y with pred(x, y) = 1
    constant_points_ok: bool  # every x^∞ lies in the shift
    rich_symbols: tuple[int, ...]  # x with >= T followers under the rule
    length_one: dict[int, int]  # witness count of each length-1 word
    verified_length_one: tuple[int, ...]
    full_shift_verified: tuple[int, ...]

    @property
    def condition_i(self) -> bool:
        return all(v is not None for v in self.follower.values())

    @property
    def condition_ii(self) -> bool:
        return len(self.rich_symbols) >= 1

    @property
    def passes(self) -> bool:
        return (
            self.condition_i
            and self.condition_ii
            and self.constant_points_ok
            and len(self.verified_length_one) == len(self.rich_symbols)
            and len(self.full_shift_verified) == self.budget.truncation
            and len(self.verified_length_one) < len(self.full_shift_verified)
        )

    @property
    def conclusion(self) -> str:
        if not self.passes:
            return "inconclusive within budget"
        return (
            f"{len(self.verified_length_one)} finite element(s) of length 1 versus "
            f"{len(self.full_shift_verified)} in the full shift at truncation {self.budget.truncation}; "
            "a 0-step shift with any finite point has infinitely many of length 1, "
            "so this 1-step shift is not conjugate to any 0-step shift"
        )

    def to_dict(self) -> dict:
        return {
            "x0": self.x0,
            "condition_i": self.condition_i,
            "followers": {str(x): y for x, y in self.follower.items()},
            "constant_points_in_shift": self.constant_points_ok,
            "condition_ii": {"rich_symbols": list(self.rich_symbols), "ok": self.condition_ii},
            "length_one_counts": {str(x): c for x, c in self.length_one.items()},
            "length_one_verified": list(self.verified_length_one),
            "full_shift_length_one_verified": list(self.full_shift_verified),
            "passes": self.passes,
            "conclusion": self.conclusion,
            "budget": self.budget.to_dict(),
        }


def zero_step_report(x0: int = 0, budget: SearchBudget = SearchBudget()) -> ZeroStepReport:
    pred = zero_step_predicate(x0)
    spec = Step(pred)
    n = budget.truncation
    follower = {x: next((y for y in range(n) if pred((x, y))), None) for x in range(n)}
    constants_ok = all(in_inf(spec, EventuallyPeriodic((), (x,))) for x in range(n))
    rich = tuple(x for x in range(n) if sum(pred((x, y)) for y in range(n)) >= budget.threshold)
    verdicts = {x: in_fin(spec, (x,), budget) for x in range(n)}
    full = tuple(x for x in range(n) if in_fin(FullShift(), (x,), budget).verified)
    return ZeroStepReport(
        x0,
        budget,
        follower,
        constants_ok,
        rich,
        {x: v.count for x, v in verdicts.items()},
        tuple(x for x, v in verdicts.items() if v.verified),
        full,
    )


def xi_convergence_demo(M: int, budget: SearchBudget = SearchBudget()) -> ConvergenceProfile:
    """The ξ-family for the lexicographically first base of condition (1)."""
    pred = theorem_predicate(M)
    cond1 = check_condition_one(pred, M, budget)
    base = cond1.base if cond1 else (0,) * M
    family = xi_family(M, base, budget.truncation)
    return convergence_profile(family, Finite(base), budget.truncation, budget.threshold)
