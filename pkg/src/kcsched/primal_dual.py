"""Primal-dual solver over the knapsack-cover strengthened covering LP.

The growing phase repeatedly raises the dual variable of the time with
the largest residual demand until some job's dual constraint becomes
tight, committing that (job, time) completion pair.  The pruning phase
re-examines committed pairs in reverse, dropping any whose removal
keeps every demand covered.  The raised duals form an exact rational
certificate: the EDD schedule built from the surviving due dates costs
less than four times the dual value.

All dual values and slacks are exact `fractions.Fraction`s; tightness
tests are equalities, so floating point is never used.
"""

from __future__ import annotations

import json
import random
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction

from .edd import Schedule, edd_schedule
from .errors import InfeasibleInstanceError
from .instance import (
    INFEASIBLE,
    Cost,
    CostFunction,
    Instance,
    JobSet,
    residual_demand,
)

__all__ = [
    "DualEntry",
    "DualSolution",
    "GrowRecord",
    "GrowState",
    "SolveOutcome",
    "grow",
    "prune",
    "solve_primal_dual",
    "check_dual_feasible",
    "check_primal_feasible",
    "check_charging",
    "DualFeasibilityReport",
    "PrimalFeasibilityReport",
    "ChargingReport",
    "trace_to_jsonl",
]


@dataclass(frozen=True)
class DualEntry:
    """One raised dual variable: time t, committed set snapshot, value y."""

    t: int
    covered: JobSet
    y: Fraction


@dataclass(frozen=True)
class DualSolution:
    """Raised duals in iteration order with their exact objective value."""

    entries: tuple[DualEntry, ...]
    value: Fraction

    @classmethod
    def from_entries(cls, entries, inst: Instance) -> "DualSolution":
        value = sum(
            (e.y * residual_demand(e.t, e.covered, inst) for e in entries),
            Fraction(0),
        )
        return cls(tuple(entries), value)


@dataclass(frozen=True)
class GrowRecord:
    """Per-iteration trace: selected time, set snapshot, residual demand,
    dual increase, and the pair that became tight."""

    k: int
    t: int
    covered: JobSet
    demand: int
    alpha: Fraction
    tight_job: int
    tight_time: int


GrowTrace = tuple[GrowRecord, ...]


@dataclass
class GrowState:
    """Mutable growing-phase state.

    Committed pairs are nested per job (a pair at time t puts the job in
    every covered set up to t), so membership reduces to one frontier
    per job: the largest committed time.
    """

    frontier: list[int]
    assignments: list[tuple[int, int, int]]  # (job, time, previous frontier)
    times: tuple[int, ...]


@dataclass(frozen=True)
class SolveOutcome:
    due_dates: tuple[int, ...]
    schedule: Schedule
    primal_cost: int
    dual_value: Fraction
    ratio: Fraction | None
    trace: GrowTrace
    dual: DualSolution


def _default_grid(inst: Instance) -> tuple[int, ...]:
    return tuple(range(1, inst.horizon + 1))


def grow(
    inst: Instance,
    *,
    times: tuple[int, ...] | None = None,
    cost_funcs: list[CostFunction] | None = None,
    debug: bool = False,
) -> tuple[GrowState, DualSolution, GrowTrace]:
    """Dual growing phase.

    Each iteration picks the time with the largest residual demand
    (ties to the largest time), raises its dual variable until some
    constraint with a finite right-hand side becomes tight, and commits
    the tight (job, time) pair with the largest time, then smallest id.
    Terminates when every residual demand on the grid is zero.
    """
    if inst.has_releases:
        raise ValueError("grow requires an instance without release dates")
    tgrid = _default_grid(inst) if times is None else tuple(times)
    costs = [j.cost for j in inst.jobs] if cost_funcs is None else list(cost_funcs)
    T = inst.horizon
    n = inst.n
    p = inst.processing()
    m = len(tgrid)

    frontier = [0] * n
    paid = [[Fraction(0)] * m for _ in range(n)]
    paid_event_times: list[int] = []  # times of entries with y > 0
    entries: list[DualEntry] = []
    records: list[GrowRecord] = []
    assignments: list[tuple[int, int, int]] = []

    while True:
        # Residual demand profile over the grid.
        cover = [0] * m
        for j in range(n):
            if frontier[j]:
                hi = bisect_right(tgrid, frontier[j])
                for pos in range(hi):
                    cover[pos] += p[j]
        best_pos = -1
        best_d = 0
        for pos in range(m):
            d = T - tgrid[pos] + 1 - cover[pos]
            if d > 0 and d >= best_d:
                best_d = d
                best_pos = pos
        if best_pos < 0:
            break

        t0 = tgrid[best_pos]
        mask = 0
        for j in range(n):
            if frontier[j] >= t0:
                mask |= 1 << j
        covered = JobSet(mask, cover[best_pos])
        d0 = best_d

        tight = _find_tightening(
            inst, tgrid, costs, paid, paid_event_times, frontier, t0, best_pos, d0
        )
        if tight is None:
            raise InfeasibleInstanceError(
                "instance infeasible under cost functions: no dual constraint "
                f"can become tight for time {t0}"
            )
        alpha, tight_job, tight_time = tight
        assert alpha >= 0

        entries.append(DualEntry(t0, covered, alpha))
        if alpha > 0:
            paid_event_times.append(t0)
            for j in range(n):
                if frontier[j] >= t0:
                    continue
                add = min(p[j], d0) * alpha
                row = paid[j]
                for pos in range(best_pos, m):
                    row[pos] += add
        records.append(
            GrowRecord(len(records) + 1, t0, covered, d0, alpha, tight_job, tight_time)
        )
        assert tight_time > frontier[tight_job]
        assignments.append((tight_job, tight_time, frontier[tight_job]))
        frontier[tight_job] = tight_time

        if debug:
            report = check_dual_feasible(
                DualSolution.from_entries(entries, inst),
                inst,
                times=tgrid,
                cost_funcs=costs,
            )
            assert report.feasible, f"dual infeasible after iteration {len(records)}: {report.violation}"

    state = GrowState(frontier, assignments, tgrid)
    dual = DualSolution.from_entries(entries, inst)
    return state, dual, tuple(records)


def _find_tightening(inst, tgrid, costs, paid, paid_event_times, frontier, t0, pos0, d0):
    """Smallest dual increase that makes some constraint (job, s >= t0)
    tight, with the tight pair chosen as largest s, then smallest job."""
    m = len(tgrid)
    best_alpha: Fraction | None = None
    best_s = -1
    best_j = -1
    for j in range(inst.n):
        if frontier[j] >= t0:
            continue
        w = min(inst.jobs[j].p, d0)
        starts = {pos0}
        for b in costs[j].times:
            if t0 < b <= tgrid[-1]:
                starts.add(bisect_left(tgrid, b))
        for te in paid_event_times:
            if t0 < te <= tgrid[-1]:
                starts.add(bisect_left(tgrid, te))
        ordered = sorted(starts)
        # Slack is piecewise constant between starts; scan one point per piece.
        pieces: list[tuple[Fraction, int]] = []  # (slack, right end time)
        for i, pos in enumerate(ordered):
            s = tgrid[pos]
            f = costs[j].value_at(s)
            if f is INFEASIBLE:
                break  # costs are nondecreasing: every later piece is infeasible
            right_pos = (ordered[i + 1] - 1) if i + 1 < len(ordered) else m - 1
            slack = f - paid[j][pos]
            assert slack >= 0
            pieces.append((slack, tgrid[right_pos]))
        if not pieces:
            continue
        job_alpha = min(sl for sl, _ in pieces) / w
        tight_bound = job_alpha * w
        job_s = max(right for sl, right in pieces if sl == tight_bound)
        if (
            best_alpha is None
            or job_alpha < best_alpha
            or (job_alpha == best_alpha and job_s > best_s)
        ):
            best_alpha, best_s, best_j = job_alpha, job_s, j
    if best_alpha is None:
        return None
    return best_alpha, best_j, best_s


def prune(state: GrowState, inst: Instance) -> tuple[int, ...]:
    """Reverse-delete: drop committed pairs whose removal keeps every
    demand covered; each job ends up with exactly one due date."""
    tgrid = state.times
    T = inst.horizon
    n = inst.n
    p = inst.processing()
    cur = list(state.frontier)
    kept: dict[int, int] = {}
    for job, t, prev_t in reversed(state.assignments):
        if cur[job] > t:
            # A later pair for this job survived, so this one is redundant.
            continue
        assert cur[job] == t
        # Times this pair newly covered: grid points in (prev_t, t].  The
        # earlier pair at prev_t still covers everything up to prev_t.
        lo = bisect_right(tgrid, prev_t)
        hi = bisect_right(tgrid, t)
        removable = True
        for pos in range(lo, hi):
            s = tgrid[pos]
            others = sum(p[i] for i in range(n) if i != job and cur[i] >= s)
            if others < T - s + 1:
                removable = False
                break
        if removable:
            cur[job] = prev_t
        else:
            assert job not in kept
            kept[job] = t
    assert len(kept) == n, "pruning must leave exactly one pair per job"
    due = tuple(kept[j] for j in range(n))
    for pos in range(len(tgrid)):
        s = tgrid[pos]
        assert sum(p[j] for j in range(n) if due[j] >= s) >= T - s + 1
    return due


def solve_primal_dual(inst: Instance, *, debug: bool = False) -> SolveOutcome:
    """Run growing, pruning, and EDD; bundle the 4x certificate."""
    state, dual, trace = grow(inst, debug=debug)
    due = prune(state, inst)
    schedule = edd_schedule(due, inst)
    primal = schedule.total_cost
    assert isinstance(primal, int)
    if dual.value == 0:
        assert primal == 0
        ratio = None
    else:
        assert primal < 4 * dual.value
        ratio = Fraction(primal) / dual.value
    return SolveOutcome(due, schedule, primal, dual.value, ratio, trace, dual)


# ---------------------------------------------------------------------------
# Certificate checkers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DualFeasibilityReport:
    feasible: bool
    violation: tuple[int, int, Fraction, Cost] | None = None  # (job, s, lhs, rhs)


def check_dual_feasible(
    dual: DualSolution,
    inst: Instance,
    *,
    times: tuple[int, ...] | None = None,
    cost_funcs: list[CostFunction] | None = None,
) -> DualFeasibilityReport:
    """Verify every dual constraint with exact rationals.

    For each job j and time s, the weighted sum of raised duals whose
    time is at most s and whose set excludes j must stay at or below
    the job's cost at s; infeasible right-hand sides are vacuous.
    Reports the first violation in (job, s) scan order.
    """
    tgrid = _default_grid(inst) if times is None else tuple(times)
    costs = [j.cost for j in inst.jobs] if cost_funcs is None else list(cost_funcs)
    for j in range(inst.n):
        events = sorted(
            (e.t, e.y * min(inst.jobs[j].p, residual_demand(e.t, e.covered, inst)))
            for e in dual.entries
            if not e.covered.contains(j)
        )
        lhs = Fraction(0)
        idx = 0
        for s in tgrid:
            while idx < len(events) and events[idx][0] <= s:
                lhs += events[idx][1]
                idx += 1
            rhs = costs[j].value_at(s)
            if rhs is INFEASIBLE:
                continue
            if lhs > rhs:
                return DualFeasibilityReport(False, (j, s, lhs, rhs))
    return DualFeasibilityReport(True)


@dataclass(frozen=True)
class PrimalFeasibilityReport:
    feasible: bool
    # (t, covered ids or None for a base constraint, lhs, rhs)
    violations: tuple[tuple[int, tuple[int, ...] | None, int, int], ...] = ()


def check_primal_feasible(
    due: tuple[int, ...],
    inst: Instance,
    *,
    dual: DualSolution | None = None,
    samples: int = 64,
    seed: int = 0,
) -> PrimalFeasibilityReport:
    """Check the due-date assignment against the covering constraints.

    All base demands are checked exactly.  The strengthened inequalities
    with truncated sizes are checked for every set in the dual support
    plus `samples` seeded random (time, set) pairs; checking all of them
    would be exponential.
    """
    if inst.has_releases:
        raise ValueError("check_primal_feasible applies to instances without release dates")
    for j, d in enumerate(due):
        if d < 1:
            raise ValueError(f"job {j} has no due date assigned")
    T = inst.horizon
    p = inst.processing()
    violations = []
    for t in range(1, T + 1):
        lhs = sum(p[j] for j in range(inst.n) if due[j] >= t)
        rhs = T - t + 1
        if lhs < rhs:
            violations.append((t, None, lhs, rhs))
    pairs: list[tuple[int, JobSet]] = []
    if dual is not None:
        pairs.extend((e.t, e.covered) for e in dual.entries)
    rng = random.Random(seed)
    for _ in range(samples):
        t = rng.randint(1, T)
        mask = rng.getrandbits(inst.n)
        total = sum(p[j] for j in range(inst.n) if mask >> j & 1)
        pairs.append((t, JobSet(mask, total)))
    for t, covered in pairs:
        rhs = residual_demand(t, covered, inst)
        if rhs == 0:
            continue
        lhs = sum(
            min(p[j], rhs)
            for j in range(inst.n)
            if not covered.contains(j) and due[j] >= t
        )
        if lhs < rhs:
            violations.append((t, covered.ids(), lhs, rhs))
    return PrimalFeasibilityReport(not violations, tuple(violations))


@dataclass(frozen=True)
class ChargingReport:
    ok: bool
    violation: tuple[int, tuple[int, ...], int, int] | None = None


def check_charging(
    dual: DualSolution, due: tuple[int, ...], inst: Instance
) -> ChargingReport:
    """For every raised dual with positive value, the surviving jobs that
    cover its time but were outside its set must contribute strictly
    less than four times its residual demand (truncated sizes)."""
    p = inst.processing()
    for e in dual.entries:
        if e.y == 0:
            continue
        d = residual_demand(e.t, e.covered, inst)
        lhs = sum(
            min(p[j], d)
            for j in range(inst.n)
            if not e.covered.contains(j) and due[j] >= e.t
        )
        if not lhs < 4 * d:
            return ChargingReport(False, (e.t, e.covered.ids(), lhs, d))
    return ChargingReport(True)


def trace_to_jsonl(trace: GrowTrace) -> str:
    """Growing-phase trace as JSON lines with bit-exact rationals."""
    lines = [
        json.dumps(
            {
                "k": r.k,
                "t": r.t,
                "A": list(r.covered.ids()),
                "D": r.demand,
                "alpha": f"{r.alpha.numerator}/{r.alpha.denominator}",
                "tight_job": r.tight_job,
                "tight_time": r.tight_time,
            },
            separators=(",", ":"),
        )
        for r in trace
    ]
    return "\n".join(lines) + ("\n" if lines else "")
