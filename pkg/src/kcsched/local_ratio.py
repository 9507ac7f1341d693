"""Local-ratio solver: the recursive counterpart of the primal-dual scheme.

Starting from all-zero due dates, each step finds the time with the
largest residual demand, splits the residual cost vector into a scaled
model part (truncated sizes of the jobs that could newly cover that
time) and a remainder that stays nonnegative, and raises the due date
of a job whose remainder hit zero.  Once feasible, the due-date raises
are undone in reverse order whenever feasibility survives.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .edd import Schedule, base_demands_covered, edd_schedule
from .errors import InfeasibleInstanceError
from .instance import INFEASIBLE, Instance

__all__ = [
    "ResidualCosts",
    "Decomposition",
    "LocalRatioRecord",
    "LocalRatioOutcome",
    "decompose",
    "solve_local_ratio",
    "lr_trace_to_jsonl",
]


class ResidualCosts:
    """Residual cost vector: base costs minus accumulated scaled model terms.

    Every subtracted model term is a single-threshold step, so each job
    carries a list of (threshold, amount) charges and evaluation is the
    base cost minus the charges with threshold at or below t.  Values
    are exact rationals; an infeasible base value stays infeasible.
    """

    def __init__(self, inst: Instance):
        self._inst = inst
        self.charges: list[list[tuple[int, Fraction]]] = [[] for _ in inst.jobs]

    def value(self, job: int, t: int):
        base = self._inst.jobs[job].cost.value_at(t)
        if base is INFEASIBLE:
            return INFEASIBLE
        total = Fraction(base)
        for threshold, amount in self.charges[job]:
            if threshold <= t:
                total -= amount
        return total

    def critical_times(self, job: int, start: int) -> list[int]:
        """Times >= start where the residual cost of `job` can change."""
        points = {start}
        for b in self._inst.jobs[job].cost.times:
            if start < b <= self._inst.horizon:
                points.add(b)
        for threshold, _ in self.charges[job]:
            if start < threshold <= self._inst.horizon:
                points.add(threshold)
        return sorted(points)

    def apply(self, dec: "Decomposition") -> None:
        if dec.alpha == 0:
            return
        for job, weight in dec.weights:
            if weight:
                self.charges[job].append((dec.t_star, dec.alpha * weight))

    def assert_nonnegative(self, jobs: tuple[int, ...]) -> None:
        for job in jobs:
            for t in self.critical_times(job, 1):
                v = self.value(job, t)
                assert v is INFEASIBLE or v >= 0, f"residual cost of job {job} negative at {t}"


@dataclass(frozen=True)
class Decomposition:
    """One cost split: peak time, residual demand there, the largest scale
    keeping the remainder nonnegative, and the pair that went tight."""

    t_star: int
    demand: int
    alpha: Fraction
    weights: tuple[tuple[int, int], ...]  # (job, truncated size) for active jobs
    job: int
    time: int
    r_star: int | None = None


def _residual_profile(due: list[int], inst: Instance) -> tuple[int, int]:
    """(t, demand) maximizing the uncovered demand, ties to the largest t."""
    T = inst.horizon
    diff = [0] * (T + 2)
    for j, d in enumerate(due):
        if d >= 1:
            diff[1] += inst.jobs[j].p
            diff[min(d, T) + 1] -= inst.jobs[j].p
    best_t = -1
    best_d = 0
    acc = 0
    for t in range(1, T + 1):
        acc += diff[t]
        d = T - t + 1 - acc
        if d > 0 and d >= best_d:
            best_d = d
            best_t = t
    return best_t, best_d


def decompose(g: ResidualCosts, due: list[int], inst: Instance) -> Decomposition:
    """Split the residual costs at the time of maximum uncovered demand.

    Active jobs are those due before the peak; their model coefficient
    is their size truncated to the peak's residual demand.  The scale is
    the smallest residual-cost-to-coefficient ratio over active jobs and
    times at or past the peak; the minimizing pair (largest time, then
    smallest job) is returned.
    """
    t_star, d0 = _residual_profile(due, inst)
    if t_star < 0:
        raise ValueError("decompose requires an infeasible assignment")
    active = [j for j in range(inst.n) if due[j] < t_star]
    weights = tuple((j, min(inst.jobs[j].p, d0)) for j in active)
    best = _tightest_pair(g, weights, t_star, inst)
    if best is None:
        raise InfeasibleInstanceError(
            f"instance infeasible under cost functions: no job can newly cover time {t_star}"
        )
    alpha, job, time = best
    return Decomposition(t_star, d0, alpha, weights, job, time)


def _tightest_pair(
    g: ResidualCosts,
    weights: tuple[tuple[int, int], ...],
    t_star: int,
    inst: Instance,
) -> tuple[Fraction, int, int] | None:
    """Largest scale keeping the residuals of the weighted jobs nonnegative
    at and past t_star, with the pair that hits zero: smallest ratio, ties
    to the largest time, then the smallest job id."""
    best_alpha: Fraction | None = None
    best_s = -1
    best_j = -1
    for j, w in weights:
        if w == 0:
            continue
        pieces: list[tuple[Fraction, int]] = []
        points = g.critical_times(j, t_star)
        for i, s in enumerate(points):
            if inst.jobs[j].cost.value_at(s) is INFEASIBLE:
                break  # base costs nondecreasing: later times stay infeasible
            right = points[i + 1] - 1 if i + 1 < len(points) else inst.horizon
            v = g.value(j, s)
            assert v >= 0
            pieces.append((v, right))
        if not pieces:
            continue
        job_alpha = min(v for v, _ in pieces) / w
        bound = job_alpha * w
        job_s = max(right for v, right in pieces if v == bound)
        if (
            best_alpha is None
            or job_alpha < best_alpha
            or (job_alpha == best_alpha and job_s > best_s)
        ):
            best_alpha, best_s, best_j = job_alpha, job_s, j
    if best_alpha is None:
        return None
    return best_alpha, best_j, best_s


@dataclass(frozen=True)
class LocalRatioRecord:
    depth: int
    t_star: int
    alpha: Fraction
    job: int
    time: int
    undo_kept: bool
    r_star: int | None = None


@dataclass(frozen=True)
class LocalRatioOutcome:
    due_dates: tuple[int, ...]
    assignment_cost: int
    schedule: Schedule
    cost: int
    trace: tuple[LocalRatioRecord, ...]


@dataclass(frozen=True)
class _Frame:
    dec: Decomposition
    old_due: int
    due_snapshot: tuple[int, ...]


def _charging_bound(frame: _Frame, rho: list[int], factor: int) -> None:
    lhs = 0
    for j, w in frame.dec.weights:
        if frame.dec.t_star <= rho[j]:
            lhs += w
    assert lhs <= factor * frame.dec.demand, (
        f"charging bound violated at t*={frame.dec.t_star}: {lhs} > "
        f"{factor} * {frame.dec.demand}"
    )


def solve_local_ratio(inst: Instance, *, check: bool = True) -> LocalRatioOutcome:
    """Local-ratio 4-approximation for instances without release dates."""
    if inst.has_releases:
        raise ValueError("solve_local_ratio requires an instance without release dates")
    n = inst.n
    g = ResidualCosts(inst)
    due = [0] * n
    frames: list[_Frame] = []
    max_depth = n * inst.horizon
    while not base_demands_covered(due, inst):
        if check:
            for j in range(n):
                assert g.value(j, due[j]) == 0
        dec = decompose(g, due, inst)
        frames.append(_Frame(dec, due[dec.job], tuple(due)))
        g.apply(dec)
        if check:
            g.assert_nonnegative(tuple(j for j, _ in dec.weights))
            assert g.value(dec.job, dec.time) == 0
        assert dec.time > due[dec.job]
        due[dec.job] = dec.time
        assert len(frames) <= max_depth, "due dates must rise every call"

    rho = list(due)
    reversed_records: list[LocalRatioRecord] = []
    for depth in range(len(frames) - 1, -1, -1):
        frame = frames[depth]
        saved = rho[frame.dec.job]
        rho[frame.dec.job] = frame.old_due
        kept = base_demands_covered(rho, inst)
        if not kept:
            rho[frame.dec.job] = saved
        if check:
            _charging_bound(frame, rho, 4)
            assert all(frame.due_snapshot[j] <= rho[j] for j in range(n))
        reversed_records.append(
            LocalRatioRecord(
                depth + 1, frame.dec.t_star, frame.dec.alpha,
                frame.dec.job, frame.dec.time, kept,
            )
        )
    trace = tuple(reversed(reversed_records))

    assignment_cost = 0
    for j in range(n):
        v = inst.jobs[j].cost.value_at(rho[j])
        assert isinstance(v, int)
        assignment_cost += v
    schedule = edd_schedule(tuple(rho), inst)
    cost = schedule.total_cost
    assert isinstance(cost, int) and cost <= assignment_cost
    return LocalRatioOutcome(tuple(rho), assignment_cost, schedule, cost, trace)


def lr_trace_to_jsonl(trace: tuple[LocalRatioRecord, ...]) -> str:
    lines = []
    for r in trace:
        doc = {
            "depth": r.depth,
            "t_star": r.t_star,
            "alpha": f"{r.alpha.numerator}/{r.alpha.denominator}",
            "job": r.job,
            "s": r.time,
            "undo_kept": r.undo_kept,
        }
        if r.r_star is not None:
            doc["r_star"] = r.r_star
        lines.append(json.dumps(doc, separators=(",", ":")))
    return "\n".join(lines) + ("\n" if lines else "")
