"""Interval-indexed reduction: geometric cost classes, modified costs on
the class left endpoints, primal-dual solve on the compressed time grid,
and mapping back to original due dates.

Per job, times are grouped into classes where the cost stays within a
factor 1 + epsilon (class 0 holds the zero-cost times, infeasible times
form a terminal class).  The union of class left endpoints over all
jobs is the compressed grid; solving there degrades the guarantee by at
most 1 + epsilon while the grid stays polynomially small.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction

from .edd import Schedule, edd_schedule, feasible_assignment
from .errors import InstanceError
from .instance import INFEASIBLE, Cost, CostFunction, Instance
from .primal_dual import DualSolution, GrowTrace, grow, prune

__all__ = [
    "IntervalPartition",
    "RoundedInstance",
    "RoundedOutcome",
    "build_partition",
    "solve_rounded",
    "cost_class",
    "partition_to_json",
]


def _pow_cmp_gt(a: int, b: int, k: int, v: int) -> bool:
    """Exact test (a/b)^k > v via cross-multiplied integers."""
    return a**k > v * b**k


def cost_class(v: int, epsilon: Fraction) -> int:
    """Class index of a finite value: 0 for v = 0, else the unique k >= 1
    with (1+eps)^(k-1) <= v < (1+eps)^k, found by exact comparisons."""
    if v == 0:
        return 0
    ratio = 1 + Fraction(epsilon)
    a, b = ratio.numerator, ratio.denominator
    hi = 1
    while not _pow_cmp_gt(a, b, hi, v):
        hi *= 2
    lo = hi // 2  # (a/b)^lo <= v < (a/b)^hi, or lo == 0
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _pow_cmp_gt(a, b, mid, v):
            hi = mid
        else:
            lo = mid
    return hi


def _same_class(u: int, v: int, epsilon: Fraction) -> bool:
    # u <= v, both finite and positive: same class iff v is still below
    # the geometric boundary that closes u's class.
    ratio = 1 + Fraction(epsilon)
    k = cost_class(u, epsilon)
    return _pow_cmp_gt(ratio.numerator, ratio.denominator, k, v)


@dataclass(frozen=True)
class IntervalPartition:
    """Compressed grid: sorted endpoint times starting at 1; interval i is
    [points[i], points[i+1] - 1], the last one runs to the horizon."""

    epsilon: Fraction
    points: tuple[int, ...]
    horizon: int

    def intervals(self) -> list[tuple[int, int]]:
        out = []
        for i, left in enumerate(self.points):
            right = self.points[i + 1] - 1 if i + 1 < len(self.points) else self.horizon
            out.append((left, right))
        return out

    def right_end(self, left: int) -> int:
        idx = self.points.index(left)
        if idx + 1 < len(self.points):
            return self.points[idx + 1] - 1
        return self.horizon

    def snap_left(self, t: int) -> int:
        """Left endpoint of the interval containing t."""
        if not 1 <= t <= self.horizon:
            raise InstanceError(f"time {t} out of range [1, {self.horizon}]")
        return self.points[bisect_right(self.points, t) - 1]


def build_partition(inst: Instance, epsilon: Fraction | int | str) -> IntervalPartition:
    """Union over jobs of the class left endpoints, plus time 1.

    A breakpoint opens a new class when its value leaves the class of
    the value before it: zero to positive, positive to a value at or
    beyond the next geometric boundary, or anything to infeasible.
    """
    eps = Fraction(epsilon)
    if eps <= 0:
        raise InstanceError(f"epsilon must be positive, got {eps}")
    points = {1}
    for job in inst.jobs:
        prev: Cost = 0
        for t, v in job.cost.breakpoints:
            if v is INFEASIBLE:
                if prev is not INFEASIBLE:
                    points.add(t)
                prev = v
                continue
            if v == prev:
                continue
            if prev == 0 or not _same_class(int(prev), v, eps):
                points.add(t)
            prev = v
    return IntervalPartition(eps, tuple(sorted(points)), inst.horizon)


@dataclass(frozen=True)
class RoundedInstance:
    """Base instance plus modified costs defined on the compressed grid:
    the cost of an interval's left endpoint is the base cost at its
    right endpoint, so f <= f' <= (1+eps) f holds pointwise there."""

    base: Instance
    partition: IntervalPartition
    cost_funcs: tuple[CostFunction, ...] = field(init=False)

    def __post_init__(self) -> None:
        funcs = []
        for job in self.base.jobs:
            pairs: list[tuple[int, Cost]] = []
            prev: Cost = 0
            for left, right in self.partition.intervals():
                v = job.cost.value_at(right)
                if v != prev:
                    pairs.append((left, v))
                    prev = v
            funcs.append(CostFunction(tuple(pairs)))
        object.__setattr__(self, "cost_funcs", tuple(funcs))


@dataclass(frozen=True)
class RoundedOutcome:
    epsilon: Fraction
    partition: IntervalPartition
    rounded: RoundedInstance
    compressed_due_dates: tuple[int, ...]
    due_dates: tuple[int, ...]
    schedule: Schedule
    primal_cost: int
    assignment_cost: int
    dual_value: Fraction
    ratio: Fraction | None
    trace: GrowTrace
    dual: DualSolution


def solve_rounded(
    inst: Instance, epsilon: Fraction | int | str, *, debug: bool = False
) -> RoundedOutcome:
    """Primal-dual solve on the compressed grid, mapped back to real times.

    Chosen left endpoints become due dates at their interval's right
    endpoint, whose base cost equals the modified cost paid on the grid;
    the schedule therefore costs at most four times the grid dual, which
    itself is within 1 + epsilon of certifying the true optimum.
    """
    partition = build_partition(inst, epsilon)
    rounded = RoundedInstance(inst, partition)
    state, dual, trace = grow(
        inst, times=partition.points, cost_funcs=list(rounded.cost_funcs), debug=debug
    )
    compressed = prune(state, inst)
    due = tuple(partition.right_end(t) for t in compressed)
    assignment_cost = 0
    for j in range(inst.n):
        rounded_v = rounded.cost_funcs[j].value_at(compressed[j])
        mapped_v = inst.jobs[j].cost.value_at(due[j])
        assert rounded_v == mapped_v and isinstance(mapped_v, int)
        assignment_cost += mapped_v
    assert feasible_assignment(due, inst)
    schedule = edd_schedule(due, inst)
    primal = schedule.total_cost
    assert isinstance(primal, int) and primal <= assignment_cost
    if dual.value == 0:
        assert assignment_cost == 0
        ratio = None
    else:
        assert assignment_cost < 4 * dual.value
        ratio = Fraction(primal) / dual.value
    return RoundedOutcome(
        partition.epsilon,
        partition,
        rounded,
        compressed,
        due,
        schedule,
        primal,
        assignment_cost,
        dual.value,
        ratio,
        trace,
        dual,
    )


def partition_to_json(rounded: RoundedInstance) -> dict:
    """Interval list plus the per-job modified cost table on the grid."""
    table = []
    for j, func in enumerate(rounded.cost_funcs):
        row = []
        for left in rounded.partition.points:
            v = func.value_at(left)
            row.append("INF" if v is INFEASIBLE else v)
        table.append(row)
    return {
        "epsilon": f"{rounded.partition.epsilon.numerator}/{rounded.partition.epsilon.denominator}",
        "intervals": [[left, right] for left, right in rounded.partition.intervals()],
        "modified_costs": table,
    }
