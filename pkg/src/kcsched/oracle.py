"""Exact optimum computation at desk scale.

Without release dates a subset DP over completion prefixes gives the
optimum: costs are nondecreasing, so some optimal schedule runs without
idle time and the completion time of the last job of a prefix set is
the set's total processing time.  With release dates we enumerate
due-date vectors and keep the cheapest one that preemptive EDD can
meet; for nondecreasing costs that value equals the preemptive optimum.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .edd import feasible_assignment
from .errors import InfeasibleInstanceError, SizeLimitError
from .instance import INFEASIBLE, Instance

__all__ = ["OracleResult", "exact_opt", "exact_opt_release"]

MAX_DP_JOBS = 20
MAX_RELEASE_JOBS = 5
MAX_RELEASE_HORIZON = 16


@dataclass(frozen=True)
class OracleResult:
    opt_cost: int
    witness: tuple[int, ...]  # job order (no releases) or due-date vector
    nodes_explored: int


def exact_opt(inst: Instance) -> OracleResult:
    """Optimum cost via DP over job subsets; witness is a job order."""
    if inst.has_releases:
        raise ValueError("exact_opt requires an instance without release dates")
    n = inst.n
    if n > MAX_DP_JOBS:
        raise SizeLimitError(f"exact_opt limited to {MAX_DP_JOBS} jobs, got {n}")
    p = inst.processing()
    size = 1 << n
    psum = [0] * size
    for mask in range(1, size):
        low = mask & -mask
        psum[mask] = psum[mask ^ low] + p[low.bit_length() - 1]
    dp: list[int | None] = [None] * size
    last: list[int] = [-1] * size
    dp[0] = 0
    nodes = 0
    for mask in range(1, size):
        finish = psum[mask]
        best: int | None = None
        best_j = -1
        for j in range(n):
            if not mask >> j & 1:
                continue
            sub = dp[mask ^ (1 << j)]
            if sub is None:
                continue
            nodes += 1
            fj = inst.jobs[j].cost.value_at(finish)
            if fj is INFEASIBLE:
                continue
            cand = sub + fj
            if best is None or cand < best:
                best = cand
                best_j = j
        dp[mask] = best
        last[mask] = best_j
    full = size - 1
    if dp[full] is None:
        raise InfeasibleInstanceError("no feasible schedule: every order hits an infeasible cost")
    order: list[int] = []
    mask = full
    while mask:
        j = last[mask]
        order.append(j)
        mask ^= 1 << j
    order.reverse()
    return OracleResult(dp[full], tuple(order), nodes)


def _due_date_candidates(inst: Instance) -> list[list[int]]:
    # Raising a due date never breaks feasibility and costs are
    # nondecreasing, so per job only the largest due date of each
    # distinct cost level in [release + p, T] can be optimal.
    out = []
    for job in inst.jobs:
        lo = job.release + job.p
        marks = {t - 1 for t in job.cost.times if lo <= t - 1 < inst.horizon}
        marks.add(inst.horizon)
        cands = sorted(
            t for t in marks if t >= lo and job.cost.value_at(t) is not INFEASIBLE
        )
        out.append(cands)
    return out


def exact_opt_release(inst: Instance) -> OracleResult:
    """Optimum over feasible due-date vectors; witness is the vector."""
    if inst.n > MAX_RELEASE_JOBS:
        raise SizeLimitError(f"exact_opt_release limited to {MAX_RELEASE_JOBS} jobs")
    if inst.horizon > MAX_RELEASE_HORIZON:
        raise SizeLimitError(
            f"exact_opt_release limited to horizon {MAX_RELEASE_HORIZON}, got {inst.horizon}"
        )
    cands = _due_date_candidates(inst)
    if any(not c for c in cands):
        raise InfeasibleInstanceError("no feasible schedule: a job has only infeasible due dates")
    vectors = []
    for vec in product(*cands):
        cost = sum(inst.jobs[j].cost.value_at(vec[j]) for j in range(inst.n))
        vectors.append((cost, vec))
    vectors.sort()
    nodes = 0
    for cost, vec in vectors:
        nodes += 1
        if feasible_assignment(vec, inst):
            return OracleResult(cost, vec, nodes)
    raise InfeasibleInstanceError("no feasible due-date vector exists")
