"""Instance generators: the four-job tight-gap family, its shifted
variant with a dummy job, and seeded random instances."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import InstanceError
from .instance import INFEASIBLE, Cost, CostFunction, Instance, Job

__all__ = ["RandomSpec", "gen_tight", "gen_tight_shifted", "gen_random"]


def gen_tight(p: int) -> Instance:
    """Four equal-length jobs on which the primal-dual pair exhibits a
    cost/certificate gap of 4p/(p+2), approaching 4 as p grows.

    Jobs 0 and 1 are free before p, cost p up to 3p-1, and can never
    finish later; jobs 2 and 3 are free through 3p-2 and cost p after.
    """
    if p < 4:
        raise InstanceError(f"tight family requires p >= 4, got {p}")
    early = CostFunction(((p, p), (3 * p, INFEASIBLE)))
    late = CostFunction(((3 * p - 1, p),))
    jobs = (
        Job(0, p, early),
        Job(1, p, early),
        Job(2, p, late),
        Job(3, p, late),
    )
    return Instance(jobs)


def gen_tight_shifted(p: int, delta: Fraction) -> Instance:
    """Tight family shifted right by one full horizon behind a dummy job.

    The dummy job runs for the original horizon at zero cost (infeasible
    afterwards); each original job keeps its length and pays delta * p
    everywhere plus its original cost shifted by the dummy's length.
    With the shift, no job is ever cheaper than finishing as early as it
    possibly can, yet nearly the same gap is observed: the certificate
    gains only delta times the original horizon.
    """
    if p < 4:
        raise InstanceError(f"tight family requires p >= 4, got {p}")
    delta = Fraction(delta)
    if delta <= 0:
        raise InstanceError("delta must be positive")
    scaled = delta * p
    if scaled.denominator != 1:
        raise InstanceError(f"delta * p must be integral, got {scaled}")
    bump = int(scaled)
    shift = 4 * p  # original horizon
    jobs = []
    for j, job in enumerate(gen_tight(p).jobs):
        pairs: list[tuple[int, Cost]] = [(1, bump)]
        for t, v in job.cost.breakpoints:
            pairs.append((t + shift, INFEASIBLE if v is INFEASIBLE else v + bump))
        jobs.append(Job(j, job.p, CostFunction(tuple(pairs))))
    dummy_cost = CostFunction(((shift + 1, INFEASIBLE),))
    jobs.append(Job(4, shift, dummy_cost))
    return Instance(tuple(jobs))


@dataclass(frozen=True)
class RandomSpec:
    """Knobs for seeded random instances.

    kappa = 1 generates no release dates; kappa >= 2 draws that many
    distinct release values (0 included) and assigns every value to at
    least one job.  Costs stay finite, with the first breakpoint of a
    released job pushed past its release date.
    """

    seed: int
    n: int
    p_max: int = 6
    max_breakpoints: int = 4
    v_max: int = 20
    kappa: int = 1

    def __post_init__(self) -> None:
        if self.n < 1 or self.p_max < 1 or self.max_breakpoints < 0:
            raise InstanceError("random spec parameters must be positive")
        if self.v_max < 0 or self.kappa < 1:
            raise InstanceError("random spec parameters must be positive")


def gen_random(spec: RandomSpec) -> Instance:
    """Deterministic random instance for the given spec."""
    rng = random.Random(spec.seed)
    n = spec.n
    sizes = [rng.randint(1, spec.p_max) for _ in range(n)]
    total = sum(sizes)
    pool_max = max(1, total // 2)
    kappa = min(spec.kappa, n, pool_max + 1)
    if kappa == 1:
        releases = [0] * n
    else:
        pool = [0] + sorted(rng.sample(range(1, pool_max + 1), kappa - 1))
        releases = [pool[j] if j < kappa else rng.choice(pool) for j in range(n)]
    horizon = max(releases) + total
    jobs = []
    for j in range(n):
        count = rng.randint(0, spec.max_breakpoints)
        lo = releases[j] + 1
        avail = range(lo, horizon + 1)
        count = min(count, len(avail))
        times = sorted(rng.sample(avail, count))
        values = sorted(rng.randint(0, spec.v_max) for _ in range(count))
        cost = CostFunction(tuple(zip(times, values)))
        jobs.append(Job(j, sizes[j], cost, releases[j]))
    return Instance(tuple(jobs))
