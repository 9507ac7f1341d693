from __future__ import annotations

import pytest
from hypothesis import strategies as st

from kcsched.instance import INFEASIBLE, CostFunction, Instance, Job


@st.composite
def instances(draw, max_n=5, max_p=4, max_breakpoints=3, max_value=10,
              releases=False, allow_infeasible=False):
    """Small valid instances, built directly so hypothesis can shrink them."""
    n = draw(st.integers(1, max_n))
    sizes = [draw(st.integers(1, max_p)) for _ in range(n)]
    total = sum(sizes)
    if releases:
        rel = [draw(st.integers(0, max(0, total // 2))) for _ in range(n)]
    else:
        rel = [0] * n
    horizon = max(rel) + total
    jobs = []
    for j in range(n):
        lo = rel[j] + 1
        count = draw(st.integers(0, min(max_breakpoints, horizon - lo + 1)))
        times = sorted(draw(st.sets(st.integers(lo, horizon), min_size=count, max_size=count)))
        values = sorted(draw(st.lists(st.integers(0, max_value), min_size=count, max_size=count)))
        pairs = list(zip(times, values))
        if allow_infeasible and pairs and draw(st.booleans()):
            t_last = pairs[-1][0]
            pairs[-1] = (t_last, INFEASIBLE)
        jobs.append(Job(j, sizes[j], CostFunction(tuple(pairs)), rel[j]))
    return Instance(tuple(jobs))


@pytest.fixture
def tight4():
    from kcsched.generators import gen_tight

    return gen_tight(4)


@pytest.fixture
def pair_instance():
    """Two jobs p = (1, 2); ordering job 1 first costs 3, the other order 6."""
    jobs = (
        Job(0, 1, CostFunction(((1, 1), (2, 2), (3, 3)))),
        Job(1, 2, CostFunction(((3, 5),))),
    )
    return Instance(jobs)
