from __future__ import annotations

import itertools

import pytest

from kcsched.errors import InfeasibleInstanceError, SizeLimitError
from kcsched.generators import RandomSpec, gen_random
from kcsched.instance import INFEASIBLE, CostFunction, Instance, Job, cost_sum
from kcsched.oracle import exact_opt, exact_opt_release


def order_cost(inst, order):
    clock = 0
    values = []
    for j in order:
        clock += inst.jobs[j].p
        values.append(inst.jobs[j].cost.value_at(clock))
    return cost_sum(values)


def test_pair_example(pair_instance):
    res = exact_opt(pair_instance)
    assert res.opt_cost == 3
    assert res.witness == (1, 0)
    assert order_cost(pair_instance, (0, 1)) == 6


def test_single_zero_cost_job():
    inst = Instance((Job(0, 3, CostFunction(())),))
    assert exact_opt(inst).opt_cost == 0


def test_tight_instance_opt(tight4):
    assert exact_opt(tight4).opt_cost == 16


def test_dp_equals_permutation_enumeration():
    for seed in range(25):
        n = seed % 6 + 1
        inst = gen_random(RandomSpec(seed=seed, n=n, p_max=4, v_max=10))
        res = exact_opt(inst)
        best = min(order_cost(inst, order) for order in itertools.permutations(range(n)))
        assert res.opt_cost == best


def test_dp_equals_permutations_n8():
    inst = gen_random(RandomSpec(seed=123, n=8, p_max=6, v_max=20))
    res = exact_opt(inst)
    best = min(order_cost(inst, order) for order in itertools.permutations(range(8)))
    assert res.opt_cost == best


def test_witness_reproduces_cost():
    for seed in range(30):
        inst = gen_random(RandomSpec(seed=seed, n=seed % 6 + 1, p_max=5, v_max=12))
        res = exact_opt(inst)
        assert order_cost(inst, res.witness) == res.opt_cost


def test_infeasible_everywhere():
    inst = Instance((Job(0, 2, CostFunction(((1, INFEASIBLE),))),))
    with pytest.raises(InfeasibleInstanceError):
        exact_opt(inst)


def test_dp_size_limit():
    jobs = tuple(Job(j, 1, CostFunction(())) for j in range(21))
    with pytest.raises(SizeLimitError):
        exact_opt(Instance(jobs))


def test_release_oracle_size_limits():
    jobs = tuple(Job(j, 1, CostFunction(())) for j in range(6))
    with pytest.raises(SizeLimitError):
        exact_opt_release(Instance(jobs))
    big = Instance((Job(0, 17, CostFunction(())),))
    with pytest.raises(SizeLimitError):
        exact_opt_release(big)


def test_release_oracle_agrees_without_releases():
    for seed in range(40):
        inst = gen_random(RandomSpec(seed=seed, n=seed % 4 + 1, p_max=3, v_max=9))
        if inst.horizon > 16:
            continue
        assert exact_opt_release(inst).opt_cost == exact_opt(inst).opt_cost


def test_release_oracle_zero_costs():
    inst = Instance((Job(0, 2, CostFunction(())), Job(1, 1, CostFunction(()), 1)))
    res = exact_opt_release(inst)
    assert res.opt_cost == 0


def test_release_witness_is_feasible_and_reproduces_cost():
    from kcsched.edd import feasible_assignment

    for seed in range(40):
        spec = RandomSpec(seed=seed, n=seed % 4 + 1, p_max=2, v_max=9, kappa=seed % 3 + 1)
        inst = gen_random(spec)
        res = exact_opt_release(inst)
        assert feasible_assignment(res.witness, inst)
        total = sum(inst.jobs[j].cost.value_at(res.witness[j]) for j in range(inst.n))
        assert total == res.opt_cost


def test_release_oracle_vs_naive_enumeration():
    from kcsched.edd import Schedule, preemptive_edd

    checked = 0
    for seed in range(60):
        spec = RandomSpec(seed=seed, n=seed % 3 + 1, p_max=2, v_max=6, kappa=seed % 2 + 1)
        inst = gen_random(spec)
        if inst.horizon > 8:
            continue
        best = None
        for vec in itertools.product(range(1, inst.horizon + 1), repeat=inst.n):
            if isinstance(preemptive_edd(vec, inst), Schedule):
                cost = cost_sum(
                    inst.jobs[j].cost.value_at(vec[j]) for j in range(inst.n)
                )
                if cost is not INFEASIBLE and (best is None or cost < best):
                    best = cost
        assert exact_opt_release(inst).opt_cost == best
        checked += 1
    assert checked >= 20
