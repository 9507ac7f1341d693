from __future__ import annotations

from fractions import Fraction

import pytest

from kcsched.edd import edd_schedule
from kcsched.errors import InstanceError
from kcsched.generators import RandomSpec, gen_random
from kcsched.instance import INFEASIBLE, CostFunction, Instance, Job
from kcsched.oracle import exact_opt
from kcsched.primal_dual import check_primal_feasible, solve_primal_dual
from kcsched.rounding import (
    RoundedInstance,
    build_partition,
    cost_class,
    partition_to_json,
    solve_rounded,
)


def test_cost_class_eps_one():
    # boundaries 1, 2, 4, 8: classes [1,2), [2,4), [4,8)
    assert cost_class(0, Fraction(1)) == 0
    assert cost_class(1, Fraction(1)) == 1
    assert cost_class(2, Fraction(1)) == 2
    assert cost_class(3, Fraction(1)) == 2
    assert cost_class(4, Fraction(1)) == 3
    assert cost_class(7, Fraction(1)) == 3
    assert cost_class(8, Fraction(1)) == 4


def test_cost_class_eps_half():
    # boundaries 3/2, 9/4, 27/8: 1 -> [1, 1.5), 2 -> [1.5, 2.25), 3 -> [2.25, 3.375)
    eps = Fraction(1, 2)
    assert cost_class(1, eps) == 1
    assert cost_class(2, eps) == 2
    assert cost_class(3, eps) == 3
    assert cost_class(4, eps) == 4


def test_partition_class_example():
    # values over t = 1..6 are (0, 0, 1, 1, 2, 3); with eps = 1 the classes are
    # {1,2}, {3,4} in [1,2), {5,6} in [2,4): left endpoints 1, 3, 5
    inst = Instance((Job(0, 6, CostFunction(((3, 1), (5, 2), (6, 3)))),))
    part = build_partition(inst, 1)
    assert part.points == (1, 3, 5)
    assert part.intervals() == [(1, 2), (3, 4), (5, 6)]


def test_partition_all_zero_costs():
    inst = Instance(tuple(Job(j, 2, CostFunction(())) for j in range(2)))
    part = build_partition(inst, Fraction(1, 2))
    assert part.points == (1,)
    assert part.intervals() == [(1, 4)]


def test_partition_infeasible_opens_terminal_class(tight4):
    part = build_partition(tight4, Fraction(1, 2))
    # jobs 0/1: free then p at 4, infeasible at 12; jobs 2/3: p at 11
    assert part.points == (1, 4, 11, 12)


def test_partition_rejects_bad_epsilon(tight4):
    with pytest.raises(InstanceError):
        build_partition(tight4, 0)
    with pytest.raises(InstanceError):
        build_partition(tight4, Fraction(-1, 2))


def test_partition_size_bound_exact():
    # tau <= sum_j (2 + log_{1+eps} f_j(T)) + 1, checked by cross-multiplying:
    # (1+eps)^(tau - 1 - 2n) <= prod_j max(f_j(T), 1) over finite-cost jobs
    for seed in range(40):
        inst = gen_random(RandomSpec(seed=seed, n=seed % 6 + 1, p_max=4, v_max=15))
        for eps in (Fraction(1, 10), Fraction(1, 2), Fraction(1)):
            part = build_partition(inst, eps)
            tau = len(part.points)
            exponent = tau - 1 - 2 * inst.n
            if exponent <= 0:
                continue
            prod = 1
            for job in inst.jobs:
                v = job.cost.value_at(inst.horizon)
                assert isinstance(v, int)
                prod *= max(v, 1)
            assert (1 + eps) ** exponent <= prod, (seed, eps)


def test_modified_costs_bracket_base_costs():
    for seed in range(40):
        inst = gen_random(RandomSpec(seed=seed, n=seed % 5 + 1, p_max=4, v_max=12))
        for eps in (Fraction(1, 10), Fraction(1)):
            rd = RoundedInstance(inst, build_partition(inst, eps))
            for j, func in enumerate(rd.cost_funcs):
                for left in rd.partition.points:
                    base = inst.jobs[j].cost.value_at(left)
                    mod = func.value_at(left)
                    if base is INFEASIBLE:
                        assert mod is INFEASIBLE
                    else:
                        assert mod is not INFEASIBLE
                        assert base <= mod <= (1 + eps) * base


def test_modified_costs_bracket_on_tight(tight4):
    eps = Fraction(1, 2)
    rd = RoundedInstance(tight4, build_partition(tight4, eps))
    for j, func in enumerate(rd.cost_funcs):
        for left in rd.partition.points:
            base = tight4.jobs[j].cost.value_at(left)
            mod = func.value_at(left)
            if base is INFEASIBLE:
                assert mod is INFEASIBLE
            else:
                assert base <= mod <= (1 + eps) * base


def test_tiny_epsilon_keeps_every_breakpoint_and_cost(tight4):
    out = solve_rounded(tight4, Fraction(1, 10**6))
    breakpoints = {t for job in tight4.jobs for t in job.cost.times}
    assert breakpoints <= set(out.partition.points)
    exact = solve_primal_dual(tight4)
    assert out.primal_cost == exact.primal_cost == 16
    assert out.due_dates == exact.due_dates


def test_zero_costs_rounded():
    inst = Instance(tuple(Job(j, 2, CostFunction(())) for j in range(3)))
    out = solve_rounded(inst, Fraction(1, 2))
    assert out.primal_cost == 0 and out.dual_value == 0


def test_snap_left(tight4):
    part = build_partition(tight4, Fraction(1, 2))
    assert part.snap_left(1) == 1
    assert part.snap_left(3) == 1
    assert part.snap_left(4) == 4
    assert part.snap_left(10) == 4
    assert part.snap_left(16) == 12


def test_forward_snap_of_optimum_is_grid_feasible():
    # an optimal assignment snapped to interval left endpoints stays
    # feasible on the grid and costs at most (1 + eps) times the optimum
    for seed in range(40):
        inst = gen_random(RandomSpec(seed=seed, n=seed % 5 + 1, p_max=4, v_max=12))
        opt = exact_opt(inst)
        completions = {}
        clock = 0
        for j in opt.witness:
            clock += inst.jobs[j].p
            completions[j] = clock
        for eps in (Fraction(1, 10), Fraction(1)):
            rd = RoundedInstance(inst, build_partition(inst, eps))
            snapped = [rd.partition.snap_left(completions[j]) for j in range(inst.n)]
            for t in rd.partition.points:
                cover = sum(
                    inst.jobs[j].p for j in range(inst.n) if snapped[j] >= t
                )
                assert cover >= inst.horizon - t + 1
            rounded_cost = sum(
                rd.cost_funcs[j].value_at(snapped[j]) for j in range(inst.n)
            )
            assert rounded_cost <= (1 + eps) * opt.opt_cost


def test_backward_mapping_feasible_with_equal_cost():
    for seed in range(40):
        inst = gen_random(RandomSpec(seed=seed, n=seed % 5 + 1, p_max=4, v_max=12))
        out = solve_rounded(inst, Fraction(1, 2))
        assert check_primal_feasible(out.due_dates, inst, dual=out.dual).feasible
        mapped_cost = sum(
            inst.jobs[j].cost.value_at(out.due_dates[j]) for j in range(inst.n)
        )
        rounded_cost = sum(
            out.rounded.cost_funcs[j].value_at(out.compressed_due_dates[j])
            for j in range(inst.n)
        )
        assert mapped_cost == rounded_cost == out.assignment_cost
        sched = edd_schedule(out.due_dates, inst)
        assert sched.total_cost == out.primal_cost <= out.assignment_cost


def test_rounded_within_bound_of_oracle():
    for seed in range(60):
        inst = gen_random(RandomSpec(seed=seed, n=seed % 6 + 1, p_max=4, v_max=12))
        opt = exact_opt(inst).opt_cost
        for eps in (Fraction(1, 10), Fraction(1)):
            out = solve_rounded(inst, eps)
            assert out.primal_cost <= 4 * (1 + eps) * opt
            if out.dual_value > 0:
                assert out.assignment_cost < 4 * out.dual_value


def test_partition_json_export(tight4):
    rd = RoundedInstance(tight4, build_partition(tight4, Fraction(1, 2)))
    doc = partition_to_json(rd)
    assert doc["intervals"] == [[1, 3], [4, 10], [11, 11], [12, 16]]
    assert doc["modified_costs"][0] == [0, 4, 4, "INF"]
    assert doc["epsilon"] == "1/2"
