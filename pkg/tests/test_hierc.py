import json

from sccsp.bench import GenSpec, generate
from sccsp.decoder import evaluate
from sccsp.hierc import HiercParams, lpt_init, solve
from sccsp.model import validate_solution

from conftest import make_instance
from oracle import exhaustive_best


def test_lpt_orders_casts_by_total_casting_time():
    inst = make_instance(
        machines=(1, 1),
        cast_members=((1, 2), (3, 4), (5, 6)),
        proc=(
            (1, 10), (1, 20),   # cast 1 total 30
            (1, 25), (1, 25),   # cast 2 total 50
            (1, 15), (1, 25),   # cast 3 total 40
        ),
    )
    sol = lpt_init(inst)
    assert sol.v == (2, 3, 1)
    validate_solution(inst, sol)


def test_lpt_breaks_ties_by_lower_cast_id():
    inst = make_instance(
        machines=(1, 1),
        cast_members=((1,), (2,), (3,)),
        proc=((1, 7), (1, 7), (1, 7)),
    )
    assert lpt_init(inst).v == (1, 2, 3)


def small_instance(seed=0):
    return generate(
        GenSpec(stages=3, casts=3, seed=seed, alpha_range=(2, 3),
                machines_range=(1, 2), allow_offgrid=True)
    )


def test_zero_budget_returns_the_initial_solution():
    inst = small_instance()
    sol, sched, stats = solve(inst, HiercParams(budget_evals=0, seed=1))
    assert sol == lpt_init(inst)
    assert stats.best_f == evaluate(inst, sol)[0]
    assert stats.iterations == 0


def test_result_never_worse_than_initialization():
    for seed in range(8):
        inst = small_instance(seed)
        init_f = evaluate(inst, lpt_init(inst))[0]
        _, _, stats = solve(inst, HiercParams(budget_evals=1200, seed=seed))
        assert stats.best_f <= init_f


def test_trajectory_is_strictly_decreasing_and_stats_consistent():
    inst = small_instance(3)
    sol, sched, stats = solve(inst, HiercParams(budget_evals=4000, seed=5))
    fs = [f for _, f in stats.trajectory]
    assert fs[0] >= fs[-1]
    assert all(a > b for a, b in zip(fs, fs[1:]))
    assert stats.best_f == fs[-1] == sched.f
    validate_solution(inst, sol)
    d = stats.to_dict()
    json.dumps(d)  # JSON-ready
    assert d["solution"]["u"] == list(sol.u)


def test_identical_runs_are_identical():
    inst = small_instance(6)
    params = HiercParams(budget_evals=3000, seed=11)
    r1 = solve(inst, params)
    r2 = solve(inst, params)
    assert r1[0] == r2[0]
    assert r1[2].to_dict() == r2[2].to_dict()


def test_perturbation_fires_after_gamma_stalls():
    inst = small_instance(7)
    _, _, stats = solve(inst, HiercParams(budget_evals=20000, seed=2, gamma=2))
    assert stats.d2r_count >= 1


def test_iteration_cap_bounds_the_run():
    inst = small_instance(4)
    _, _, stats = solve(
        inst, HiercParams(budget_evals=10**9, seed=3, max_iterations=4)
    )
    assert stats.iterations == 4


def test_tiny_instances_reach_global_optimum():
    # desk-scale version of the optimality sweep (full version in acceptance)
    inst = make_instance(
        machines=(1, 1, 1),
        cast_members=((1, 2), (3, 4)),
        proc=((4, 2, 3), (2, 5, 2), (5, 1, 4), (3, 3, 2)),
        transport=(1, 1),
        setups=(2, 1),
    )
    target = exhaustive_best(inst)
    hits = 0
    for seed in range(20):
        _, _, stats = solve(
            inst, HiercParams(budget_evals=6000, seed=seed, target_f=target)
        )
        if stats.best_f == target:
            hits += 1
    assert hits >= 19
