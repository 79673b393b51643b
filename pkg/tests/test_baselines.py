from sccsp.baselines import idh, idh_stats, ils, ils_stats, vns, vns_stats
from sccsp.bench import GenSpec, generate
from sccsp.decoder import decode, evaluate
from sccsp.hierc import HiercParams, lpt_init
from sccsp.model import validate_solution

from conftest import make_instance
from oracle import exhaustive_best


def test_idh_is_deterministic():
    inst = generate(GenSpec(stages=4, casts=10, seed=3))
    s1, sched1 = idh(inst)
    s2, sched2 = idh(inst)
    assert s1 == s2
    assert sched1.f == sched2.f
    assert sched1.start == sched2.start


def test_idh_single_cast_equals_lpt_initialization():
    inst = make_instance(
        machines=(1, 1, 1),
        cast_members=((1, 2, 3),),
        proc=((3, 2, 4), (2, 4, 3), (4, 1, 2)),
        transport=(1, 2),
        setups=(5,),
    )
    sol, sched = idh(inst)
    ref = lpt_init(inst)
    assert sol == ref
    ref_sched, _ = decode(inst, ref)
    assert sched.start == ref_sched.start
    assert sched.f == ref_sched.f


def test_idh_never_beats_the_exhaustive_optimum():
    for seed in range(5):
        inst = generate(
            GenSpec(stages=2, casts=2, seed=seed, alpha_range=(1, 2),
                    machines_range=(1, 2), allow_offgrid=True)
        )
        _, sched = idh(inst)
        assert sched.f >= exhaustive_best(inst)


def test_idh_solution_validates_and_stats_are_consistent():
    inst = generate(GenSpec(stages=3, casts=10, seed=7))
    sol, stats = idh_stats(inst, HiercParams(seed=0))
    validate_solution(inst, sol)
    assert stats.best_f == evaluate(inst, sol)[0]
    assert stats.algo == "idh"


def test_search_shells_with_zero_budget_return_initialization():
    inst = generate(
        GenSpec(stages=3, casts=3, seed=1, alpha_range=(2, 3),
                machines_range=(1, 2), allow_offgrid=True)
    )
    params = HiercParams(budget_evals=0, seed=4)
    assert ils(inst, params) == lpt_init(inst)
    assert vns(inst, params) == lpt_init(inst)


def test_search_shells_improve_monotonically():
    inst = generate(
        GenSpec(stages=3, casts=4, seed=2, alpha_range=(2, 3),
                machines_range=(1, 2), allow_offgrid=True)
    )
    init_f = evaluate(inst, lpt_init(inst))[0]
    for runner in (ils_stats, vns_stats):
        sol, stats = runner(inst, HiercParams(budget_evals=2500, seed=9))
        fs = [f for _, f in stats.trajectory]
        assert all(a > b for a, b in zip(fs, fs[1:]))
        assert stats.best_f <= init_f
        assert stats.best_f == evaluate(inst, sol)[0]
        validate_solution(inst, sol)


def test_search_shells_are_seed_deterministic():
    inst = generate(
        GenSpec(stages=3, casts=3, seed=5, alpha_range=(2, 3),
                machines_range=(1, 2), allow_offgrid=True)
    )
    params = HiercParams(budget_evals=1500, seed=21)
    assert ils(inst, params) == ils(inst, params)
    assert vns(inst, params) == vns(inst, params)
