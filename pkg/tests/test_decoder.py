import itertools
import random

from hypothesis import given, settings

from sccsp.decoder import (
    decode,
    evaluate,
    forward_decode,
    gantt_rows,
    reverse_decode,
    _verify_schedule,
)
from sccsp.model import Solution

from conftest import instance_solution_pairs, make_instance
from oracle import exhaustive_best, simulate


def chain_instance():
    """One charge through three single-machine stages: 10 +5+ 10 +5+ 10."""
    return make_instance(
        machines=(1, 1, 1),
        cast_members=((1,),),
        proc=((10, 10, 10),),
        transport=(5, 5),
        setups=(0,),
    )


def test_single_charge_chain_timing():
    inst = chain_instance()
    sol = Solution((1,), (1,))
    sched, _ = forward_decode(inst, sol)
    assert sched.start[0][2] == 30
    assert sched.c_max == 40
    rev = reverse_decode(inst, sched)
    assert rev.c_max == 40
    assert rev.f_wait == 0.0
    assert evaluate(inst, sol) == (400.0, 40, 0.0)


def test_weight_projection_onto_makespan():
    inst = make_instance(
        machines=(1, 1),
        cast_members=((1, 2),),
        proc=((3, 4), (5, 2)),
        transport=(2,),
        psi1=1.0,
        psi2=0.0,
    )
    f, c_max, _ = evaluate(inst, Solution((1, 2), (1,)))
    assert f == c_max


def test_zero_workload_has_zero_makespan():
    inst = make_instance(
        machines=(2, 1),
        cast_members=((1, 2), (3,)),
        proc=((0, 0), (0, 0), (0, 0)),
    )
    f, c_max, f_wait = evaluate(inst, Solution((1, 2, 3), (1, 2)))
    assert (f, c_max, f_wait) == (0.0, 0, 0.0)


def test_late_member_arrival_delays_whole_cast_block():
    # second member's arrival forces the block to start after the first's
    inst = make_instance(
        machines=(1, 1),
        cast_members=((1, 2),),
        proc=((10, 5), (30, 4)),
    )
    sol = Solution((1, 2), (1,))
    sched, _ = forward_decode(inst, sol)
    # arrivals are 10 and 40; offsets 0 and 5, so the block starts at 35
    assert sched.cast_start[0] == 35
    assert sched.start[0][1] == 35 and sched.completion[0][1] == 40
    assert sched.start[1][1] == 40 and sched.completion[1][1] == 44
    assert sched.start[1][1] - sched.completion[0][1] == 0
    oc_max, _ = simulate(inst, sol)
    assert sched.c_max == oc_max


def test_reverse_decode_shrinks_waiting_but_not_makespan():
    inst = make_instance(
        machines=(2, 1, 1),
        cast_members=((1, 2),),
        proc=((5, 4, 3), (5, 4, 3)),
    )
    sol = Solution((1, 2), (1,))
    fwd, trace = forward_decode(inst, sol)
    rev = reverse_decode(inst, fwd, trace)
    assert rev.c_max == fwd.c_max
    assert rev.f_wait < fwd.f_wait
    oc_max, of_wait = simulate(inst, sol)
    assert (rev.c_max, rev.f_wait) == (oc_max, of_wait)


def test_reverse_decode_is_idempotent_and_never_moves_left():
    rng = random.Random(5)
    from conftest import random_instance, random_solution

    for _ in range(60):
        inst = random_instance(rng)
        sol = random_solution(rng, inst)
        fwd, trace = forward_decode(inst, sol)
        rev = reverse_decode(inst, fwd, trace)
        again = reverse_decode(inst, rev)
        assert again.start == rev.start and again.completion == rev.completion
        for k in range(inst.n_charges):
            for i in range(inst.stage_count):
                assert rev.start[k][i] >= fwd.start[k][i]


@settings(max_examples=120, deadline=None)
@given(instance_solution_pairs())
def test_schedule_invariants_hold(pair):
    inst, sol = pair
    fwd, trace = forward_decode(inst, sol)
    _verify_schedule(inst, fwd)
    rev = reverse_decode(inst, fwd, trace)
    _verify_schedule(inst, rev)


@settings(max_examples=150, deadline=None)
@given(instance_solution_pairs())
def test_decoder_matches_simulation_oracle(pair):
    inst, sol = pair
    sched, _ = decode(inst, sol)
    assert (sched.c_max, sched.f_wait) == simulate(inst, sol)


def test_exhaustive_minimum_matches_oracle_minimum():
    inst = make_instance(
        machines=(2, 1),
        cast_members=((1, 2), (3, 4)),
        proc=((3, 2), (1, 4), (2, 3), (4, 1)),
        transport=(1,),
        setups=(2, 1),
    )
    lib_best = exhaustive_best(inst)
    oracle_best = min(
        inst.psi1 * c + inst.psi2 * w
        for u in itertools.permutations(range(1, 5))
        for v in itertools.permutations(range(1, 3))
        for c, w in [simulate(inst, Solution(u, v))]
    )
    assert lib_best == oracle_best


def test_gantt_rows_are_sorted_and_complete(tiny_instance):
    rows = gantt_rows(tiny_instance, Solution((1, 2, 3), (1, 2)))
    keys = [(r["stage"], r["machine"], r["start"]) for r in rows]
    assert keys == sorted(keys)
    charge_rows = [r for r in rows if "charge" in r]
    cast_rows = [r for r in rows if "cast" in r]
    assert len(charge_rows) == 3 * (tiny_instance.stage_count - 1)
    assert len(cast_rows) == tiny_instance.cast_count
    for r in rows:
        assert r["end"] >= r["start"]
