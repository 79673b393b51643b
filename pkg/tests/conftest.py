import random

import pytest
from hypothesis import strategies as st

from sccsp.model import Instance, Solution


def make_instance(
    machines,
    cast_members,
    proc,
    transport=None,
    setups=None,
    psi1=10.0,
    psi2=1.0,
):
    """Compact instance builder for tests; defaults transport/setups to zero."""
    s = len(machines)
    z = len(cast_members)
    return Instance(
        stage_count=s,
        machines_per_stage=tuple(machines),
        transport_times=tuple(transport) if transport is not None else (0,) * (s - 1),
        cast_members=tuple(tuple(m) for m in cast_members),
        processing_times=tuple(tuple(row) for row in proc),
        setup_times=tuple(setups) if setups is not None else (0,) * z,
        psi1=psi1,
        psi2=psi2,
    )


def random_instance(rng: random.Random, max_n=8, max_s=4, max_machines=3) -> Instance:
    """Small random instance for oracle and property sweeps."""
    s = rng.randint(2, max_s)
    z = rng.randint(1, 3)
    sizes = [rng.randint(1, 3) for _ in range(z)]
    while sum(sizes) > max_n:
        sizes[rng.randrange(z)] = 1
    n = sum(sizes)
    members = []
    charges = list(range(1, n + 1))
    rng.shuffle(charges)
    at = 0
    for a in sizes:
        members.append(tuple(charges[at : at + a]))
        at += a
    return Instance(
        stage_count=s,
        machines_per_stage=tuple(rng.randint(1, max_machines) for _ in range(s)),
        transport_times=tuple(rng.randint(0, 6) for _ in range(s - 1)),
        cast_members=tuple(members),
        processing_times=tuple(
            tuple(rng.randint(0, 20) for _ in range(s)) for _ in range(n)
        ),
        setup_times=tuple(rng.randint(0, 10) for _ in range(z)),
    )


def random_solution(rng: random.Random, inst: Instance) -> Solution:
    u = list(range(1, inst.n_charges + 1))
    v = list(range(1, inst.cast_count + 1))
    rng.shuffle(u)
    rng.shuffle(v)
    return Solution(tuple(u), tuple(v))


@st.composite
def instances(draw, max_n=8, max_s=4):
    seed = draw(st.integers(min_value=0, max_value=2**31))
    return random_instance(random.Random(seed), max_n=max_n, max_s=max_s)


@st.composite
def instance_solution_pairs(draw, max_n=8, max_s=4):
    seed = draw(st.integers(min_value=0, max_value=2**31))
    rng = random.Random(seed)
    inst = random_instance(rng, max_n=max_n, max_s=max_s)
    return inst, random_solution(rng, inst)


@pytest.fixture
def tiny_instance():
    """Three charges in two casts, two stages, single machines."""
    return make_instance(
        machines=(1, 1),
        cast_members=((1, 2), (3,)),
        proc=((4, 3), (2, 5), (3, 2)),
        transport=(1,),
        setups=(2, 2),
    )
