"""Solution renewal: perturb the cast order, then rebuild the charge order.

When the search stalls, the cast permutation is either rotated (the suffix
after a random cut moves to the front) or a long segment of it is reversed.
A fresh charge permutation is then constructed to match the new cast order
by timing the casting stage alone and sorting charges by their pouring
start. The renewed solution is handed back regardless of its objective;
acceptance is the caller's concern.
"""

from __future__ import annotations

import random

from .decoder import schedule_casts
from .model import Instance, Solution
from .neighborhoods import TooSmall


def insert_f(v: tuple[int, ...], rng: random.Random) -> tuple[int, ...]:
    """Rotate: move the suffix after a random cut point to the front."""
    z = len(v)
    if z < 2:
        raise TooSmall(f"rotation needs at least 2 casts, got {z}")
    q = rng.randrange(1, z)
    return tuple(v[q:]) + tuple(v[:q])


def inter_r(v: tuple[int, ...], rng: random.Random) -> tuple[int, ...]:
    """Reverse a segment between two positions further apart than a third of Z."""
    z = len(v)
    ds = [d for d in range(1, z) if 3 * d > z]
    if not ds:
        raise TooSmall(f"no position pair is far enough apart for z={z}")
    total = sum(z - d for d in ds)
    r = rng.randrange(total)
    for d in ds:
        r -= z - d
        if r < 0:
            a = rng.randrange(z - d)
            b = a + d
            return tuple(v[:a]) + tuple(reversed(v[a : b + 1])) + tuple(v[b + 1 :])
    raise AssertionError("unreachable")


def construct_u(inst: Instance, v: tuple[int, ...]) -> tuple[int, ...]:
    """Charge order induced by timing the casting stage for v alone.

    Casts are dispatched in v order to the earliest-available casting
    machine (setups included, no arrival constraints); charges are then
    sorted by their pouring start, with ties broken by the cast's position
    in v and the within-cast priority.
    """
    cast_start, _, _, _, _, _ = schedule_casts(inst, v, [0] * inst.cast_count)
    pos_in_v = {j: p for p, j in enumerate(v)}
    offs = inst.charge_cast_offset
    cast_of = inst.charge_cast
    rank = inst.charge_rank
    charges = list(range(1, inst.n_charges + 1))
    charges.sort(
        key=lambda c: (
            cast_start[cast_of[c - 1] - 1] + offs[c - 1],
            pos_in_v[cast_of[c - 1]],
            rank[c - 1],
        )
    )
    return tuple(charges)


def d2r(inst: Instance, sol: Solution, rng: random.Random) -> Solution:
    """Renew a solution: perturb v (50/50 between the two operators), rebuild u.

    Degenerate sizes that admit no perturbation fall through to the
    reconstruction alone.
    """
    use_reversal = rng.random() > 0.5
    try:
        v_new = inter_r(sol.v, rng) if use_reversal else insert_f(sol.v, rng)
    except TooSmall:
        v_new = sol.v
    return Solution(construct_u(inst, v_new), v_new)
