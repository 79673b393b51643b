"""Reference algorithms: the industrial dispatching heuristic and two
classic search shells over the same operator pool and decoder.

All three share the solver's evaluation path and budget contract, so
benchmark comparisons differ only in search logic:

* ``idh`` is the deterministic one-shot heuristic used on the shop floor:
  casts sorted longest-first, then dispatched shortest-first to the earliest
  casting machine; charges ordered by the resulting pouring starts; upstream
  operations placed as late as possible (the shared reverse pass).
* ``ils`` is iterated local search: first-improvement descent with one fixed
  charge operator and one fixed cast operator, restarted from a
  perturb-and-reconstruct renewal, keeping the better local optimum.
* ``vns`` is basic variable neighborhood search: the shake step cycles
  systematically through all eleven operator structures (one random move of
  the current structure), followed by one fixed first-improvement descent;
  improvement returns the cycle to the first structure.
"""

from __future__ import annotations

import random
from dataclasses import asdict

from .clock import Clock
from .coupling import coupling_measure
from .decoder import decode, schedule_casts
from .hierc import HiercParams, RunStats, lpt_init, make_clock, make_context
from .local_search import SearchContext
from .model import Instance, Schedule, Solution, validate_instance
from .neighborhoods import (
    CastOp,
    ChargeOp,
    EmptyBand,
    TooSmall,
    apply_cast_move,
    apply_charge,
    sample_cast_move,
    sample_charge_move,
)
from .renewal import d2r


def idh(inst: Instance) -> tuple[Solution, Schedule]:
    """Deterministic industrial heuristic; two calls agree exactly."""
    validate_instance(inst)
    totals = inst.cast_casting_total
    lpt = sorted(range(1, inst.cast_count + 1), key=lambda j: (-totals[j - 1], j))
    dispatch = tuple(reversed(lpt))
    cast_start, _, _, _, _, _ = schedule_casts(inst, dispatch, [0] * inst.cast_count)

    pos = {j: p for p, j in enumerate(dispatch)}
    offs = inst.charge_cast_offset
    cast_of = inst.charge_cast
    rank = inst.charge_rank
    charges = list(range(1, inst.n_charges + 1))
    charges.sort(
        key=lambda c: (
            cast_start[cast_of[c - 1] - 1] + offs[c - 1],
            pos[cast_of[c - 1]],
            rank[c - 1],
        )
    )
    sol = Solution(tuple(charges), dispatch)
    sched, _ = decode(inst, sol)
    return sol, sched


def _mk_stats(
    algo: str,
    inst: Instance,
    ctx: SearchContext,
    clock: Clock,
    best: Solution,
    trajectory: list[tuple[float, float]],
    iterations: int,
    d2r_count: int,
    params: HiercParams,
) -> RunStats:
    sched, _ = decode(inst, best)
    return RunStats(
        algo=algo,
        best_f=sched.f,
        c_max=sched.c_max,
        f_wait=sched.f_wait,
        cm=coupling_measure(inst, best, ctx.coupling_params),
        iterations=iterations,
        d2r_count=d2r_count,
        trajectory=trajectory,
        seed=params.seed,
        params=asdict(params),
        evaluations=ctx.evaluations,
        elapsed=clock.elapsed(),
        solution=best,
    )


def idh_stats(inst: Instance, params: HiercParams) -> tuple[Solution, RunStats]:
    sol, sched = idh(inst)
    return sol, RunStats(
        algo="idh",
        best_f=sched.f,
        c_max=sched.c_max,
        f_wait=sched.f_wait,
        cm=0.0,
        iterations=1,
        d2r_count=0,
        trajectory=[(0.0, sched.f)],
        seed=params.seed,
        params=asdict(params),
        evaluations=1,
        elapsed=0.0,
        solution=sol,
    )


def _descent(
    ctx: SearchContext,
    sol: Solution,
    f_sol: float,
    charge_op: ChargeOp | None,
    cast_op: CastOp | None,
    stall: int,
) -> tuple[Solution, float]:
    """First-improvement sampling over the given operator(s) until it stalls."""
    inst = ctx.inst
    n, z = inst.n_charges, inst.cast_count
    count = 0
    while count <= stall:
        if ctx.clock.expired():
            break
        pick_cast = cast_op is not None and (
            charge_op is None or ctx.rng.random() < 0.5
        )
        try:
            if pick_cast:
                move = sample_cast_move(cast_op, z, ctx.rng)
                cand = Solution(sol.u, tuple(apply_cast_move(sol.v, move)))
            else:
                cmove = sample_charge_move(charge_op, n, ctx.rng)
                cand = Solution(tuple(apply_charge(sol.u, cmove)), sol.v)
        except (EmptyBand, TooSmall):
            count += 1
            continue
        f_new, _, _, _ = ctx.evaluate_full(cand)
        if f_new < f_sol:
            sol, f_sol = cand, f_new
            count = 0
        else:
            count += 1
    return sol, f_sol


def _finished(ctx: SearchContext, params: HiercParams, f_best: float) -> bool:
    if ctx.clock.expired():
        return True
    return params.target_f is not None and f_best <= params.target_f


def ils_stats(
    inst: Instance, params: HiercParams, rng: random.Random | None = None
) -> tuple[Solution, RunStats]:
    validate_instance(inst)
    rng = rng if rng is not None else random.Random(params.seed)
    clock = make_clock(params)
    ctx = make_context(inst, params, clock, rng)
    n, z = inst.n_charges, inst.cast_count

    cur = lpt_init(inst)
    f_cur, _, _, _ = ctx.evaluate_full(cur)
    best, f_best = cur, f_cur
    trajectory = [(clock.elapsed(), f_best)]
    cur, f_cur = _descent(ctx, cur, f_cur, ChargeOp.SSI, CastOp.SWAP, n + z)
    if f_cur < f_best:
        best, f_best = cur, f_cur
        trajectory.append((clock.elapsed(), f_best))

    iterations = 0
    perturbations = 0
    while not _finished(ctx, params, f_best):
        cand = d2r(inst, cur, rng)
        perturbations += 1
        f_cand, _, _, _ = ctx.evaluate_full(cand)
        cand, f_cand = _descent(ctx, cand, f_cand, ChargeOp.SSI, CastOp.SWAP, n + z)
        if f_cand < f_cur:
            cur, f_cur = cand, f_cand
        if f_cur < f_best:
            best, f_best = cur, f_cur
            trajectory.append((clock.elapsed(), f_best))
        iterations += 1
    return best, _mk_stats(
        "ils", inst, ctx, clock, best, trajectory, iterations, perturbations, params
    )


def ils(inst: Instance, params: HiercParams, rng: random.Random | None = None) -> Solution:
    """Iterated local search over the shared operators; best solution under budget."""
    return ils_stats(inst, params, rng)[0]


_VNS_STRUCTURES: list[tuple[ChargeOp | None, CastOp | None]] = [
    (op, None) for op in ChargeOp
] + [(None, op) for op in CastOp]


def vns_stats(
    inst: Instance, params: HiercParams, rng: random.Random | None = None
) -> tuple[Solution, RunStats]:
    validate_instance(inst)
    rng = rng if rng is not None else random.Random(params.seed)
    clock = make_clock(params)
    ctx = make_context(inst, params, clock, rng)
    n, z = inst.n_charges, inst.cast_count

    cur = lpt_init(inst)
    f_cur, _, _, _ = ctx.evaluate_full(cur)
    best, f_best = cur, f_cur
    trajectory = [(clock.elapsed(), f_best)]

    cur, f_cur = _descent(ctx, cur, f_cur, ChargeOp.SNS, CastOp.SWAP, n + z)
    if f_cur < f_best:
        best, f_best = cur, f_cur
        trajectory.append((clock.elapsed(), f_best))

    iterations = 0
    k = 0
    while not _finished(ctx, params, f_best):
        charge_op, cast_op = _VNS_STRUCTURES[k]
        try:
            if charge_op is not None:
                move = sample_charge_move(charge_op, n, ctx.rng)
                shaken = Solution(tuple(apply_charge(cur.u, move)), cur.v)
            else:
                vmove = sample_cast_move(cast_op, z, ctx.rng)
                shaken = Solution(cur.u, tuple(apply_cast_move(cur.v, vmove)))
        except (EmptyBand, TooSmall):
            k = (k + 1) % len(_VNS_STRUCTURES)
            iterations += 1
            continue
        f_shaken, _, _, _ = ctx.evaluate_full(shaken)
        cand, f_cand = _descent(ctx, shaken, f_shaken, ChargeOp.SNS, CastOp.SWAP, n + z)
        if f_cand < f_cur:
            cur, f_cur = cand, f_cand
            k = 0
        else:
            k = (k + 1) % len(_VNS_STRUCTURES)
        if f_cur < f_best:
            best, f_best = cur, f_cur
            trajectory.append((clock.elapsed(), f_best))
        iterations += 1
    return best, _mk_stats("vns", inst, ctx, clock, best, trajectory, iterations, 0, params)


def vns(inst: Instance, params: HiercParams, rng: random.Random | None = None) -> Solution:
    """Variable neighborhood search over all eleven structures; best under budget."""
    return vns_stats(inst, params, rng)[0]
