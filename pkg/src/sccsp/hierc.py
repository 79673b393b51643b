"""Top-level solver: improvement cascade with perturbation restarts.

A run starts from a longest-casting-first solution, then repeats a cascade
of the three learning loops (charges, casts, joint), adopting any loop
output that improves the incumbent. When the best-known objective survives
``gamma`` consecutive cascades unimproved, the incumbent is renewed by the
perturb-and-reconstruct strategy and the cascade continues, until the time
budget runs out. Q-tables persist across restarts within a run.
"""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass

from .clock import Clock, EvalClock, WallClock
from .coupling import CouplingParams, coupling_measure, default_sigma
from .decoder import decode
from .model import Instance, Schedule, Solution, validate_instance
from .local_search import SearchBudget, SearchContext, cast_qlsf, charge_qlsf, sqlsf
from .qlearn import EpsilonSchedule
from .renewal import construct_u, d2r


@dataclass
class HiercParams:
    """Knobs of one solver run. ``budget_evals`` switches to the deterministic
    evaluation-count clock; otherwise ``t_total_ms`` of wall time governs."""

    t_total_ms: float = 10_000.0
    budget_evals: int | None = None
    gamma: int = 5
    seed: int = 0
    alpha: float = 0.2
    eps0: float = 0.9
    eps_final: float = 0.1
    sigma: float | None = None
    ep_charge: int = 10
    ep_cast: int = 10
    ep_joint: int = 10
    stall_charge: int | None = None
    stall_cast: int | None = None
    stall_joint: int | None = None
    target_f: float | None = None
    max_iterations: int | None = None


@dataclass
class RunStats:
    """Outcome record of one run, JSON-ready via :meth:`to_dict`."""

    algo: str
    best_f: float
    c_max: int
    f_wait: float
    cm: float
    iterations: int
    d2r_count: int
    trajectory: list[tuple[float, float]]
    seed: int
    params: dict
    evaluations: int
    elapsed: float
    solution: Solution

    def to_dict(self) -> dict:
        return {
            "algo": self.algo,
            "best_f": self.best_f,
            "c_max": self.c_max,
            "f_wait": self.f_wait,
            "cm": self.cm,
            "iterations": self.iterations,
            "d2r_count": self.d2r_count,
            "trajectory": [[t, f] for t, f in self.trajectory],
            "seed": self.seed,
            "params": self.params,
            "evaluations": self.evaluations,
            "elapsed": self.elapsed,
            "solution": {"u": list(self.solution.u), "v": list(self.solution.v)},
        }


def make_clock(params: HiercParams) -> Clock:
    if params.budget_evals is not None:
        return EvalClock(params.budget_evals)
    return WallClock(params.t_total_ms)


def make_context(inst: Instance, params: HiercParams, clock: Clock, rng: random.Random,
                 trace_fn=None) -> SearchContext:
    sigma = params.sigma if params.sigma is not None else default_sigma(inst.n_charges)
    span = clock.budget if clock.budget > 0 else 1.0  # zero budget: never consulted
    return SearchContext(
        inst,
        clock,
        rng,
        coupling_params=CouplingParams(sigma),
        eps=EpsilonSchedule(params.eps0, params.eps_final, span),
        alpha=params.alpha,
        budget=SearchBudget(
            ep_charge=params.ep_charge,
            ep_cast=params.ep_cast,
            ep_joint=params.ep_joint,
            stall_charge=params.stall_charge,
            stall_cast=params.stall_cast,
            stall_joint=params.stall_joint,
        ),
        trace_fn=trace_fn,
    )


def lpt_init(inst: Instance) -> Solution:
    """Casts by descending total casting duration (ties to the lower id),
    charge order reconstructed to match."""
    totals = inst.cast_casting_total
    v = tuple(sorted(range(1, inst.cast_count + 1), key=lambda j: (-totals[j - 1], j)))
    return Solution(construct_u(inst, v), v)


def solve(
    inst: Instance, params: HiercParams, trace_fn=None
) -> tuple[Solution, Schedule, RunStats]:
    """Run the full solver; returns the best solution, its schedule and stats."""
    sol, sched, stats, _ = solve_with_context(inst, params, trace_fn)
    return sol, sched, stats


def solve_with_context(
    inst: Instance, params: HiercParams, trace_fn=None
) -> tuple[Solution, Schedule, RunStats, SearchContext]:
    """As :func:`solve`, additionally exposing the context (Q-tables, counters)."""
    validate_instance(inst)
    rng = random.Random(params.seed)
    clock = make_clock(params)
    ctx = make_context(inst, params, clock, rng, trace_fn)

    cur = lpt_init(inst)
    f_cur, _, _, _ = ctx.evaluate_full(cur)
    best, f_best = cur, f_cur
    trajectory: list[tuple[float, float]] = [(clock.elapsed(), f_best)]
    iterations = 0
    d2r_count = 0

    def finished() -> bool:
        if clock.expired():
            return True
        if params.target_f is not None and f_best <= params.target_f:
            return True
        return params.max_iterations is not None and iterations >= params.max_iterations

    while not finished():
        count = 0
        while count < params.gamma and not finished():
            for loop in (charge_qlsf, cast_qlsf, sqlsf):
                if clock.expired():
                    break
                cand = loop(ctx, cur)
                f_cand, _, _, _ = ctx.evaluate_full(cand)
                if f_cand < f_cur:
                    cur, f_cur = cand, f_cand
            iterations += 1
            if f_cur < f_best:
                best, f_best = cur, f_cur
                count = 0
                trajectory.append((clock.elapsed(), f_best))
            else:
                count += 1
        if finished():
            break
        cur = d2r(inst, cur, rng)
        d2r_count += 1
        f_cur, _, _, _ = ctx.evaluate_full(cur)

    sched, _ = decode(inst, best)
    stats = RunStats(
        algo="hierc",
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
    return best, sched, stats, ctx
