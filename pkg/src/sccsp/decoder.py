"""Schedule decoding and objective evaluation.

Decoding turns a solution (u, v) into concrete timing in two passes:

* forward pass: charges are dispatched in u order through stages 1..S-1
  (earliest-available machine, ties to the lowest index); casts are then
  dispatched in v order onto the casting machines. A cast is poured as one
  uninterrupted block, so its start is pushed to the latest member arrival
  adjusted by the pouring time of the earlier members, and it additionally
  waits for the machine's previous cast plus the cast's setup.
* reverse pass: with the casting stage pinned, every upstream operation is
  pushed as late as possible (bounded by its successor on the machine and by
  the same charge's next-stage start minus transport). This shrinks the
  waiting of hot metal between stages without touching the makespan.

The objective is a weighted sum of the makespan and the average per-charge
waiting time of the reversed schedule.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import Instance, Schedule, Solution

_INVARIANT_CHECKS = False
invariant_checks_run = 0


def set_invariant_checks(enabled: bool) -> None:
    """Globally enable expensive schedule invariant assertions (for audits)."""
    global _INVARIANT_CHECKS
    _INVARIANT_CHECKS = enabled


@dataclass
class DecodeTrace:
    """Machine-level bookkeeping of a forward decode.

    ``stage_sequences[i][a]`` lists the charge ids processed on machine a of
    stage i+1 in order; the casting-stage entry lists cast ids instead.
    ``cast_release[j-1]`` is the earliest block start of cast j permitted by
    its members' arrivals. ``machine_jkey[a]`` is the largest 1-based position
    in machine a's cast sequence whose start equals its release (zero slack);
    0 when every cast on the machine starts strictly after its release.
    """

    stage_sequences: list[list[list[int]]]
    cast_release: list[int]
    cast_machine: list[int]
    cast_start: list[int]
    cast_completion: list[int]
    machine_final: list[int]
    machine_jkey: list[int]


def _argmin(values: list[int]) -> int:
    best = 0
    for a in range(1, len(values)):
        if values[a] < values[best]:
            best = a
    return best


def schedule_casts(
    inst: Instance, v: tuple[int, ...], releases: list[int]
) -> tuple[list[int], list[int], list[int], list[list[int]], list[int], list[int]]:
    """Dispatch casts in v order onto the casting machines.

    Each cast goes to the machine with the earliest last completion (ties to
    the lowest index) and starts at ``max(previous completion + setup,
    release)``; the setup may overlap the wait for arrivals. Returns per-cast
    start/completion/machine plus per-machine cast sequences, final
    completions and critical (zero-slack) positions.
    """
    m = inst.machines_per_stage[-1]
    free = [0] * m
    seq: list[list[int]] = [[] for _ in range(m)]
    z = inst.cast_count
    cast_start = [0] * z
    cast_completion = [0] * z
    cast_machine = [0] * z
    for j in v:
        a = _argmin(free)
        st = free[a] + inst.setup_times[j - 1]
        rel = releases[j - 1]
        if rel > st:
            st = rel
        cast_start[j - 1] = st
        cast_completion[j - 1] = st + inst.cast_casting_total[j - 1]
        cast_machine[j - 1] = a
        free[a] = cast_completion[j - 1]
        seq[a].append(j)
    jkey = [0] * m
    for a in range(m):
        for pos, j in enumerate(seq[a], start=1):
            if cast_start[j - 1] == releases[j - 1]:
                jkey[a] = pos
    return cast_start, cast_completion, cast_machine, seq, free, jkey


def _total_slack(inst: Instance, start: list[list[int]], compl: list[list[int]]) -> int:
    total = 0
    s = inst.stage_count
    tt = inst.transport_times
    for k in range(inst.n_charges):
        row_s = start[k]
        row_c = compl[k]
        for i in range(1, s):
            total += row_s[i] - (row_c[i - 1] + tt[i - 1])
    return total


def forward_decode(inst: Instance, sol: Solution) -> tuple[Schedule, DecodeTrace]:
    """Decode (u, v) front to back; returns the schedule and its trace."""
    s = inst.stage_count
    n = inst.n_charges
    p = inst.processing_times
    start = [[0] * s for _ in range(n)]
    compl = [[0] * s for _ in range(n)]
    mach = [[0] * s for _ in range(n)]
    seqs: list[list[list[int]]] = [
        [[] for _ in range(inst.machines_per_stage[i])] for i in range(s)
    ]

    free = [0] * inst.machines_per_stage[0]
    for k in sol.u:
        a = _argmin(free)
        st = free[a]
        c = st + p[k - 1][0]
        start[k - 1][0] = st
        compl[k - 1][0] = c
        mach[k - 1][0] = a
        free[a] = c
        seqs[0][a].append(k)

    for i in range(1, s - 1):
        t = inst.transport_times[i - 1]
        free = [0] * inst.machines_per_stage[i]
        for k in sol.u:
            arr = compl[k - 1][i - 1] + t
            a = _argmin(free)
            st = arr if arr > free[a] else free[a]
            c = st + p[k - 1][i]
            start[k - 1][i] = st
            compl[k - 1][i] = c
            mach[k - 1][i] = a
            free[a] = c
            seqs[i][a].append(k)

    t_in = inst.transport_times[s - 2]
    offs = inst.charge_cast_offset
    releases = [0] * inst.cast_count
    for j, members in enumerate(inst.cast_members):
        rel = 0
        for c in members:
            lb = compl[c - 1][s - 2] + t_in - offs[c - 1]
            if lb > rel:
                rel = lb
        releases[j] = rel

    cast_start, cast_completion, cast_machine, cast_seq, final, jkey = schedule_casts(
        inst, sol.v, releases
    )
    for j, members in enumerate(inst.cast_members, start=1):
        base = cast_start[j - 1]
        a = cast_machine[j - 1]
        for c in members:
            st = base + offs[c - 1]
            start[c - 1][s - 1] = st
            compl[c - 1][s - 1] = st + p[c - 1][s - 1]
            mach[c - 1][s - 1] = a
    seqs[s - 1] = cast_seq

    c_max = max(cast_completion)
    f_wait = _total_slack(inst, start, compl) / n
    sched = Schedule(
        start=start,
        completion=compl,
        machine_of=mach,
        cast_start=cast_start,
        cast_completion=cast_completion,
        c_max=c_max,
        f_wait=f_wait,
        f=inst.psi1 * c_max + inst.psi2 * f_wait,
    )
    trace = DecodeTrace(
        stage_sequences=seqs,
        cast_release=releases,
        cast_machine=cast_machine,
        cast_start=cast_start,
        cast_completion=cast_completion,
        machine_final=final,
        machine_jkey=jkey,
    )
    if _INVARIANT_CHECKS:
        _verify_schedule(inst, sched)
    return sched, trace


def _machine_sequences(inst: Instance, sched: Schedule) -> list[list[list[int]]]:
    """Rebuild per-machine charge orders from start times (upstream stages only)."""
    s = inst.stage_count
    seqs: list[list[list[int]]] = [
        [[] for _ in range(inst.machines_per_stage[i])] for i in range(s)
    ]
    for i in range(s - 1):
        buckets: list[list[tuple[int, int, int]]] = [
            [] for _ in range(inst.machines_per_stage[i])
        ]
        for k in range(1, inst.n_charges + 1):
            # zero-length operations tie on start; completion disambiguates
            buckets[sched.machine_of[k - 1][i]].append(
                (sched.start[k - 1][i], sched.completion[k - 1][i], k)
            )
        for a, ops in enumerate(buckets):
            ops.sort()
            seqs[i][a] = [k for _, _, k in ops]
    return seqs


def reverse_decode(
    inst: Instance, sched: Schedule, trace: DecodeTrace | None = None
) -> Schedule:
    """Push every non-casting operation as late as possible.

    Casting-stage timings (and hence the makespan) are kept fixed; stages
    S-1 down to 1 are processed with each machine's operations visited in
    reverse order, so every new completion is bounded by the next operation
    on the machine and by the charge's own next-stage start minus transport.
    """
    s = inst.stage_count
    n = inst.n_charges
    p = inst.processing_times
    start = [row[:] for row in sched.start]
    compl = [row[:] for row in sched.completion]
    seqs = trace.stage_sequences if trace is not None else _machine_sequences(inst, sched)

    for i in range(s - 2, -1, -1):
        t_next = inst.transport_times[i]
        for seq in seqs[i]:
            next_start: int | None = None
            for k in reversed(seq):
                bound = start[k - 1][i + 1] - t_next
                if next_start is not None and next_start < bound:
                    bound = next_start
                compl[k - 1][i] = bound
                start[k - 1][i] = bound - p[k - 1][i]
                next_start = start[k - 1][i]

    f_wait = _total_slack(inst, start, compl) / n
    out = Schedule(
        start=start,
        completion=compl,
        machine_of=[row[:] for row in sched.machine_of],
        cast_start=sched.cast_start[:],
        cast_completion=sched.cast_completion[:],
        c_max=sched.c_max,
        f_wait=f_wait,
        f=inst.psi1 * sched.c_max + inst.psi2 * f_wait,
    )
    if _INVARIANT_CHECKS:
        _verify_schedule(inst, out)
    return out


def decode(inst: Instance, sol: Solution) -> tuple[Schedule, DecodeTrace]:
    """Forward plus reverse decode; the returned schedule carries the objective."""
    fwd, trace = forward_decode(inst, sol)
    return reverse_decode(inst, fwd, trace), trace


def evaluate(inst: Instance, sol: Solution) -> tuple[float, int, float]:
    """Objective of a solution: (f, c_max, f_wait) with f = psi1*c_max + psi2*f_wait."""
    sched, _ = decode(inst, sol)
    return sched.f, sched.c_max, sched.f_wait


def _verify_schedule(inst: Instance, sched: Schedule) -> None:
    """Assert cast continuity, machine exclusivity and stage precedence."""
    global invariant_checks_run
    invariant_checks_run += 1
    s = inst.stage_count
    last = s - 1
    for members in inst.cast_members:
        for prev, cur in zip(members, members[1:]):
            assert sched.start[cur - 1][last] == sched.completion[prev - 1][last], (
                f"cast break between charges {prev} and {cur}"
            )
    for i in range(s):
        buckets: dict[int, list[tuple[int, int]]] = {}
        for k in range(1, inst.n_charges + 1):
            buckets.setdefault(sched.machine_of[k - 1][i], []).append(
                (sched.start[k - 1][i], sched.completion[k - 1][i])
            )
        for ops in buckets.values():
            ops.sort()
            for (s1, c1), (s2, _) in zip(ops, ops[1:]):
                assert s1 <= s2 and c1 <= s2, f"overlap on stage {i + 1}"
    for k in range(1, inst.n_charges + 1):
        for i in range(1, s):
            assert (
                sched.start[k - 1][i]
                >= sched.completion[k - 1][i - 1] + inst.transport_times[i - 1]
            ), f"precedence violated for charge {k} into stage {i + 1}"


def gantt_rows(inst: Instance, sol: Solution) -> list[dict]:
    """Flat machine-occupation rows for external plotting.

    Charges yield one row per upstream stage; the casting stage yields one
    row per cast block. Stages and machines are reported 1-based; rows are
    sorted by (stage, machine, start).
    """
    sched, trace = decode(inst, sol)
    rows: list[dict] = []
    s = inst.stage_count
    for k in range(1, inst.n_charges + 1):
        for i in range(s - 1):
            rows.append(
                {
                    "charge": k,
                    "stage": i + 1,
                    "machine": sched.machine_of[k - 1][i] + 1,
                    "start": sched.start[k - 1][i],
                    "end": sched.completion[k - 1][i],
                }
            )
    for j in range(1, inst.cast_count + 1):
        rows.append(
            {
                "cast": j,
                "stage": s,
                "machine": trace.cast_machine[j - 1] + 1,
                "start": sched.cast_start[j - 1],
                "end": sched.cast_completion[j - 1],
            }
        )
    rows.sort(key=lambda r: (r["stage"], r["machine"], r["start"]))
    return rows
