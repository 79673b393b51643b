"""Problem data and solution representation for steelmaking-continuous-casting scheduling.

An instance describes N charges (batches of molten steel) that flow through
stages 1..S-1 (steelmaking and refining, parallel machines per stage) and are
then cast on stage S. Charges are grouped into Z casts; each cast is poured
without interruption on a single casting machine, in a fixed within-cast
order, after a sequence-independent setup.

A solution is a pair of permutations: ``u`` orders the charges (dispatch
order for the upstream stages) and ``v`` orders the casts (dispatch order at
the casting stage).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Any, Sequence


class InstanceError(ValueError):
    """Base class for instance validation failures."""


class DuplicateCharge(InstanceError):
    """A charge identifier appears in more than one cast."""


class SizeMismatch(InstanceError):
    """A structural size (stage count, table shape, cast size) is inconsistent."""


class NegativeTime(InstanceError):
    """A duration, setup, transport time or weight is out of range."""


class NotAPermutation(ValueError):
    """A solution component is not a permutation of the expected identifiers."""


def _is_count(x: Any) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _tuplize(rows: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(r) for r in rows)


@dataclass(frozen=True)
class Instance:
    """Immutable problem instance.

    Charges are identified 1..N, casts 1..Z. ``transport_times[i]`` is the
    transfer time from stage i+1 into stage i+2 (1-based stages 2..S); there
    is no transport into stage 1. ``processing_times[k-1][i-1]`` is the
    duration of charge k at stage i; the stage-S entry is the charge's
    casting duration. All times are integer minutes.
    """

    stage_count: int
    machines_per_stage: tuple[int, ...]
    transport_times: tuple[int, ...]
    cast_members: tuple[tuple[int, ...], ...]
    processing_times: tuple[tuple[int, ...], ...]
    setup_times: tuple[int, ...]
    psi1: float = 10.0
    psi2: float = 1.0
    cast_sizes: tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        object.__setattr__(self, "machines_per_stage", tuple(self.machines_per_stage))
        object.__setattr__(self, "transport_times", tuple(self.transport_times))
        object.__setattr__(self, "cast_members", _tuplize(self.cast_members))
        object.__setattr__(self, "processing_times", _tuplize(self.processing_times))
        object.__setattr__(self, "setup_times", tuple(self.setup_times))
        if not self.cast_sizes:
            object.__setattr__(self, "cast_sizes", tuple(len(m) for m in self.cast_members))
        else:
            object.__setattr__(self, "cast_sizes", tuple(self.cast_sizes))

    @property
    def cast_count(self) -> int:
        return len(self.cast_members)

    @cached_property
    def n_charges(self) -> int:
        return sum(len(m) for m in self.cast_members)

    @cached_property
    def charge_cast(self) -> tuple[int, ...]:
        """Cast id (1-based) of each charge, indexed by charge-1."""
        out = [0] * self.n_charges
        for j, members in enumerate(self.cast_members, start=1):
            for c in members:
                out[c - 1] = j
        return tuple(out)

    @cached_property
    def charge_rank(self) -> tuple[int, ...]:
        """Within-cast position (0-based) of each charge, indexed by charge-1."""
        out = [0] * self.n_charges
        for members in self.cast_members:
            for r, c in enumerate(members):
                out[c - 1] = r
        return tuple(out)

    @cached_property
    def charge_cast_offset(self) -> tuple[int, ...]:
        """Casting time of the earlier members of the charge's cast, per charge."""
        out = [0] * self.n_charges
        for members in self.cast_members:
            acc = 0
            for c in members:
                out[c - 1] = acc
                acc += self.processing_times[c - 1][self.stage_count - 1]
        return tuple(out)

    @cached_property
    def cast_casting_total(self) -> tuple[int, ...]:
        """Total casting duration of each cast, indexed by cast-1."""
        last = self.stage_count - 1
        return tuple(
            sum(self.processing_times[c - 1][last] for c in members)
            for members in self.cast_members
        )


@dataclass(frozen=True)
class Solution:
    """A charge permutation ``u`` (of 1..N) and a cast permutation ``v`` (of 1..Z)."""

    u: tuple[int, ...]
    v: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "u", tuple(self.u))
        object.__setattr__(self, "v", tuple(self.v))


@dataclass
class Schedule:
    """Decoded timing of a solution.

    ``start[k-1][i-1]`` / ``completion[k-1][i-1]`` give the interval of
    charge k at stage i; ``machine_of`` the assigned machine index (0-based
    within the stage). Casting-stage entries of a charge are its own pouring
    slice inside its cast's block.
    """

    start: list[list[int]]
    completion: list[list[int]]
    machine_of: list[list[int]]
    cast_start: list[int]
    cast_completion: list[int]
    c_max: int
    f_wait: float
    f: float


def validate_instance(inst: Instance) -> None:
    """Raise an :class:`InstanceError` subclass if any instance invariant fails."""
    s = inst.stage_count
    if not _is_count(s) or s < 2:
        raise SizeMismatch(f"stages: need an integer >= 2, got {s!r}")
    if len(inst.machines_per_stage) != s:
        raise SizeMismatch(
            f"machines: expected {s} entries, got {len(inst.machines_per_stage)}"
        )
    for i, m in enumerate(inst.machines_per_stage, start=1):
        if not _is_count(m) or m < 1:
            raise SizeMismatch(f"machines: stage {i} has invalid machine count {m!r}")
    if len(inst.transport_times) != s - 1:
        raise SizeMismatch(
            f"transport: expected {s - 1} entries, got {len(inst.transport_times)}"
        )
    for i, t in enumerate(inst.transport_times, start=2):
        if not _is_count(t) or t < 0:
            raise NegativeTime(f"transport: entry into stage {i} is {t!r}")

    z = inst.cast_count
    if z < 1:
        raise SizeMismatch("casts: need at least one cast")
    if len(inst.cast_sizes) != z:
        raise SizeMismatch(f"cast_sizes: expected {z} entries, got {len(inst.cast_sizes)}")
    for j, (size, members) in enumerate(zip(inst.cast_sizes, inst.cast_members), start=1):
        if not _is_count(size) or size < 1:
            raise SizeMismatch(f"cast_sizes: cast {j} has invalid size {size!r}")
        if size != len(members):
            raise SizeMismatch(
                f"cast_sizes: cast {j} declares {size} charges but lists {len(members)}"
            )

    n = inst.n_charges
    seen: set[int] = set()
    for j, members in enumerate(inst.cast_members, start=1):
        for c in members:
            if c in seen:
                raise DuplicateCharge(f"casts: charge {c} appears in more than one cast")
            seen.add(c)
    if seen != set(range(1, n + 1)):
        raise SizeMismatch("casts: charge identifiers must be exactly 1..N")

    if len(inst.processing_times) != n:
        raise SizeMismatch(f"proc: expected {n} rows, got {len(inst.processing_times)}")
    for k, row in enumerate(inst.processing_times, start=1):
        if len(row) != s:
            raise SizeMismatch(f"proc: charge {k} has {len(row)} entries, expected {s}")
        for i, p in enumerate(row, start=1):
            if not _is_count(p) or p < 0:
                raise NegativeTime(f"proc: charge {k} stage {i} duration is {p!r}")
    if len(inst.setup_times) != z:
        raise SizeMismatch(f"setup: expected {z} entries, got {len(inst.setup_times)}")
    for j, st in enumerate(inst.setup_times, start=1):
        if not _is_count(st) or st < 0:
            raise NegativeTime(f"setup: cast {j} setup is {st!r}")

    if not inst.psi1 > 0:
        raise NegativeTime(f"weights.psi1: must be > 0, got {inst.psi1!r}")
    if inst.psi2 < 0:
        raise NegativeTime(f"weights.psi2: must be >= 0, got {inst.psi2!r}")


def validate_solution(inst: Instance, sol: Solution) -> None:
    """Raise :class:`NotAPermutation` unless u, v are permutations of 1..N and 1..Z."""
    n, z = inst.n_charges, inst.cast_count
    if len(sol.u) != n or set(sol.u) != set(range(1, n + 1)):
        raise NotAPermutation(f"u: not a permutation of 1..{n}")
    if len(sol.v) != z or set(sol.v) != set(range(1, z + 1)):
        raise NotAPermutation(f"v: not a permutation of 1..{z}")


def instance_to_dict(inst: Instance, meta: dict | None = None) -> dict:
    d: dict = {
        "stages": inst.stage_count,
        "machines": list(inst.machines_per_stage),
        "transport": list(inst.transport_times),
        "casts": [
            {"id": j, "charges": list(members), "setup": setup}
            for j, (members, setup) in enumerate(
                zip(inst.cast_members, inst.setup_times), start=1
            )
        ],
        "proc": [list(row) for row in inst.processing_times],
        "weights": {"psi1": inst.psi1, "psi2": inst.psi2},
    }
    if meta is not None:
        d["meta"] = meta
    return d


def instance_from_dict(d: dict) -> Instance:
    casts = sorted(d["casts"], key=lambda c: c["id"])
    ids = [c["id"] for c in casts]
    if ids != list(range(1, len(casts) + 1)):
        raise SizeMismatch(f"casts: ids must be exactly 1..Z, got {ids}")
    inst = Instance(
        stage_count=d["stages"],
        machines_per_stage=tuple(d["machines"]),
        transport_times=tuple(d["transport"]),
        cast_members=tuple(tuple(c["charges"]) for c in casts),
        processing_times=tuple(tuple(row) for row in d["proc"]),
        setup_times=tuple(c["setup"] for c in casts),
        psi1=d["weights"]["psi1"],
        psi2=d["weights"]["psi2"],
    )
    validate_instance(inst)
    return inst


def write_instance(inst: Instance, path: str | Path, meta: dict | None = None) -> None:
    Path(path).write_text(json.dumps(instance_to_dict(inst, meta), indent=2) + "\n")


def read_instance(path: str | Path) -> Instance:
    return instance_from_dict(json.loads(Path(path).read_text()))
