"""Q-learning core shared by the local-search loops.

States and actions both range over neighborhood structures, so every table
is square: 8x8 for charge moves, 3x3 for cast moves and 24x24 for the joint
space (every cast structure paired with every charge structure). Rewards
come from a four-quadrant rule over the change in objective and in coupling,
and values are blended in with a constant learning rate, which keeps every
entry inside [0, max reward].
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path

import numpy as np

N_CHARGE = 8
N_CAST = 3
N_JOINT = N_CHARGE * N_CAST

REWARD_BOTH = 1.5  # objective improved and coupling improved
REWARD_FITNESS = 1.0  # objective improved only
REWARD_COUPLING = 0.2  # coupling improved only
REWARD_NONE = 0.0


class QTable:
    """Square state-action value table, zero-initialized."""

    def __init__(self, size: int):
        self.values = np.zeros((size, size))

    @property
    def size(self) -> int:
        return self.values.shape[0]

    def dump_csv(self, path: str | Path) -> None:
        np.savetxt(path, self.values, delimiter=",", fmt="%.17g")


@dataclass(frozen=True)
class EpsilonSchedule:
    """Linear exploration decay from eps0 down to eps_final over t_total."""

    eps0: float
    eps_final: float
    t_total: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.eps_final <= self.eps0 <= 1.0:
            raise ValueError(
                f"need 0 <= eps_final <= eps0 <= 1, got {self.eps_final}, {self.eps0}"
            )
        if not self.t_total > 0:
            raise ValueError(f"t_total must be positive, got {self.t_total}")


def epsilon_at(sched: EpsilonSchedule, t_current: float) -> float:
    """Exploration rate after t_current of t_total has elapsed (endpoints exact)."""
    if t_current <= 0:
        return sched.eps0
    if t_current >= sched.t_total:
        return sched.eps_final
    frac = (sched.t_total - t_current) / sched.t_total
    return sched.eps_final + (sched.eps0 - sched.eps_final) * frac


def select_action(q: QTable, state: int, eps: float, rng: random.Random) -> int:
    """Epsilon-greedy: random with probability eps, else row argmax (lowest index wins ties)."""
    if rng.random() < eps:
        return rng.randrange(q.size)
    return int(np.argmax(q.values[state]))


def reward(delta_f: float, delta_cm: float) -> float:
    """Four-quadrant reward over objective change and coupling change."""
    if delta_f < 0:
        return REWARD_BOTH if delta_cm > 0 else REWARD_FITNESS
    return REWARD_COUPLING if delta_cm > 0 else REWARD_NONE


def update(q: QTable, state: int, action: int, r: float, alpha: float) -> None:
    """One-step blend: Q <- (1 - alpha) * Q + alpha * r.

    Evaluated as Q + alpha * (r - Q); this order cannot round past the
    reward bound, so entries stay inside [0, max reward] bit-exactly.
    """
    old = q.values[state, action]
    q.values[state, action] = old + alpha * (r - old)


def joint_flatten(charge_idx: int, cast_idx: int) -> int:
    """Flatten a (charge structure, cast structure) pair to 0..23, cast-major."""
    return cast_idx * N_CHARGE + charge_idx


def joint_unflatten(idx: int) -> tuple[int, int]:
    """Inverse of :func:`joint_flatten`: (charge structure, cast structure)."""
    return idx % N_CHARGE, idx // N_CHARGE
