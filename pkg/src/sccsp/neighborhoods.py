"""Move operators for the charge and cast permutations.

The charge permutation has eight operators: swap and insert, each restricted
to a small / medium / large positional-distance band, plus two symmetric
exchange operators around a random center (one pair, or up to three
concentric pairs). The cast permutation keeps the three classic unrestricted
operators (swap, insert, exchange). All positions are 0-based.

Distance bands over a permutation of length n (d = |i - j|):

* small:  0 < d <= n/6
* medium: n/6 < d <= n/2
* large:  n/2 < d < n

Thresholds are compared exactly in the rationals (6*d <= n, 2*d <= n), so
bands never overlap and, for n >= 6, partition all distances. Below n = 6
the small band would be empty and falls back to every distance; a medium or
large operator whose band is empty raises :class:`EmptyBand`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum, IntEnum


class EmptyBand(Exception):
    """No position pair satisfies the operator's distance band."""


class TooSmall(Exception):
    """The permutation is too short for the requested operator."""


class Band(Enum):
    SMALL = "small"
    MEDIUM = "medium"
    LARGE = "large"


class ChargeOp(IntEnum):
    SNS = 0  # swap, small band
    MNS = 1  # swap, medium band
    LNS = 2  # swap, large band
    SSI = 3  # insert, small band
    MSI = 4  # insert, medium band
    LSI = 5  # insert, large band
    NE1 = 6  # exchange the pair around a center
    NE3 = 7  # exchange up to three concentric pairs around a center


class CastOp(IntEnum):
    SWAP = 0
    INSERT = 1
    EXCHANGE = 2


SWAP_OPS = (ChargeOp.SNS, ChargeOp.MNS, ChargeOp.LNS)
INSERT_OPS = (ChargeOp.SSI, ChargeOp.MSI, ChargeOp.LSI)
OP_BAND = {
    ChargeOp.SNS: Band.SMALL,
    ChargeOp.MNS: Band.MEDIUM,
    ChargeOp.LNS: Band.LARGE,
    ChargeOp.SSI: Band.SMALL,
    ChargeOp.MSI: Band.MEDIUM,
    ChargeOp.LSI: Band.LARGE,
}


@dataclass(frozen=True)
class Move:
    """A sampled charge move: positions (i, j) for swap/insert, center i for NE ops.

    For insert moves, i is the position of the target charge and j the
    position of the charge being moved (reinserted immediately before the
    target, which is re-located after removal).
    """

    op: ChargeOp
    i: int
    j: int = -1


@dataclass(frozen=True)
class CastMove:
    op: CastOp
    i: int
    j: int = -1


def band_of(i: int, j: int, n: int) -> Band:
    """Classify the distance |i - j| against the three bands of length n."""
    d = abs(i - j)
    if d == 0 or d >= n:
        raise ValueError(f"positions must be distinct and within range, got d={d}")
    if 6 * d <= n:
        return Band.SMALL
    if 2 * d <= n:
        return Band.MEDIUM
    return Band.LARGE


def _band_distances(band: Band, n: int) -> list[int]:
    if band is Band.SMALL:
        ds = [d for d in range(1, n) if 6 * d <= n]
        if not ds:
            ds = list(range(1, n))  # degenerate n < 6: small covers everything
        return ds
    if band is Band.MEDIUM:
        return [d for d in range(1, n) if 6 * d > n and 2 * d <= n]
    return [d for d in range(1, n) if 2 * d > n]


def _sample_banded_pair(band: Band, n: int, rng: random.Random) -> tuple[int, int]:
    """Uniform unordered position pair whose distance lies in the band."""
    ds = _band_distances(band, n)
    if not ds:
        raise EmptyBand(f"{band.value} band is empty for n={n}")
    total = sum(n - d for d in ds)
    r = rng.randrange(total)
    for d in ds:
        r -= n - d
        if r < 0:
            i = rng.randrange(n - d)
            return i, i + d
    raise AssertionError("unreachable")


def sample_charge_move(op: ChargeOp, n: int, rng: random.Random) -> Move:
    """Sample a move of the given operator, uniform over its admissible set."""
    if op in SWAP_OPS:
        if n < 2:
            raise EmptyBand(f"no pairs exist for n={n}")
        a, b = _sample_banded_pair(OP_BAND[op], n, rng)
        return Move(op, a, b)
    if op in INSERT_OPS:
        if n < 2:
            raise EmptyBand(f"no pairs exist for n={n}")
        a, b = _sample_banded_pair(OP_BAND[op], n, rng)
        if rng.random() < 0.5:
            a, b = b, a
        return Move(op, a, b)
    if n < 3:
        raise EmptyBand(f"no valid center for n={n}")
    return Move(op, rng.randrange(1, n - 1))


def ne_pairs(center: int, n: int, depth: int) -> list[tuple[int, int]]:
    return [
        (center - d, center + d)
        for d in range(1, depth + 1)
        if center - d >= 0 and center + d < n
    ]


def apply_charge(u: tuple[int, ...] | list[int], move: Move) -> list[int]:
    """Apply a charge move, returning a new permutation (input untouched)."""
    out = list(u)
    if move.op in SWAP_OPS:
        out[move.i], out[move.j] = out[move.j], out[move.i]
        return out
    if move.op in INSERT_OPS:
        moved = out.pop(move.j)
        idx = move.i - 1 if move.j < move.i else move.i
        out.insert(idx, moved)
        return out
    depth = 1 if move.op is ChargeOp.NE1 else 3
    for a, b in ne_pairs(move.i, len(out), depth):
        out[a], out[b] = out[b], out[a]
    return out


def reordered_pairs(
    u: tuple[int, ...] | list[int], move: Move
) -> list[tuple[int, int]]:
    """The selected charge pairs whose relative order the move reverses,
    as (earlier-after, later-after).

    Swap and exchange always flip their positions. Insert reverses the
    moved/target pair only when the moved charge crosses the target from
    behind; moving a charge that already precedes its target keeps their
    order and reports nothing.
    """
    if move.op in SWAP_OPS:
        lo, hi = sorted((move.i, move.j))
        return [(u[hi], u[lo])]
    if move.op in INSERT_OPS:
        if move.j > move.i:
            return [(u[move.j], u[move.i])]
        return []
    depth = 1 if move.op is ChargeOp.NE1 else 3
    return [(u[b], u[a]) for a, b in ne_pairs(move.i, len(u), depth)]


def sample_cast_move(op: CastOp, z: int, rng: random.Random) -> CastMove:
    """Sample a cast move with uniform positions (no distance bands)."""
    if op is CastOp.EXCHANGE:
        if z < 3:
            raise TooSmall(f"exchange needs at least 3 casts, got {z}")
        return CastMove(op, rng.randrange(1, z - 1))
    if z < 2:
        raise TooSmall(f"{op.name.lower()} needs at least 2 casts, got {z}")
    i = rng.randrange(z)
    j = rng.randrange(z - 1)
    if j >= i:
        j += 1
    return CastMove(op, i, j)


def apply_cast_move(v: tuple[int, ...] | list[int], move: CastMove) -> list[int]:
    out = list(v)
    if move.op is CastOp.SWAP:
        out[move.i], out[move.j] = out[move.j], out[move.i]
        return out
    if move.op is CastOp.INSERT:
        moved = out.pop(move.j)
        idx = move.i - 1 if move.j < move.i else move.i
        out.insert(idx, moved)
        return out
    c = move.i
    out[c - 1], out[c + 1] = out[c + 1], out[c - 1]
    return out


def apply_cast(
    v: tuple[int, ...] | list[int], op: CastOp, rng: random.Random
) -> list[int]:
    """Sample and apply a cast move in one go."""
    return apply_cast_move(v, sample_cast_move(op, len(v), rng))


def cast_move_positions(move: CastMove) -> tuple[int, int]:
    """The two v positions whose casts a move touches."""
    if move.op is CastOp.EXCHANGE:
        return move.i - 1, move.i + 1
    return move.i, move.j
