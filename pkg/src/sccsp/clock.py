"""Search budgets: real wall time or a deterministic evaluation count.

Stochastic runs under a wall-clock budget are not bit-reproducible (the
number of iterations depends on machine load), so every solver also accepts
an evaluation-count budget: the clock then advances one tick per objective
evaluation, which makes runs with equal seeds identical everywhere. Both
clocks expose the same interface; ``budget`` and ``elapsed`` share a unit
(milliseconds or ticks).
"""

from __future__ import annotations

import time


class WallClock:
    def __init__(self, budget_ms: float):
        self.budget = float(budget_ms)
        self._t0 = time.perf_counter()

    def elapsed(self) -> float:
        return (time.perf_counter() - self._t0) * 1000.0

    def expired(self) -> bool:
        return self.elapsed() >= self.budget

    def tick(self) -> None:
        pass


class EvalClock:
    def __init__(self, budget_evals: int):
        self.budget = float(budget_evals)
        self.count = 0

    def elapsed(self) -> float:
        return float(self.count)

    def expired(self) -> bool:
        return self.count >= self.budget

    def tick(self) -> None:
        self.count += 1


Clock = WallClock | EvalClock
