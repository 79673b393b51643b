"""Instance generation, the relative-deviation metric and the benchmark harness.

Instances are sampled from the standard grid (stages in {3,4,5,6}, casts in
{10,15,20,25,30}) with integer uniform draws: processing times in [36, 50],
setups in [80, 100], machines per stage in [3, 5], charges per cast in
[8, 12] and transport times in [10, 15]. Off-grid sizes and other ranges are
allowed behind an explicit override, which is how desk-scale instances for
fast experiments are produced.

The harness runs R independently seeded runs per (instance, algorithm) under
a wall budget of casts x stages x lambda milliseconds, scores each cell by
the average relative percentage deviation from the instance's best run, and
round-trips the whole report through CSV.
"""

from __future__ import annotations

import csv
import hashlib
import json
import random
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

from .baselines import idh_stats, ils_stats, vns_stats
from .hierc import HiercParams, RunStats, solve
from .model import Instance, Solution, validate_instance

GRID_STAGES = (3, 4, 5, 6)
GRID_CASTS = (10, 15, 20, 25, 30)
ALGORITHMS = ("hierc", "idh", "ils", "vns")


class BadGrid(ValueError):
    """Requested (stages, casts) is outside the standard grid and no override was given."""


class DivByZero(ZeroDivisionError):
    """The reference objective is zero, so relative deviation is undefined."""


@dataclass(frozen=True)
class GenSpec:
    """Deterministic instance recipe. Ranges are inclusive on both ends."""

    stages: int
    casts: int
    seed: int
    proc_range: tuple[int, int] = (36, 50)
    setup_range: tuple[int, int] = (80, 100)
    machines_range: tuple[int, int] = (3, 5)
    alpha_range: tuple[int, int] = (8, 12)
    transport_range: tuple[int, int] = (10, 15)
    allow_offgrid: bool = False

    @property
    def label(self) -> str:
        return f"S{self.stages}xZ{self.casts}-{self.seed}"


def generate(spec: GenSpec) -> Instance:
    """Build the instance a spec describes; equal specs yield equal instances.

    Draw order is fixed (machines, cast sizes, transport, setups, then the
    processing table charge by charge), so the instance is a pure function
    of the spec. Charge ids are assigned 1..N in cast order.
    """
    if not spec.allow_offgrid and (
        spec.stages not in GRID_STAGES or spec.casts not in GRID_CASTS
    ):
        raise BadGrid(
            f"(stages={spec.stages}, casts={spec.casts}) is off-grid; "
            "set allow_offgrid to generate it anyway"
        )
    rng = random.Random(spec.seed)
    s, z = spec.stages, spec.casts
    machines = tuple(rng.randint(*spec.machines_range) for _ in range(s))
    alphas = [rng.randint(*spec.alpha_range) for _ in range(z)]
    transport = tuple(rng.randint(*spec.transport_range) for _ in range(s - 1))
    setups = tuple(rng.randint(*spec.setup_range) for _ in range(z))
    members = []
    nxt = 1
    for a in alphas:
        members.append(tuple(range(nxt, nxt + a)))
        nxt += a
    n = nxt - 1
    proc = tuple(
        tuple(rng.randint(*spec.proc_range) for _ in range(s)) for _ in range(n)
    )
    inst = Instance(
        stage_count=s,
        machines_per_stage=machines,
        transport_times=transport,
        cast_members=tuple(members),
        processing_times=proc,
        setup_times=setups,
    )
    validate_instance(inst)
    return inst


def budget_ms(stages: int, casts: int, lam: float) -> float:
    """Per-run wall budget: casts x stages x lambda milliseconds."""
    return casts * stages * lam


def arpd(run_values: list[float], best_overall: float) -> float:
    """Mean relative deviation from the reference objective, in percent."""
    if best_overall == 0:
        raise DivByZero("reference objective is zero")
    return 100.0 * sum((f - best_overall) / best_overall for f in run_values) / len(run_values)


def run_seed(master: int, instance_label: str, algo: str, run_idx: int) -> int:
    """Per-run stream: master seed XOR a stable 64-bit hash of the run's identity."""
    h = hashlib.blake2b(
        f"{instance_label}|{algo}|{run_idx}".encode(), digest_size=8
    ).digest()
    return master ^ int.from_bytes(h, "big")


def run_algorithm(inst: Instance, algo: str, params: HiercParams) -> tuple[Solution, RunStats]:
    if algo == "hierc":
        sol, _, stats = solve(inst, params)
        return sol, stats
    if algo == "idh":
        return idh_stats(inst, params)
    if algo == "ils":
        return ils_stats(inst, params)
    if algo == "vns":
        return vns_stats(inst, params)
    raise ValueError(f"unknown algorithm {algo!r}; choose from {ALGORITHMS}")


@dataclass
class BenchEntry:
    instance: str
    stages: int
    casts: int
    gen_seed: int
    algo: str
    t_total_ms: float
    runs: list[float]
    times: list[float]
    best_overall: float
    arpd: float
    sd: float
    gen_params: str = ""  # JSON of the generator spec, for provenance


@dataclass
class BenchReport:
    entries: list[BenchEntry]

    def mean_arpd(self, algo: str) -> float:
        vals = [e.arpd for e in self.entries if e.algo == algo]
        return sum(vals) / len(vals)

    def entry(self, instance: str, algo: str) -> BenchEntry:
        for e in self.entries:
            if e.instance == instance and e.algo == algo:
                return e
        raise KeyError((instance, algo))

    def to_csv(self, path: str | Path) -> None:
        n_runs = len(self.entries[0].runs) if self.entries else 0
        header = [
            "instance", "stages", "casts", "gen_seed", "algo", "t_total_ms",
            "best_overall", "arpd", "sd", "gen_params",
        ]
        header += [f"f_{i + 1}" for i in range(n_runs)]
        header += [f"ms_{i + 1}" for i in range(n_runs)]
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(header)
            for e in self.entries:
                row = [
                    e.instance, e.stages, e.casts, e.gen_seed, e.algo,
                    repr(e.t_total_ms), repr(e.best_overall), repr(e.arpd), repr(e.sd),
                    e.gen_params,
                ]
                row += [repr(f) for f in e.runs]
                row += [repr(t) for t in e.times]
                w.writerow(row)

    @classmethod
    def from_csv(cls, path: str | Path) -> "BenchReport":
        entries = []
        with open(path, newline="") as fh:
            r = csv.reader(fh)
            header = next(r)
            n_runs = sum(1 for h in header if h.startswith("f_"))
            for row in r:
                base = 10
                entries.append(
                    BenchEntry(
                        instance=row[0],
                        stages=int(row[1]),
                        casts=int(row[2]),
                        gen_seed=int(row[3]),
                        algo=row[4],
                        t_total_ms=float(row[5]),
                        best_overall=float(row[6]),
                        arpd=float(row[7]),
                        sd=float(row[8]),
                        gen_params=row[9],
                        runs=[float(x) for x in row[base : base + n_runs]],
                        times=[float(x) for x in row[base + n_runs : base + 2 * n_runs]],
                    )
                )
        return cls(entries)


def _bench_task(args: tuple) -> tuple[float, float]:
    spec, algo, seed, lam, budget_evals, solver_kwargs = args
    inst = generate(spec)
    params = HiercParams(
        t_total_ms=budget_ms(spec.stages, spec.casts, lam),
        budget_evals=budget_evals,
        seed=seed,
        **solver_kwargs,
    )
    _, stats = run_algorithm(inst, algo, params)
    return stats.best_f, stats.elapsed


def bench(
    specs: list[GenSpec],
    algos: list[str],
    runs: int,
    lam: float,
    master_seed: int = 0,
    *,
    jobs: int = 1,
    budget_evals: int | None = None,
    best_mode: str = "cross",
    solver_kwargs: dict | None = None,
) -> BenchReport:
    """Run the full (instance x algorithm x run) grid and assemble the report.

    The reference objective of each instance is the best run across all
    algorithms (``best_mode="cross"``) or per algorithm (``"self"``). Run
    seeds derive from the master seed via :func:`run_seed`, so runs are
    independent and the grid can execute serially or in a process pool with
    identical results under the evaluation-count budget.
    """
    if runs < 1:
        raise ValueError("runs must be >= 1")
    solver_kwargs = solver_kwargs or {}
    tasks = []
    for spec in specs:
        for algo in algos:
            for r in range(runs):
                tasks.append(
                    (
                        spec,
                        algo,
                        run_seed(master_seed, spec.label, algo, r),
                        lam,
                        budget_evals,
                        solver_kwargs,
                    )
                )
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_bench_task, tasks))
    else:
        results = [_bench_task(t) for t in tasks]

    entries: list[BenchEntry] = []
    idx = 0
    cells: dict[tuple[str, str], tuple[GenSpec, list[float], list[float]]] = {}
    for spec in specs:
        for algo in algos:
            fs, ts = [], []
            for _ in range(runs):
                f, t = results[idx]
                idx += 1
                fs.append(f)
                ts.append(t)
            cells[(spec.label, algo)] = (spec, fs, ts)

    for spec in specs:
        if best_mode == "cross":
            best = min(min(cells[(spec.label, a)][1]) for a in algos)
        for algo in algos:
            _, fs, ts = cells[(spec.label, algo)]
            ref = best if best_mode == "cross" else min(fs)
            entries.append(
                BenchEntry(
                    instance=spec.label,
                    stages=spec.stages,
                    casts=spec.casts,
                    gen_seed=spec.seed,
                    algo=algo,
                    t_total_ms=budget_ms(spec.stages, spec.casts, lam),
                    runs=fs,
                    times=ts,
                    best_overall=ref,
                    arpd=arpd(fs, ref),
                    sd=statistics.pstdev(fs),
                    gen_params=json.dumps(asdict(spec), sort_keys=True),
                )
            )
    return BenchReport(entries)
