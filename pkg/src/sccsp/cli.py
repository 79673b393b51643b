"""Command-line interface: gen, solve, bench, gantt, eval.

Errors from documented failure modes (bad grid, malformed instances,
non-permutation inputs, zero reference objective) are reported as a JSON
object on stderr and a nonzero exit code.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict
from pathlib import Path

from .bench import (
    ALGORITHMS,
    BadGrid,
    DivByZero,
    GenSpec,
    bench,
    budget_ms,
    generate,
    run_algorithm,
)
from .decoder import evaluate, gantt_rows
from .hierc import HiercParams, solve_with_context
from .model import (
    InstanceError,
    NotAPermutation,
    Solution,
    read_instance,
    validate_solution,
    write_instance,
)

_CLI_ERRORS = (InstanceError, NotAPermutation, BadGrid, DivByZero)


def _range_pair(text: str) -> tuple[int, int]:
    lo, hi = text.split(":")
    return int(lo), int(hi)


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sccsp")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate an instance file")
    g.add_argument("--stages", type=int, required=True)
    g.add_argument("--casts", type=int, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("-o", "--output", required=True)
    g.add_argument("--offgrid", action="store_true",
                   help="allow sizes outside the standard grid")
    g.add_argument("--proc-range", type=_range_pair, default=(36, 50), metavar="LO:HI")
    g.add_argument("--setup-range", type=_range_pair, default=(80, 100), metavar="LO:HI")
    g.add_argument("--machines-range", type=_range_pair, default=(3, 5), metavar="LO:HI")
    g.add_argument("--alpha-range", type=_range_pair, default=(8, 12), metavar="LO:HI")
    g.add_argument("--transport-range", type=_range_pair, default=(10, 15), metavar="LO:HI")

    s = sub.add_parser("solve", help="run one algorithm on one instance")
    s.add_argument("--inst", required=True)
    s.add_argument("--algo", choices=ALGORITHMS, default="hierc")
    s.add_argument("--lambda", dest="lam", type=float, default=200.0,
                   help="budget factor; wall budget is casts*stages*lambda ms")
    s.add_argument("--budget-evals", type=int, default=None,
                   help="deterministic budget in objective evaluations (overrides wall clock)")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--gamma", type=int, default=5)
    s.add_argument("--alpha", type=float, default=0.2)
    s.add_argument("--eps0", type=float, default=0.9)
    s.add_argument("--epsf", type=float, default=0.1)
    s.add_argument("--sigma", type=float, default=None)
    s.add_argument("--ep-charge", type=int, default=10)
    s.add_argument("--ep-cast", type=int, default=10)
    s.add_argument("--ep-joint", type=int, default=10)
    s.add_argument("--qdump", default=None,
                   help="prefix for Q-table CSV dumps (hierc only)")
    s.add_argument("--trace", default=None,
                   help="write a JSON-lines search trace to this file (hierc only)")
    s.add_argument("-o", "--output", required=True)

    b = sub.add_parser("bench", help="run the benchmark grid")
    b.add_argument("--grid", required=True,
                   help="JSON file: list of generator specs "
                        '[{"stages": 3, "casts": 10, "seed": 1}, ...]')
    b.add_argument("--algos", nargs="+", choices=ALGORITHMS, default=list(ALGORITHMS))
    b.add_argument("--runs", type=int, default=30)
    b.add_argument("--lambda", dest="lam", type=float, default=200.0)
    b.add_argument("--budget-evals", type=int, default=None)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--best-mode", choices=("cross", "self"), default="cross")
    b.add_argument("-o", "--output", required=True)

    ga = sub.add_parser("gantt", help="export machine-occupation rows for a solved run")
    ga.add_argument("--inst", required=True)
    ga.add_argument("--stats", required=True)
    ga.add_argument("-o", "--output", required=True)

    e = sub.add_parser("eval", help="decode and score a given permutation pair")
    e.add_argument("--inst", required=True)
    e.add_argument("--u", required=True, help="comma-separated charge permutation")
    e.add_argument("--v", required=True, help="comma-separated cast permutation")
    e.add_argument("-o", "--output", default=None)
    return p


def _cmd_gen(args) -> int:
    spec = GenSpec(
        stages=args.stages,
        casts=args.casts,
        seed=args.seed,
        proc_range=args.proc_range,
        setup_range=args.setup_range,
        machines_range=args.machines_range,
        alpha_range=args.alpha_range,
        transport_range=args.transport_range,
        allow_offgrid=args.offgrid,
    )
    inst = generate(spec)
    meta = {
        "generator": asdict(spec),
        "note": "processing-time range applies to every stage including casting",
    }
    write_instance(inst, args.output, meta=meta)
    return 0


def _params_from_args(args, inst) -> HiercParams:
    return HiercParams(
        t_total_ms=budget_ms(inst.stage_count, inst.cast_count, args.lam),
        budget_evals=args.budget_evals,
        seed=args.seed,
        gamma=args.gamma,
        alpha=args.alpha,
        eps0=args.eps0,
        eps_final=args.epsf,
        sigma=args.sigma,
        ep_charge=args.ep_charge,
        ep_cast=args.ep_cast,
        ep_joint=args.ep_joint,
    )


def _cmd_solve(args) -> int:
    inst = read_instance(args.inst)
    params = _params_from_args(args, inst)
    if args.algo == "hierc":
        trace_file = open(args.trace, "w") if args.trace else None
        trace_fn = (
            (lambda rec: trace_file.write(json.dumps(rec) + "\n")) if trace_file else None
        )
        try:
            _, _, stats, ctx = solve_with_context(inst, params, trace_fn)
        finally:
            if trace_file:
                trace_file.close()
        if args.qdump:
            ctx.q_charge.dump_csv(f"{args.qdump}_charge.csv")
            ctx.q_cast.dump_csv(f"{args.qdump}_cast.csv")
            ctx.q_joint.dump_csv(f"{args.qdump}_joint.csv")
    else:
        _, stats = run_algorithm(inst, args.algo, params)
    Path(args.output).write_text(json.dumps(stats.to_dict(), indent=2, sort_keys=True) + "\n")
    return 0


def _cmd_bench(args) -> int:
    raw = json.loads(Path(args.grid).read_text())
    specs = [GenSpec(**{k: tuple(v) if isinstance(v, list) else v for k, v in d.items()})
             for d in raw]
    report = bench(
        specs,
        args.algos,
        args.runs,
        args.lam,
        master_seed=args.seed,
        jobs=args.jobs,
        budget_evals=args.budget_evals,
        best_mode=args.best_mode,
    )
    report.to_csv(args.output)
    for algo in args.algos:
        print(f"{algo}: mean ARPD {report.mean_arpd(algo):.3f}")
    return 0


def _cmd_gantt(args) -> int:
    inst = read_instance(args.inst)
    stats = json.loads(Path(args.stats).read_text())
    sol = Solution(tuple(stats["solution"]["u"]), tuple(stats["solution"]["v"]))
    validate_solution(inst, sol)
    rows = gantt_rows(inst, sol)
    Path(args.output).write_text(json.dumps(rows, indent=2) + "\n")
    return 0


def _cmd_eval(args) -> int:
    inst = read_instance(args.inst)
    sol = Solution(
        tuple(int(x) for x in args.u.split(",")),
        tuple(int(x) for x in args.v.split(",")),
    )
    validate_solution(inst, sol)
    f, c_max, f_wait = evaluate(inst, sol)
    out = json.dumps({"f": f, "c_max": c_max, "f_wait": f_wait}, indent=2) + "\n"
    if args.output:
        Path(args.output).write_text(out)
    else:
        sys.stdout.write(out)
    return 0


_COMMANDS = {
    "gen": _cmd_gen,
    "solve": _cmd_solve,
    "bench": _cmd_bench,
    "gantt": _cmd_gantt,
    "eval": _cmd_eval,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except _CLI_ERRORS as exc:
        json.dump({"error": type(exc).__name__, "detail": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 2
    except FileNotFoundError as exc:
        json.dump({"error": "FileNotFound", "detail": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
