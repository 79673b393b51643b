#!/usr/bin/env python3
"""Desk-scale benchmark: all four algorithms on a small grid, ARPD table out.

A scaled-down version of the full experiment (small casts so that every
algorithm cycles its full machinery inside a few seconds of wall budget).
Writes the per-instance CSV and prints an ARPD summary.
"""

from __future__ import annotations

import argparse

from sccsp.bench import ALGORITHMS, GenSpec, bench


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--runs", type=int, default=10)
    ap.add_argument("--lambda", dest="lam", type=float, default=200.0)
    ap.add_argument("--seed", type=int, default=3)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("-o", "--output", default="desk_report.csv")
    args = ap.parse_args()

    specs = [
        GenSpec(stages=s, casts=z, seed=10 * s + z, alpha_range=(3, 5),
                allow_offgrid=True)
        for s in (3, 4)
        for z in (4, 6)
    ]
    report = bench(specs, list(ALGORITHMS), args.runs, args.lam,
                   master_seed=args.seed, jobs=args.jobs)
    report.to_csv(args.output)

    header = f"{'instance':<12}" + "".join(f"{a:>10}" for a in ALGORITHMS)
    print(header)
    for spec in specs:
        row = f"{spec.label:<12}"
        for algo in ALGORITHMS:
            row += f"{report.entry(spec.label, algo).arpd:>10.3f}"
        print(row)
    print(f"{'mean':<12}" + "".join(f"{report.mean_arpd(a):>10.3f}" for a in ALGORITHMS))
    print(f"\nreport written to {args.output}")


if __name__ == "__main__":
    main()
