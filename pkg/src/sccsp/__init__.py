"""Solver library and benchmark harness for steelmaking-continuous-casting scheduling."""

from .bench import GenSpec, arpd, bench, budget_ms, generate, run_algorithm
from .baselines import idh, ils, vns
from .coupling import CouplingParams, coupling_measure, virtual_sequence
from .decoder import decode, evaluate, forward_decode, gantt_rows, reverse_decode
from .hierc import HiercParams, RunStats, lpt_init, solve
from .model import (
    Instance,
    Schedule,
    Solution,
    read_instance,
    validate_instance,
    validate_solution,
    write_instance,
)

__version__ = "0.1.0"

__all__ = [
    "CouplingParams",
    "GenSpec",
    "HiercParams",
    "Instance",
    "RunStats",
    "Schedule",
    "Solution",
    "arpd",
    "bench",
    "budget_ms",
    "coupling_measure",
    "decode",
    "evaluate",
    "forward_decode",
    "gantt_rows",
    "generate",
    "idh",
    "ils",
    "lpt_init",
    "read_instance",
    "reverse_decode",
    "run_algorithm",
    "solve",
    "validate_instance",
    "validate_solution",
    "virtual_sequence",
    "vns",
    "write_instance",
]
