"""Self-contained LP/MILP solving core with an optional HiGHS backend.

``solve_lp``/``solve_milp`` default to the built-in bounded-variable primal
simplex and best-first branch-and-bound. ``backend="highs"`` routes through
scipy's HiGHS wrapper for the larger scenario-coupled models; both backends
honor the same :class:`LinearProgram`/:class:`SolveOutcome` contract. A model
instance must not be shared between concurrent solves.
"""
from __future__ import annotations

import numpy as np

from .bnb import solve_milp_native
from .highs import solve_highs
from .lpfile import to_lp_format
from .model import (
    EQ,
    FEASIBILITY_TOL,
    GE,
    INTEGRALITY_TOL,
    LE,
    LinearProgram,
    MalformedModel,
    SolveOutcome,
    SolveStatus,
)
from .simplex import solve_lp_native

NATIVE = "native"
HIGHS = "highs"


def solve_lp(program: LinearProgram, backend: str = NATIVE) -> SolveOutcome:
    """Solve a pure LP. Raises if any variable is marked integer."""
    if program.n_integer:
        raise MalformedModel("solve_lp called on a model with integer variables")
    if backend == NATIVE:
        return solve_lp_native(program)
    if backend == HIGHS:
        return solve_highs(program, gap=0.0)
    raise ValueError(f"unknown backend {backend!r}")


def solve_milp(
    program: LinearProgram,
    gap: float = 1e-4,
    time_limit: float = 30.0,
    backend: str = NATIVE,
) -> SolveOutcome:
    """Solve a MILP to the requested relative gap within the time limit."""
    if gap < 0:
        raise ValueError("gap must be non-negative")
    if backend == NATIVE:
        return solve_milp_native(program, gap=gap, time_limit=time_limit)
    if backend == HIGHS:
        return solve_highs(program, gap=gap, time_limit=time_limit)
    raise ValueError(f"unknown backend {backend!r}")


def brute_force_milp(program: LinearProgram) -> SolveOutcome:
    """Exhaustive enumeration oracle for small all-binary integer parts.

    Enumerates every assignment of the integer variables (which must have
    tight, small bound ranges), solving the continuous remainder by LP. Used
    only by tests as an independent check of :func:`solve_milp`.
    """
    idx = [j for j in range(program.n_vars) if program.integer[j]]
    ranges = []
    for j in idx:
        lo, hi = int(np.ceil(program.lb[j])), int(np.floor(program.ub[j]))
        if hi - lo > 8:
            raise ValueError("enumeration oracle limited to small integer ranges")
        ranges.append(range(lo, hi + 1))

    best: SolveOutcome | None = None
    saved = (list(program.lb), list(program.ub))

    def assign(k: int) -> None:
        nonlocal best
        if k == len(idx):
            integer_backup = program.integer
            program.integer = [False] * program.n_vars
            try:
                res = solve_lp_native(program)
            finally:
                program.integer = integer_backup
            if res.status != SolveStatus.OPTIMAL:
                return
            if best is None or (
                res.objective < best.objective if program.minimize else res.objective > best.objective
            ):
                best = res
            return
        j = idx[k]
        for v in ranges[k]:
            program.lb[j] = program.ub[j] = float(v)
            assign(k + 1)

    try:
        assign(0)
    finally:
        program.lb, program.ub = saved

    if best is None:
        return SolveOutcome(SolveStatus.INFEASIBLE)
    return best


__all__ = [
    "EQ",
    "GE",
    "LE",
    "FEASIBILITY_TOL",
    "INTEGRALITY_TOL",
    "LinearProgram",
    "MalformedModel",
    "SolveOutcome",
    "SolveStatus",
    "NATIVE",
    "HIGHS",
    "solve_lp",
    "solve_milp",
    "solve_lp_native",
    "solve_milp_native",
    "solve_highs",
    "brute_force_milp",
    "to_lp_format",
]
