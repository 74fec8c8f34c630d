"""HiGHS backend (via scipy.optimize.milp) for larger models.

Used as the production engine for the scenario-coupled scheduling programs;
results are cross-checked against the built-in simplex/branch-and-bound in the
test suite.
"""
from __future__ import annotations

import math
import time

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

from .model import LinearProgram, SolveOutcome, SolveStatus

_STATUS_MAP = {
    0: SolveStatus.OPTIMAL,
    1: SolveStatus.TIME_LIMIT,  # iteration/time limit
    2: SolveStatus.INFEASIBLE,
    3: SolveStatus.UNBOUNDED,
}


def solve_highs(
    lp: LinearProgram, gap: float = 0.0, time_limit: float | None = None
) -> SolveOutcome:
    lp.validate()
    t0 = time.perf_counter()
    c = lp.signed_objective()
    integrality = np.asarray(lp.integer, dtype=int)
    bounds = Bounds(np.asarray(lp.lb, dtype=float), np.asarray(lp.ub, dtype=float))
    options: dict = {"mip_rel_gap": float(gap)}
    if time_limit is not None:
        options["time_limit"] = float(time_limit)
    constraints = ()
    if lp.n_rows:
        mat, lo, hi = lp.constraint_matrix()
        constraints = LinearConstraint(mat, lo, hi)

    res = milp(
        c=c,
        constraints=constraints,
        integrality=integrality,
        bounds=bounds,
        options=options,
    )
    elapsed = time.perf_counter() - t0
    status = _STATUS_MAP.get(res.status, SolveStatus.TIME_LIMIT)
    if res.x is None:
        return SolveOutcome(status, solve_seconds=elapsed)

    x = np.asarray(res.x, dtype=float)
    objective = lp.objective_value(x)
    mip_gap = float(getattr(res, "mip_gap", 0.0) or 0.0)
    nodes = int(getattr(res, "mip_node_count", 0) or 0)
    return SolveOutcome(status, objective, x, mip_gap, elapsed, nodes)
