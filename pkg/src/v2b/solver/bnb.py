"""Best-first branch-and-bound over LP relaxations.

Node selection is best bound (lowest relaxation objective first), branching is
most-fractional with lowest-index tie-break, so solves are deterministic and
reproducible. The LP relaxations run on the built-in simplex.
"""
from __future__ import annotations

import heapq
import itertools
import math
import time
from typing import Callable, Optional

import numpy as np

from .model import (
    INTEGRALITY_TOL,
    LinearProgram,
    SolveOutcome,
    SolveStatus,
)
from .simplex import solve_lp_native


def _most_fractional(x: np.ndarray, integer_mask: np.ndarray) -> int:
    """Index of the integer variable closest to half-integrality, or -1."""
    best_j = -1
    best_score = 0.0
    for j in np.flatnonzero(integer_mask):
        frac = abs(x[j] - round(x[j]))
        if frac <= INTEGRALITY_TOL:
            continue
        score = min(frac, 1.0 - frac)
        if score > best_score + 1e-12:
            best_score, best_j = score, int(j)
    return best_j


def solve_milp_native(
    lp: LinearProgram,
    gap: float = 1e-4,
    time_limit: float = 30.0,
    lp_solver: Callable[[LinearProgram], SolveOutcome] = solve_lp_native,
) -> SolveOutcome:
    """Branch-and-bound MILP solve to a relative optimality gap (0 = exact).

    ``nodes`` on the outcome counts LP relaxations solved after the root.
    """
    if gap < 0:
        raise ValueError("gap must be non-negative")
    lp.validate()
    t0 = time.perf_counter()
    integer_mask = np.asarray(lp.integer, dtype=bool)
    sign = 1.0 if lp.minimize else -1.0

    base_lb = np.asarray(lp.lb, dtype=float)
    base_ub = np.asarray(lp.ub, dtype=float)

    def relax_with(lbs: np.ndarray, ubs: np.ndarray) -> SolveOutcome:
        saved_lb, saved_ub = lp.lb, lp.ub
        lp.lb, lp.ub = list(lbs), list(ubs)
        try:
            return lp_solver(lp)
        finally:
            lp.lb, lp.ub = saved_lb, saved_ub

    lp_solves = 0
    incumbent_x: Optional[np.ndarray] = None
    incumbent_obj = math.inf  # minimization sense, model constant included
    counter = itertools.count()
    heap: list[tuple[float, int, np.ndarray, np.ndarray]] = [
        (-math.inf, next(counter), base_lb, base_ub)
    ]
    pending_bound: Optional[float] = None  # bound of a node popped but not resolved
    timed_out = False

    while heap:
        bound, _, lbs, ubs = heapq.heappop(heap)
        pending_bound = bound
        if incumbent_x is not None:
            gap_now = (incumbent_obj - bound) / max(1.0, abs(incumbent_obj))
            if gap_now <= gap + 1e-12:
                break
        if time.perf_counter() - t0 > time_limit:
            timed_out = True
            break

        res = relax_with(lbs, ubs)
        lp_solves += 1
        pending_bound = None
        if res.status == SolveStatus.INFEASIBLE:
            continue
        if res.status == SolveStatus.UNBOUNDED:
            return SolveOutcome(
                SolveStatus.UNBOUNDED,
                nodes=max(0, lp_solves - 1),
                solve_seconds=time.perf_counter() - t0,
            )
        if res.status != SolveStatus.OPTIMAL:
            timed_out = True
            break

        node_obj = sign * res.objective
        if incumbent_x is not None and node_obj >= incumbent_obj - 1e-12:
            continue

        j = _most_fractional(res.x, integer_mask)
        if j < 0:
            x_round = res.x.copy()
            idx = np.flatnonzero(integer_mask)
            x_round[idx] = np.round(x_round[idx])
            cand_obj = sign * lp.objective_value(x_round)
            if cand_obj < incumbent_obj - 1e-12:
                incumbent_obj = cand_obj
                incumbent_x = x_round
            continue

        floor_v = math.floor(res.x[j] + INTEGRALITY_TOL)
        down_ub = ubs.copy()
        down_ub[j] = min(down_ub[j], float(floor_v))
        up_lb = lbs.copy()
        up_lb[j] = max(up_lb[j], float(floor_v + 1))
        if down_ub[j] >= lbs[j] - 1e-12:
            heapq.heappush(heap, (node_obj, next(counter), lbs, down_ub))
        if up_lb[j] <= ubs[j] + 1e-12:
            heapq.heappush(heap, (node_obj, next(counter), up_lb, ubs))

    elapsed = time.perf_counter() - t0
    nodes = max(0, lp_solves - 1)
    if incumbent_x is None:
        status = SolveStatus.TIME_LIMIT if timed_out else SolveStatus.INFEASIBLE
        return SolveOutcome(status, nodes=nodes, solve_seconds=elapsed)

    open_bounds = [entry[0] for entry in heap]
    if pending_bound is not None:
        open_bounds.append(pending_bound)
    lower = min(open_bounds) if open_bounds else incumbent_obj
    lower = min(incumbent_obj, lower)
    proven_gap = max(0.0, (incumbent_obj - lower) / max(1.0, abs(incumbent_obj)))
    status = SolveStatus.OPTIMAL
    if timed_out and proven_gap > gap + 1e-12:
        status = SolveStatus.TIME_LIMIT
    return SolveOutcome(status, sign * incumbent_obj, incumbent_x, proven_gap, elapsed, nodes)
