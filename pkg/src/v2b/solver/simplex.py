"""Primal simplex for LPs with general variable bounds.

Two-phase dense implementation: rows become equalities via slacks, phase one
minimizes artificial infeasibility, phase two the true objective. Dantzig
pricing with a switch to Bland's rule after ``2 * (rows + cols)`` iterations
guarantees termination on degenerate instances. Intended for the small/medium
models produced in this package; larger models go through the HiGHS backend.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .model import (
    EQ,
    FEASIBILITY_TOL,
    GE,
    LE,
    LinearProgram,
    SolveOutcome,
    SolveStatus,
)

_PIVOT_TOL = 1e-9
_DUAL_TOL = 1e-9

AT_LB, AT_UB, BASIC, FREE = 0, 1, 2, 3


class _Unbounded(Exception):
    pass


class _IterationLimit(Exception):
    pass


@dataclass
class _StandardForm:
    a: np.ndarray  # m x n equality system
    b: np.ndarray
    lb: np.ndarray
    ub: np.ndarray
    n_struct: int


def _standardize(lp: LinearProgram) -> _StandardForm:
    m, n = lp.n_rows, lp.n_vars
    a = np.zeros((m, n + m))
    for i, row in enumerate(lp.rows):
        for j, v in row.items():
            a[i, j] = v
    slack_lb = np.zeros(m)
    slack_ub = np.zeros(m)
    for i, sense in enumerate(lp.senses):
        if sense == LE:
            slack_lb[i], slack_ub[i] = 0.0, math.inf
        elif sense == GE:
            slack_lb[i], slack_ub[i] = -math.inf, 0.0
        else:
            slack_lb[i] = slack_ub[i] = 0.0
        a[i, n + i] = 1.0
    return _StandardForm(
        a=a,
        b=np.asarray(lp.rhs, dtype=float),
        lb=np.concatenate([np.asarray(lp.lb, dtype=float), slack_lb]),
        ub=np.concatenate([np.asarray(lp.ub, dtype=float), slack_ub]),
        n_struct=n,
    )


def _initial_point(lb: np.ndarray, ub: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Every variable nonbasic at its nearest finite bound (free vars at 0)."""
    n = len(lb)
    x = np.zeros(n)
    status = np.full(n, FREE, dtype=int)
    for j in range(n):
        if math.isfinite(lb[j]):
            x[j], status[j] = lb[j], AT_LB
        elif math.isfinite(ub[j]):
            x[j], status[j] = ub[j], AT_UB
    return x, status


def _iterate(
    a: np.ndarray,
    b: np.ndarray,
    c: np.ndarray,
    lb: np.ndarray,
    ub: np.ndarray,
    x: np.ndarray,
    status: np.ndarray,
    basis: list[int],
    bland_after: int,
    max_iter: int,
) -> None:
    """Run simplex pivots in place until optimal; raises on unboundedness."""
    m, n = a.shape
    for it in range(max_iter):
        bmat = a[:, basis]
        rest = b - a @ np.where(status == BASIC, 0.0, x)
        try:
            xb = np.linalg.solve(bmat, rest)
        except np.linalg.LinAlgError:  # singular basis from numerical drift
            raise _IterationLimit("singular basis")
        for k, j in enumerate(basis):
            x[j] = xb[k]

        y = np.linalg.solve(bmat.T, c[basis])
        d = c - a.T @ y

        bland = it >= bland_after
        enter = -1
        best = 0.0
        for j in range(n):
            if status[j] == BASIC:
                continue
            dj = d[j]
            eligible = (
                (status[j] in (AT_LB, FREE) and dj < -_DUAL_TOL)
                or (status[j] in (AT_UB, FREE) and dj > _DUAL_TOL)
            )
            if not eligible:
                continue
            if bland:
                enter = j
                break
            if abs(dj) > best + 1e-15:
                best, enter = abs(dj), j
        if enter < 0:
            return  # optimal

        direction = 1.0 if (status[enter] == AT_LB or (status[enter] == FREE and d[enter] < 0)) else -1.0
        w = np.linalg.solve(bmat, a[:, enter])

        # Ratio test: basic variables move by -direction * w; the entering
        # variable may also flip to its opposite bound.
        t_best = ub[enter] - lb[enter] if status[enter] != FREE else math.inf
        leave_pos = -1
        leave_bound = 0
        for k in range(m):
            jk = basis[k]
            delta = -direction * w[k]
            if delta < -_PIVOT_TOL and math.isfinite(lb[jk]):
                t_k = (x[jk] - lb[jk]) / (-delta)
                hit = AT_LB
            elif delta > _PIVOT_TOL and math.isfinite(ub[jk]):
                t_k = (ub[jk] - x[jk]) / delta
                hit = AT_UB
            else:
                continue
            t_k = max(t_k, 0.0)
            better = t_k < t_best - _PIVOT_TOL
            tie = abs(t_k - t_best) <= _PIVOT_TOL
            prefer = False
            if tie and leave_pos >= 0:
                if bland:
                    prefer = basis[k] < basis[leave_pos]
                else:
                    prefer = abs(w[k]) > abs(w[leave_pos])
            if better or (tie and (leave_pos < 0 or prefer)):
                t_best, leave_pos, leave_bound = t_k, k, hit

        if not math.isfinite(t_best):
            raise _Unbounded(enter)

        x[enter] += direction * t_best
        for k in range(m):
            x[basis[k]] -= direction * t_best * w[k]

        if leave_pos < 0:
            status[enter] = AT_UB if status[enter] == AT_LB else AT_LB
        else:
            leaving = basis[leave_pos]
            basis[leave_pos] = enter
            status[enter] = BASIC
            status[leaving] = leave_bound
            x[leaving] = lb[leaving] if leave_bound == AT_LB else ub[leaving]
    raise _IterationLimit(f"no convergence in {max_iter} iterations")


def solve_lp_native(lp: LinearProgram) -> SolveOutcome:
    """Solve an LP (integrality ignored) with the built-in simplex."""
    lp.validate()
    t0 = time.perf_counter()
    if lp.n_vars == 0:
        return SolveOutcome(SolveStatus.OPTIMAL, lp.constant, np.zeros(0), 0.0, 0.0)

    sf = _standardize(lp)
    m, n_all = sf.a.shape
    x, status = _initial_point(sf.lb, sf.ub)

    # Phase one: artificial column per row, signed so artificials start >= 0.
    resid = sf.b - sf.a @ x
    art_cols = np.zeros((m, m))
    for i in range(m):
        art_cols[i, i] = 1.0 if resid[i] >= 0 else -1.0
    a1 = np.hstack([sf.a, art_cols])
    lb1 = np.concatenate([sf.lb, np.zeros(m)])
    ub1 = np.concatenate([sf.ub, np.full(m, math.inf)])
    x1 = np.concatenate([x, np.abs(resid)])
    status1 = np.concatenate([status, np.full(m, BASIC, dtype=int)])
    basis = list(range(n_all, n_all + m))
    c1 = np.concatenate([np.zeros(n_all), np.ones(m)])

    bland_after = 2 * (m + n_all)
    max_iter = 200 * (m + n_all) + 2000
    try:
        _iterate(a1, sf.b, c1, lb1, ub1, x1, status1, basis, bland_after, max_iter)
    except _Unbounded:  # phase-one objective is bounded below by zero
        return SolveOutcome(SolveStatus.INFEASIBLE, solve_seconds=time.perf_counter() - t0)
    except _IterationLimit:
        return SolveOutcome(SolveStatus.TIME_LIMIT, solve_seconds=time.perf_counter() - t0)

    if float(c1 @ x1) > 1e-7 * max(1.0, float(np.max(np.abs(sf.b))) if m else 1.0):
        return SolveOutcome(SolveStatus.INFEASIBLE, solve_seconds=time.perf_counter() - t0)

    # Phase two: pin artificials to zero, optimize the true objective.
    ub1[n_all:] = 0.0
    x1[n_all:] = np.minimum(x1[n_all:], 0.0)
    c2 = np.concatenate([lp.signed_objective(), np.zeros(m + m)])
    try:
        _iterate(a1, sf.b, c2, lb1, ub1, x1, status1, basis, bland_after, max_iter)
    except _Unbounded:
        return SolveOutcome(SolveStatus.UNBOUNDED, solve_seconds=time.perf_counter() - t0)
    except _IterationLimit:
        return SolveOutcome(SolveStatus.TIME_LIMIT, solve_seconds=time.perf_counter() - t0)

    xs = x1[: lp.n_vars].copy()
    # Snap values sitting on bounds to remove numerical dust.
    lbv, ubv = np.asarray(lp.lb), np.asarray(lp.ub)
    snap = FEASIBILITY_TOL * np.maximum(1.0, np.abs(xs))
    xs = np.where(np.abs(xs - lbv) <= snap, lbv, xs)
    xs = np.where(np.abs(xs - ubv) <= snap, ubv, xs)
    return SolveOutcome(
        SolveStatus.OPTIMAL,
        lp.objective_value(xs),
        xs,
        0.0,
        time.perf_counter() - t0,
    )
