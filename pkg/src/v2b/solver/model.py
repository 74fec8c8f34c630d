"""Linear/mixed-integer program container and solve outcomes."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.sparse as sp

#: Constraint feasibility tolerance used by every backend.
FEASIBILITY_TOL = 1e-6
#: A variable is considered integral when within this distance of an integer.
INTEGRALITY_TOL = 1e-6


class MalformedModel(ValueError):
    """Model contains non-finite data or inconsistent dimensions."""


class SolveStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    GAP_LIMIT = "gap_limit"
    TIME_LIMIT = "time_limit"


LE, EQ, GE = "<=", "=", ">="


@dataclass
class SolveOutcome:
    """Result of one LP/MILP solve.

    ``objective``/``x`` are None unless an incumbent exists. ``mip_gap`` is the
    relative bound gap proven at termination (0 for LPs and exact solves).
    """

    status: SolveStatus
    objective: Optional[float] = None
    x: Optional[np.ndarray] = None
    mip_gap: float = 0.0
    solve_seconds: float = 0.0
    nodes: int = 0

    @property
    def ok(self) -> bool:
        return self.status in (SolveStatus.OPTIMAL, SolveStatus.GAP_LIMIT) and self.x is not None

    def value(self, index: int) -> float:
        if self.x is None:
            raise ValueError(f"no solution available (status={self.status})")
        return float(self.x[index])


class LinearProgram:
    """Sparse LP/MILP in row form: optimize c'x s.t. row senses, bounds, integrality.

    Rows are kept as ``{column: coefficient}`` dicts; ``constant`` is added to
    the reported objective so model costs can match accounting identities.
    """

    def __init__(self, minimize: bool = True):
        self.minimize = minimize
        self.obj: list[float] = []
        self.lb: list[float] = []
        self.ub: list[float] = []
        self.integer: list[bool] = []
        self.names: list[str] = []
        self.rows: list[dict[int, float]] = []
        self.senses: list[str] = []
        self.rhs: list[float] = []
        self.row_names: list[str] = []
        self.constant: float = 0.0

    @property
    def n_vars(self) -> int:
        return len(self.obj)

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def n_integer(self) -> int:
        return sum(self.integer)

    def add_var(
        self,
        lb: float = 0.0,
        ub: float = math.inf,
        obj: float = 0.0,
        integer: bool = False,
        name: str = "",
    ) -> int:
        if lb > ub:
            raise MalformedModel(f"variable {name or len(self.obj)}: lb {lb} > ub {ub}")
        self.obj.append(float(obj))
        self.lb.append(float(lb))
        self.ub.append(float(ub))
        self.integer.append(bool(integer))
        self.names.append(name or f"x{len(self.obj) - 1}")
        return len(self.obj) - 1

    def add_to_objective(self, index: int, coeff: float) -> None:
        self.obj[index] += float(coeff)

    def add_row(self, coeffs: dict[int, float], sense: str, rhs: float, name: str = "") -> int:
        if sense not in (LE, EQ, GE):
            raise MalformedModel(f"unknown row sense {sense!r}")
        for j in coeffs:
            if not 0 <= j < self.n_vars:
                raise MalformedModel(f"row references unknown column {j}")
        self.rows.append({int(j): float(v) for j, v in coeffs.items() if v != 0.0})
        self.senses.append(sense)
        self.rhs.append(float(rhs))
        self.row_names.append(name or f"c{len(self.rows) - 1}")
        return len(self.rows) - 1

    def fix_var(self, index: int, value: float) -> None:
        self.lb[index] = self.ub[index] = float(value)

    def validate(self) -> None:
        for j in range(self.n_vars):
            if not math.isfinite(self.obj[j]):
                raise MalformedModel(f"objective coefficient of {self.names[j]} is not finite")
            if math.isnan(self.lb[j]) or math.isnan(self.ub[j]):
                raise MalformedModel(f"bounds of {self.names[j]} contain NaN")
        for i, row in enumerate(self.rows):
            if not math.isfinite(self.rhs[i]):
                raise MalformedModel(f"rhs of row {self.row_names[i]} is not finite")
            for j, v in row.items():
                if not math.isfinite(v):
                    raise MalformedModel(
                        f"coefficient of {self.names[j]} in row {self.row_names[i]} is not finite"
                    )

    def constraint_matrix(self) -> tuple[sp.csr_matrix, np.ndarray, np.ndarray]:
        """Rows as a sparse matrix with per-row [lower, upper] activity bounds."""
        data, rows_idx, cols_idx = [], [], []
        for i, row in enumerate(self.rows):
            for j, v in row.items():
                rows_idx.append(i)
                cols_idx.append(j)
                data.append(v)
        mat = sp.csr_matrix(
            (data, (rows_idx, cols_idx)), shape=(self.n_rows, self.n_vars), dtype=float
        )
        lo = np.full(self.n_rows, -np.inf)
        hi = np.full(self.n_rows, np.inf)
        for i, sense in enumerate(self.senses):
            if sense in (GE, EQ):
                lo[i] = self.rhs[i]
            if sense in (LE, EQ):
                hi[i] = self.rhs[i]
        return mat, lo, hi

    def signed_objective(self) -> np.ndarray:
        """Objective as a minimization vector (negated for max problems)."""
        c = np.asarray(self.obj, dtype=float)
        return c if self.minimize else -c

    def check_feasible(self, x: np.ndarray, tol: float = FEASIBILITY_TOL) -> bool:
        x = np.asarray(x, dtype=float)
        scale = max(1.0, float(np.max(np.abs(x))) if x.size else 1.0)
        lb = np.asarray(self.lb)
        ub = np.asarray(self.ub)
        if np.any(x < lb - tol * scale) or np.any(x > ub + tol * scale):
            return False
        mat, lo, hi = self.constraint_matrix()
        act = mat @ x
        row_scale = np.maximum(1.0, np.abs(act))
        return bool(np.all(act >= lo - tol * row_scale) and np.all(act <= hi + tol * row_scale))

    def objective_value(self, x: np.ndarray) -> float:
        return float(np.dot(self.obj, x)) + self.constant
