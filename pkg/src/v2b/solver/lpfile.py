"""Plain-text export in the industry LP file format (for external cross-checks)."""
from __future__ import annotations

import math

from .model import EQ, GE, LE, LinearProgram

_SENSE_TOKEN = {LE: "<=", EQ: "=", GE: ">="}


def _term(coeff: float, name: str, first: bool) -> str:
    sign = "-" if coeff < 0 else ("" if first else "+")
    mag = abs(coeff)
    body = name if mag == 1.0 else f"{mag:.12g} {name}"
    return f"{sign} {body}".strip() if not first or sign else f"{sign}{body}"


def _expression(coeffs: dict[int, float], names: list[str]) -> str:
    parts: list[str] = []
    for j in sorted(coeffs):
        c = coeffs[j]
        if c == 0.0:
            continue
        parts.append(_term(c, names[j], first=not parts))
    return " ".join(parts) if parts else "0 " + (names[0] if names else "x0")


def to_lp_format(lp: LinearProgram, name: str = "model") -> str:
    """Serialize the program so external solvers can cross-check objectives."""
    lines = [f"\\ {name}", "Minimize" if lp.minimize else "Maximize"]
    obj_coeffs = {j: c for j, c in enumerate(lp.obj) if c != 0.0}
    lines.append(" obj: " + _expression(obj_coeffs, lp.names))
    lines.append("Subject To")
    for i, row in enumerate(lp.rows):
        lines.append(
            f" {lp.row_names[i]}: "
            + _expression(row, lp.names)
            + f" {_SENSE_TOKEN[lp.senses[i]]} {lp.rhs[i]:.12g}"
        )
    lines.append("Bounds")
    for j in range(lp.n_vars):
        lo, hi = lp.lb[j], lp.ub[j]
        nm = lp.names[j]
        if lo == hi:
            lines.append(f" {nm} = {lo:.12g}")
        elif math.isinf(lo) and math.isinf(hi):
            lines.append(f" {nm} free")
        elif math.isinf(hi):
            lines.append(f" {lo:.12g} <= {nm}")
        elif math.isinf(lo):
            lines.append(f" -inf <= {nm} <= {hi:.12g}")
        else:
            lines.append(f" {lo:.12g} <= {nm} <= {hi:.12g}")
    integers = [lp.names[j] for j in range(lp.n_vars) if lp.integer[j]]
    if integers:
        lines.append("Generals")
        lines.append(" " + " ".join(integers))
    lines.append("End")
    return "\n".join(lines) + "\n"
