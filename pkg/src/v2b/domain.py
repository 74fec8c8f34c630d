"""Core value types, unit conventions, and cost accounting.

Canonical units throughout the package: energy in kWh, power in kW, money in
USD, time as step indices on a :class:`TimeGrid` (step length ``step_hours``).
State of charge is stored in kWh internally; percent-of-capacity appears only
at the behavior/UI boundary.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime
from typing import Iterable, Mapping, Sequence, TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:  # pragma: no cover
    from .charging.state import Schedule


class DomainError(ValueError):
    """Argument outside the physical/contractual domain of an operation."""


class DimensionMismatch(ValueError):
    """Series lengths do not agree with the time grid."""


class EmptyBillingPeriod(ValueError):
    """Demand cost requested over zero days."""


#: Sentinel level index used when a user declines every offer.
REJECT = -1

UNIDIRECTIONAL = "unidirectional"
BIDIRECTIONAL = "bidirectional"


@dataclass(frozen=True)
class TimeGrid:
    """Uniform discretization of one operating day.

    ``peak_window`` is a half-open ``[lo, hi)`` interval of step indices during
    which demand charges (and the peak energy rate) apply.
    """

    start: datetime
    step_hours: float
    steps: int
    peak_window: tuple[int, int]

    def __post_init__(self):
        if self.step_hours <= 0:
            raise DomainError(f"step_hours must be positive, got {self.step_hours}")
        if self.steps < 1:
            raise DomainError(f"steps must be >= 1, got {self.steps}")
        lo, hi = self.peak_window
        if not (0 <= lo <= hi <= self.steps):
            raise DomainError(f"peak_window {self.peak_window} not within [0, {self.steps}]")

    @property
    def tau(self) -> float:
        return self.step_hours

    def hour_of_step(self, t: int) -> float:
        return (self.start.hour + self.start.minute / 60.0 + t * self.step_hours) % 24.0

    def step_at_hour(self, hour: float) -> int:
        return int(round((hour - self.start.hour - self.start.minute / 60.0) / self.step_hours))

    def in_peak_window(self, t: int) -> bool:
        lo, hi = self.peak_window
        return lo <= t < hi

    def peak_steps(self) -> range:
        return range(self.peak_window[0], self.peak_window[1])


@dataclass(frozen=True)
class Tariff:
    """Site tariff: per-step energy prices plus flat demand/penalty rates.

    ``energy_price`` is $/kWh per step, ``demand_rate`` $/kW of billing-period
    peak, ``k_soc`` $/kWh of departure shortfall, ``k_batt`` $/kWh discharged,
    ``external_rate`` $/kWh at the outside-option charger.
    """

    energy_price: np.ndarray
    demand_rate: float
    k_soc: float
    k_batt: float
    external_rate: float

    def __post_init__(self):
        object.__setattr__(self, "energy_price", np.asarray(self.energy_price, dtype=float))
        if np.any(self.energy_price < 0):
            raise DomainError("energy prices must be non-negative")
        for name in ("demand_rate", "k_soc", "k_batt", "external_rate"):
            if getattr(self, name) < 0:
                raise DomainError(f"{name} must be non-negative")

    @classmethod
    def time_of_use(
        cls,
        grid: TimeGrid,
        peak_rate: float,
        offpeak_rate: float,
        demand_rate: float,
        k_soc: float,
        k_batt: float,
        external_rate: float,
    ) -> "Tariff":
        """Two-rate tariff with the peak energy rate on the grid's peak window."""
        price = np.full(grid.steps, offpeak_rate, dtype=float)
        lo, hi = grid.peak_window
        price[lo:hi] = peak_rate
        return cls(price, demand_rate, k_soc, k_batt, external_rate)

    def check_grid(self, grid: TimeGrid) -> None:
        if len(self.energy_price) != grid.steps:
            raise DimensionMismatch(
                f"energy price series has {len(self.energy_price)} entries for a "
                f"{grid.steps}-step grid"
            )


@dataclass(frozen=True)
class ChargerSpec:
    """One physical charger. Rates are kW at the grid connection.

    Unidirectional chargers have ``rate_min == 0``; bidirectional ones have
    ``rate_min < 0`` (discharge). ``efficiency`` scales usable rate.
    """

    id: str
    directionality: str
    rate_min: float
    rate_max: float
    efficiency: float = 1.0
    controlled: bool = True

    def __post_init__(self):
        if self.directionality not in (UNIDIRECTIONAL, BIDIRECTIONAL):
            raise DomainError(f"unknown directionality {self.directionality!r}")
        if self.rate_max <= 0:
            raise DomainError("rate_max must be positive")
        if self.directionality == UNIDIRECTIONAL and self.rate_min != 0:
            raise DomainError("unidirectional chargers must have rate_min == 0")
        if self.directionality == BIDIRECTIONAL and self.rate_min >= 0:
            raise DomainError("bidirectional chargers must have rate_min < 0")
        if not 0 < self.efficiency <= 1:
            raise DomainError("efficiency must be in (0, 1]")

    @property
    def bidirectional(self) -> bool:
        return self.directionality == BIDIRECTIONAL


@dataclass(frozen=True)
class SessionRequest:
    """An EV user's arrival state and requested departure/SoC.

    ``t_arr`` / ``t_req`` are step indices with the session occupying steps
    ``[t_arr, t_dep)``; all energies are kWh. ``e_max`` doubles as the battery
    capacity used for percent-of-capacity conversions.
    """

    user_id: str
    t_arr: int
    e_arr: float
    e_req: float
    t_req: int
    e_min: float
    e_max: float
    user_type: int = 0

    def __post_init__(self):
        if not self.e_min <= self.e_arr <= self.e_max:
            raise DomainError(
                f"{self.user_id}: arrival SoC {self.e_arr} outside [{self.e_min}, {self.e_max}]"
            )
        if not self.e_min <= self.e_req <= self.e_max:
            raise DomainError(
                f"{self.user_id}: requested SoC {self.e_req} outside [{self.e_min}, {self.e_max}]"
            )
        if self.t_arr >= self.t_req:
            raise DomainError(f"{self.user_id}: t_arr {self.t_arr} must precede t_req {self.t_req}")

    @property
    def capacity(self) -> float:
        return self.e_max

    @property
    def requested_energy(self) -> float:
        return max(0.0, self.e_req - self.e_arr)

    def check_grid(self, grid: TimeGrid) -> None:
        if not (0 <= self.t_arr < self.t_req <= grid.steps):
            raise DomainError(f"{self.user_id}: window [{self.t_arr}, {self.t_req}) outside grid")


@dataclass(frozen=True)
class NegotiatedChoice:
    """Outcome of one session negotiation.

    ``level`` is the accepted offer index, or :data:`REJECT`. For accepted
    choices, ``e_dep_target``/``t_dep`` are the negotiated commitments and
    ``price`` is the user's charge in $ (``utility`` the marginal system-cost
    reduction attributed to the session).
    """

    request: SessionRequest
    level: int
    e_dep_target: float
    t_dep: int
    price: float
    utility: float

    def __post_init__(self):
        if self.level == 0:
            if abs(self.e_dep_target - self.request.e_req) > 1e-9 or self.t_dep != self.request.t_req:
                raise DomainError("level-0 choice must keep the requested SoC and departure")

    @property
    def rejected(self) -> bool:
        return self.level == REJECT


@dataclass(frozen=True)
class CostBreakdown:
    """Building-side cost of one schedule over one billing span."""

    energy: float
    demand: float
    missing_soc_penalty: float
    battery_penalty: float
    total: float

    def __post_init__(self):
        parts = self.energy + self.demand + self.missing_soc_penalty + self.battery_penalty
        if abs(parts - self.total) > 1e-9 * max(1.0, abs(parts)):
            raise DomainError(f"total {self.total} != sum of parts {parts}")
        for name in ("demand", "missing_soc_penalty", "battery_penalty"):
            if getattr(self, name) < -1e-9:
                raise DomainError(f"{name} must be non-negative")

    @classmethod
    def from_parts(
        cls, energy: float, demand: float, missing_soc_penalty: float, battery_penalty: float
    ) -> "CostBreakdown":
        return cls(
            energy,
            demand,
            missing_soc_penalty,
            battery_penalty,
            energy + demand + missing_soc_penalty + battery_penalty,
        )

    def __add__(self, other: "CostBreakdown") -> "CostBreakdown":
        return CostBreakdown.from_parts(
            self.energy + other.energy,
            self.demand + other.demand,
            self.missing_soc_penalty + other.missing_soc_penalty,
            self.battery_penalty + other.battery_penalty,
        )


def step_energy_cost(load_kw: float, ev_energy_kwh: float, price: float, step_hours: float) -> float:
    """Energy cost of one step: price x (building energy + EV charger energy).

    May be negative when aggregate discharge exceeds building energy use;
    callers that disallow grid export must reject such schedules.
    """
    if step_hours <= 0:
        raise DomainError("step_hours must be positive")
    return price * (load_kw * step_hours + ev_energy_kwh)


def billing_demand_cost(daily_peaks: Sequence[float], demand_rate: float) -> float:
    """Demand cost over a billing period: rate x max of daily peaks.

    The billing-period peak equals the max over per-day peaks exactly, so days
    can be optimized independently and aggregated here.
    """
    peaks = list(daily_peaks)
    if not peaks:
        raise EmptyBillingPeriod("no daily peaks supplied")
    if min(peaks) < 0:
        raise DomainError("daily peaks must be non-negative")
    return demand_rate * max(peaks)


def total_cost(
    schedule: "Schedule",
    loads: np.ndarray,
    tariff: Tariff,
    choices: Iterable[NegotiatedChoice] = (),
) -> CostBreakdown:
    """Cost breakdown of a finished day.

    * energy: sum of per-step energy costs (building + EV),
    * demand: demand rate x peak aggregate power inside the peak window,
    * missing-SoC: one-sided shortfall against each accepted target,
    * battery: per-kWh penalty on every discharged kWh.
    """
    grid = schedule.grid
    loads = np.asarray(loads, dtype=float)
    if len(loads) != grid.steps:
        raise DimensionMismatch(f"load series length {len(loads)} != grid steps {grid.steps}")
    tariff.check_grid(grid)

    ev_by_step = schedule.ev_energy_by_step()
    energy = float(
        sum(
            step_energy_cost(loads[t], ev_by_step[t], tariff.energy_price[t], grid.tau)
            for t in range(grid.steps)
        )
    )

    lo, hi = grid.peak_window
    if hi > lo:
        p = loads + ev_by_step / grid.tau
        demand = billing_demand_cost([float(np.max(p[lo:hi]))], tariff.demand_rate)
    else:
        demand = 0.0

    missing = 0.0
    for choice in choices:
        if choice.rejected:
            continue
        rates = schedule.rates.get(choice.request.user_id)
        delivered = float(np.sum(rates)) if rates is not None else 0.0
        realized = choice.request.e_arr + delivered
        missing += max(0.0, choice.e_dep_target - realized)
    missing_penalty = tariff.k_soc * missing

    discharge = sum(float(np.sum(np.maximum(0.0, -r))) for r in schedule.rates.values())
    battery_penalty = tariff.k_batt * discharge

    return CostBreakdown.from_parts(energy, demand, missing_penalty, battery_penalty)
