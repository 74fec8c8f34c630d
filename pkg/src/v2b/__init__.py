"""Vehicle-to-building charging co-optimization toolkit.

Schedules EV charging/discharging against a time-of-use tariff with demand
charges using a scenario-sampling model-predictive controller, and negotiates
priced flexibility offers (target SoC / departure deviations) with simulated
users drawn from a survey-calibrated behavior model.
"""

__version__ = "0.1.0"
