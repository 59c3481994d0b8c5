"""Lamp energy accounting and comparison against always-on baselines."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

from .board import PWM_MAX
from .schedule import night_ticks


class NonpositiveDt(ValueError):
    pass


class ZeroBaseline(ZeroDivisionError):
    pass


class Policy(enum.Enum):
    MODE_A = "ModeA"
    MODE_B = "ModeB"
    ALWAYS_ON_FULL = "AlwaysOnFull"
    ALWAYS_DIM = "AlwaysDim"


@dataclass(frozen=True)
class PowerModel:
    led_power_w: float = 0.1
    leds_per_zone: int = 4

    def __post_init__(self):
        if self.led_power_w <= 0:
            raise ValueError("led_power_w must be positive")
        if self.leds_per_zone < 1:
            raise ValueError("leds_per_zone must be at least 1")

    def zone_watts(self, duty: int) -> float:
        return duty / PWM_MAX * self.led_power_w * self.leds_per_zone

    @classmethod
    def for_scenario(cls, scenario) -> "PowerModel":
        return cls(scenario.led_power_w, scenario.leds_per_zone)


@dataclass(frozen=True)
class EnergyLedger:
    per_zone: tuple[float, ...]

    @classmethod
    def empty(cls, zones: int) -> "EnergyLedger":
        return cls((0.0,) * zones)

    @property
    def total(self) -> float:
        return math.fsum(self.per_zone)


def accrue(ledger: EnergyLedger, duties: Sequence[int], dt: float, model: PowerModel) -> EnergyLedger:
    if dt <= 0:
        raise NonpositiveDt(f"dt must be positive, got {dt}")
    if len(duties) != len(ledger.per_zone):
        raise ValueError("one duty per ledger zone is required")
    return EnergyLedger(tuple(e + model.zone_watts(d) * dt for e, d in zip(ledger.per_zone, duties)))


def night_seconds(scenario) -> float:
    return night_ticks(scenario) * scenario.tick_ms / 1000


def baseline_energy(scenario, model: PowerModel, policy: Policy) -> float:
    """Energy of a sensor-blind lamp that is on for the whole night (off by day)."""
    cfg = scenario.config
    if policy is Policy.ALWAYS_ON_FULL:
        duty = cfg.high_duty
    elif policy is Policy.ALWAYS_DIM:
        duty = cfg.dim_duty
    else:
        raise ValueError(f"{policy} is not a baseline policy")
    return cfg.zone_count * model.zone_watts(duty) * night_seconds(scenario)


def savings(smart_joules: float, baseline_joules: float) -> float:
    if baseline_joules <= 0:
        raise ZeroBaseline("baseline energy must be positive")
    return 1.0 - smart_joules / baseline_joules


def format_report(policy: Policy, energy_j: float, baseline_j: float) -> str:
    try:
        frac = f"{savings(energy_j, baseline_j):.4f}"
    except ZeroBaseline:
        frac = "nan"
    return f"policy={policy.value} energy_j={energy_j:.6f} savings_vs_always_on={frac}"
