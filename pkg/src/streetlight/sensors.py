"""Signal models behind the board's input pins: LDR, IR obstacle sensor, daylight."""
from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from typing import Iterable, Sequence

from .board import ADC_MAX, AdcValue, LogicLevel

DEFAULT_WINDOW_M = 0.15
IR_MIN_RANGE_M = 0.02
IR_MAX_RANGE_M = 0.30


class NegativeLux(ValueError):
    pass


class EmptyProfile(ValueError):
    pass


@dataclass(frozen=True)
class LdrModel:
    darkness_floor_lux: float = 0.0
    saturation_lux: float = 10_000.0
    curve_exponent: float = 1.0

    def __post_init__(self):
        if not self.darkness_floor_lux < self.saturation_lux:
            raise ValueError("darkness floor must be below saturation")
        if self.curve_exponent <= 0:
            raise ValueError("curve exponent must be positive")


def ldr_adc(model: LdrModel, ambient: float) -> AdcValue:
    """ADC count seen through the LDR divider at ``ambient`` lux.

    More light lowers the LDR resistance and raises the divider voltage, so
    the mapping is monotone non-decreasing.
    """
    if ambient < 0:
        raise NegativeLux(f"ambient illuminance {ambient} < 0")
    span = model.saturation_lux - model.darkness_floor_lux
    x = min(max((ambient - model.darkness_floor_lux) / span, 0.0), 1.0)
    return AdcValue(round(ADC_MAX * x**model.curve_exponent))


@dataclass(frozen=True)
class IrSensor:
    position_m: float
    window_m: float = DEFAULT_WINDOW_M
    max_range_m: float = IR_MAX_RANGE_M
    min_range_m: float = IR_MIN_RANGE_M
    active_when_detecting: LogicLevel = LogicLevel.LOW

    def __post_init__(self):
        if self.window_m <= 0:
            raise ValueError("window_m must be positive")
        if not self.min_range_m < self.max_range_m:
            raise ValueError("min_range_m must be below max_range_m")

    @property
    def idle_level(self) -> LogicLevel:
        return self.active_when_detecting.complement()

    @property
    def window(self) -> tuple[float, float]:
        return (self.position_m - self.window_m, self.position_m + self.window_m)


@dataclass(frozen=True)
class ObjectSpan:
    front_m: float
    length_m: float
    lateral_offset_m: float = 0.10

    @property
    def rear_m(self) -> float:
        return self.front_m - self.length_m


def in_range(sensor: IrSensor, span: ObjectSpan) -> bool:
    return sensor.min_range_m <= span.lateral_offset_m <= sensor.max_range_m


def reaches_window(sensor: IrSensor, span: ObjectSpan) -> bool:
    return span.front_m >= sensor.position_m - sensor.window_m


def cleared_window(sensor: IrSensor, span: ObjectSpan) -> bool:
    return span.rear_m > sensor.position_m + sensor.window_m


def detects(sensor: IrSensor, span: ObjectSpan) -> bool:
    # The two halves are kept separate so the simulator can search each
    # monotone condition on its own with exactly the same arithmetic.
    return in_range(sensor, span) and reaches_window(sensor, span) and not cleared_window(sensor, span)


def ir_output(sensor: IrSensor, spans: Iterable[ObjectSpan]) -> LogicLevel:
    if any(detects(sensor, s) for s in spans):
        return sensor.active_when_detecting
    return sensor.idle_level


@dataclass(frozen=True)
class DiurnalProfile:
    breakpoints: tuple[tuple[float, float], ...]

    def __init__(self, breakpoints: Sequence[tuple[float, float]]):
        points = tuple((float(t), float(lux)) for t, lux in breakpoints)
        if not points:
            raise EmptyProfile("profile needs at least one breakpoint")
        for (t0, _), (t1, _) in zip(points, points[1:]):
            if not t1 > t0:
                raise ValueError("profile times must be strictly increasing")
        if any(lux < 0 for _, lux in points):
            raise NegativeLux("profile illuminance must be non-negative")
        object.__setattr__(self, "breakpoints", points)

    @property
    def times(self) -> list[float]:
        return [t for t, _ in self.breakpoints]

    def segment_index(self, time_s: float) -> int:
        """-1 before the first breakpoint, len-1 at or after the last, else the segment start."""
        return bisect_right(self.times, time_s) - 1


def diurnal_lux(profile: DiurnalProfile, time_s: float) -> float:
    points = profile.breakpoints
    if not points:
        raise EmptyProfile("profile needs at least one breakpoint")
    i = profile.segment_index(time_s)
    if i < 0:
        return points[0][1]
    if i >= len(points) - 1:
        return points[-1][1]
    (t0, l0), (t1, l1) = points[i], points[i + 1]
    return max(0.0, l0 + (l1 - l0) * ((time_s - t0) / (t1 - t0)))
