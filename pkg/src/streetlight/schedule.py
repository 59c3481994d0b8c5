"""Input change points of a scenario, found without stepping every tick.

Every scenario input is piecewise constant over ticks: IR detections switch
at most twice per (vehicle, sensor) pair, and the day/night class can only
change where a monotone stretch of the daylight profile crosses a threshold.
Each change point is located by bisection on the exact per-tick predicate the
simulator itself evaluates, so no closed-form kinematics can disagree with it.
"""
from __future__ import annotations

from bisect import bisect_left
from typing import Callable

from .board import tick_time
from .controller import DayNight
from .scenario import Scenario, Vehicle, vehicle_span
from .sensors import IrSensor, cleared_window, diurnal_lux, in_range, ldr_adc, reaches_window


def first_true(pred: Callable[[int], bool], lo: int, hi: int) -> int:
    """Smallest k in [lo, hi) with pred(k), for pred monotone False→True; hi if none."""
    while lo < hi:
        mid = (lo + hi) // 2
        if pred(mid):
            hi = mid
        else:
            lo = mid + 1
    return lo


def adc_at(scenario: Scenario, tick: int) -> int:
    return ldr_adc(scenario.ldr, diurnal_lux(scenario.sun, tick_time(tick, scenario.tick_ms)))


def light_class(scenario: Scenario, tick: int) -> tuple[bool, bool]:
    """(below threshold, below threshold + hysteresis) at ``tick``."""
    cfg = scenario.config
    adc = adc_at(scenario, tick)
    return adc < cfg.threshold, adc < cfg.threshold + cfg.hysteresis


def light_breakpoints(scenario: Scenario) -> list[int]:
    """Ticks at which the light class may differ from the previous tick."""
    n, ms = scenario.n_ticks, scenario.tick_ms
    bounds = {0, n}
    for t in scenario.sun.times:
        bounds.add(first_true(lambda k, t=t: tick_time(k, ms) >= t, 0, n))
    edges = sorted(bounds)
    points = set(edges)
    for a, b in zip(edges, edges[1:]):
        if a >= b:
            continue
        start = light_class(scenario, a)
        for i in range(2):
            points.add(first_true(lambda k, i=i: light_class(scenario, k)[i] != start[i], a, b))
    return sorted(p for p in points if p < n)


def night_intervals(scenario: Scenario) -> list[tuple[int, int, DayNight]]:
    """Day/night as the controller sees it, as (start, stop, DayNight) tick ranges."""
    n = scenario.n_ticks
    edges = light_breakpoints(scenario) + [n]
    out: list[tuple[int, int, DayNight]] = []
    previous = None
    for a, b in zip(edges, edges[1:]):
        below, below_band = light_class(scenario, a)
        night = below_band if previous is DayNight.NIGHT else below
        daynight = DayNight.NIGHT if night else DayNight.DAY
        if out and out[-1][2] is daynight:
            out[-1] = (out[-1][0], b, daynight)
        else:
            out.append((a, b, daynight))
        previous = daynight
    return out


def night_ticks(scenario: Scenario) -> int:
    return sum(b - a for a, b, dn in night_intervals(scenario) if dn is DayNight.NIGHT)


def detection_interval(
    sensor: IrSensor, vehicle: Vehicle, n_ticks: int, tick_ms: int
) -> tuple[int, int] | None:
    """Half-open tick range during which ``sensor`` sees ``vehicle``."""
    probe = vehicle_span(vehicle, vehicle.enter_time_s)
    if probe is None or not in_range(sensor, probe):
        return None

    def span(k):
        return vehicle_span(vehicle, tick_time(k, tick_ms))

    def reached(k):
        s = span(k)
        return s is not None and reaches_window(sensor, s)

    def cleared(k):
        s = span(k)
        return s is not None and cleared_window(sensor, s)

    start = first_true(reached, 0, n_ticks)
    stop = first_true(cleared, 0, n_ticks)
    if start >= stop:
        return None
    return start, stop


def sensor_intervals(scenario: Scenario) -> list[list[tuple[int, int]]]:
    """Per sensor (road sensors, then door sensor), every vehicle's detection range."""
    out = []
    door_index = len(scenario.sensors) if scenario.door_sensor is not None else None
    for i, sensor in enumerate(scenario.all_sensors):
        spans = []
        for v in scenario.vehicles:
            if i == door_index and not v.authorized:
                continue
            iv = detection_interval(sensor, v, scenario.n_ticks, scenario.tick_ms)
            if iv is not None:
                spans.append(iv)
        out.append(spans)
    return out


def input_breakpoints(scenario: Scenario) -> list[int]:
    points = set(light_breakpoints(scenario))
    for spans in sensor_intervals(scenario):
        for a, b in spans:
            points.update((a, b))
    return sorted(p for p in points if 0 < p < scenario.n_ticks)


def next_breakpoint(points: list[int], tick: int, n_ticks: int) -> int:
    i = bisect_left(points, tick + 1)
    return points[i] if i < len(points) else n_ticks
