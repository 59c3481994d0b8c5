"""Streetlight control logic as pure state-in/state-out transitions.

Nothing here touches the board: the simulator reads the pins, hands the raw
values to :func:`controller_step` and writes the returned duties back.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Sequence

from .board import AdcValue, LogicLevel, PwmDuty


class LengthMismatch(ValueError):
    pass


class Mode(enum.Enum):
    A = "A"  # dim at night, high on detection
    B = "B"  # off at night, high on detection


class DayNight(enum.Enum):
    DAY = "Day"
    NIGHT = "Night"


class Lamp(enum.Enum):
    OFF = "Off"
    DIM = "Dim"
    HIGH = "High"


class DoorPhase(enum.Enum):
    CLOSED = "Closed"
    OPENING = "Opening"
    OPEN = "Open"
    CLOSING = "Closing"


@dataclass(frozen=True)
class ControllerConfig:
    mode: Mode = Mode.A
    threshold: int = 10
    zone_count: int | None = None
    dim_duty: int = 127
    high_duty: int = 255
    linger_ticks: int = 0
    debounce_ticks: int = 1
    door_open_ticks: int = 50
    door_close_ticks: int = 50
    hysteresis: int = 0
    ir_active: LogicLevel = LogicLevel.LOW
    count_sensor: int = 0
    count_by_day: bool = False
    has_door: bool = False

    def __post_init__(self):
        mode = Mode(self.mode)
        object.__setattr__(self, "mode", mode)
        if self.zone_count is None:
            object.__setattr__(self, "zone_count", 3 if mode is Mode.A else 4)
        AdcValue(self.threshold)
        PwmDuty(self.dim_duty)
        PwmDuty(self.high_duty)
        if self.zone_count < 1:
            raise ValueError("zone_count must be positive")
        if not self.dim_duty < self.high_duty:
            raise ValueError("dim_duty must be below high_duty")
        if self.linger_ticks < 0 or self.debounce_ticks < 0 or self.hysteresis < 0:
            raise ValueError("linger, debounce and hysteresis must be non-negative")
        if self.door_open_ticks < 1 or self.door_close_ticks < 1:
            raise ValueError("door travel times must be positive")
        if not 0 <= self.count_sensor < self.zone_count:
            raise ValueError("count_sensor must index a road sensor")

    @property
    def night_lamp(self) -> Lamp:
        return Lamp.DIM if self.mode is Mode.A else Lamp.OFF

    def duty_for(self, lamp: Lamp) -> PwmDuty:
        if lamp is Lamp.HIGH:
            return PwmDuty(self.high_duty)
        if lamp is Lamp.DIM:
            return PwmDuty(self.dim_duty)
        return PwmDuty(0)


@dataclass(frozen=True)
class ZoneState:
    value: Lamp = Lamp.OFF
    linger: int = 0


@dataclass(frozen=True)
class CounterState:
    count: int = 0
    previous_detection: bool = False
    stable_ticks: int = 0


@dataclass(frozen=True)
class DoorState:
    phase: DoorPhase = DoorPhase.CLOSED
    phase_ticks_remaining: int = 0


@dataclass(frozen=True)
class MotorCommand:
    in1: LogicLevel
    in2: LogicLevel
    enable: bool


OPEN_DRIVE = MotorCommand(LogicLevel.HIGH, LogicLevel.LOW, True)
CLOSE_DRIVE = MotorCommand(LogicLevel.LOW, LogicLevel.HIGH, True)
HOLD = MotorCommand(LogicLevel.LOW, LogicLevel.LOW, False)


@dataclass(frozen=True)
class ControllerState:
    zones: tuple[ZoneState, ...]
    counter: CounterState = field(default_factory=CounterState)
    door: DoorState | None = None
    daynight: DayNight | None = None


@dataclass(frozen=True)
class StepResult:
    state: ControllerState
    duties: tuple[PwmDuty, ...]
    motor: MotorCommand | None
    serial: tuple[str, ...]


def initial_state(config: ControllerConfig) -> ControllerState:
    return ControllerState(
        zones=tuple(ZoneState() for _ in range(config.zone_count)),
        door=DoorState() if config.has_door else None,
    )


def classify_day_night(
    reading: int, config: ControllerConfig, previous: DayNight | None = None
) -> DayNight:
    """Night strictly below the threshold; a reading equal to it counts as Day.

    With a hysteresis band, leaving Night requires ``threshold + hysteresis``.
    """
    threshold = config.threshold
    if previous is DayNight.NIGHT:
        threshold += config.hysteresis
    return DayNight.NIGHT if reading < threshold else DayNight.DAY


def _update_zones(daynight, detections, states, config, idle: Lamp):
    if len(detections) != config.zone_count or len(states) != config.zone_count:
        raise LengthMismatch(
            f"expected {config.zone_count} zones, got {len(detections)} detections "
            f"and {len(states)} states"
        )
    if daynight is DayNight.DAY:
        return tuple(ZoneState(Lamp.OFF, 0) for _ in states)
    out = []
    for hit, zone in zip(detections, states):
        if hit:
            out.append(ZoneState(Lamp.HIGH, config.linger_ticks))
        elif zone.linger > 0:
            out.append(ZoneState(Lamp.HIGH, zone.linger - 1))
        else:
            out.append(ZoneState(idle, 0))
    return tuple(out)


def update_zones_mode_a(
    daynight: DayNight, detections: Sequence[bool], states: Sequence[ZoneState], config: ControllerConfig
) -> tuple[ZoneState, ...]:
    return _update_zones(daynight, detections, states, config, Lamp.DIM)


def update_zones_mode_b(
    daynight: DayNight, detections: Sequence[bool], states: Sequence[ZoneState], config: ControllerConfig
) -> tuple[ZoneState, ...]:
    return _update_zones(daynight, detections, states, config, Lamp.OFF)


def update_counter(
    state: CounterState, detecting: bool, config: ControllerConfig, armed: bool = True
) -> tuple[CounterState, int | None]:
    """Debounced rising-edge counter.

    The debounced level flips once the raw input has disagreed with it for
    ``debounce_ticks`` consecutive updates (0 behaves like 1). A flip to True
    increments the count and emits it, unless ``armed`` is False, in which
    case the edge is tracked but not counted.
    """
    need = max(config.debounce_ticks, 1)
    if detecting == state.previous_detection:
        return replace(state, stable_ticks=0), None
    stable = state.stable_ticks + 1
    if stable < need:
        return replace(state, stable_ticks=stable), None
    if detecting and armed:
        count = state.count + 1
        return CounterState(count, True, 0), count
    return CounterState(state.count, detecting, 0), None


def update_door(
    door: DoorState, vehicle_at_door: bool, config: ControllerConfig
) -> tuple[DoorState, MotorCommand]:
    """Advance the door one tick; the returned command is the drive applied during it."""
    phase, remaining = door.phase, door.phase_ticks_remaining

    if phase is DoorPhase.CLOSED:
        if not vehicle_at_door:
            return door, HOLD
        return _drive(DoorPhase.OPENING, config.door_open_ticks, DoorPhase.OPEN), OPEN_DRIVE

    if phase is DoorPhase.OPENING:
        return _drive(DoorPhase.OPENING, remaining, DoorPhase.OPEN), OPEN_DRIVE

    if phase is DoorPhase.OPEN:
        if vehicle_at_door:
            return door, HOLD
        return _drive(DoorPhase.CLOSING, config.door_close_ticks, DoorPhase.CLOSED), CLOSE_DRIVE

    # closing
    if vehicle_at_door:
        travelled = config.door_close_ticks - remaining
        reopen = max(1, math.ceil(travelled * config.door_open_ticks / config.door_close_ticks))
        return _drive(DoorPhase.OPENING, reopen, DoorPhase.OPEN), OPEN_DRIVE
    return _drive(DoorPhase.CLOSING, remaining, DoorPhase.CLOSED), CLOSE_DRIVE


def _drive(moving: DoorPhase, ticks_left: int, arrived: DoorPhase) -> DoorState:
    left = ticks_left - 1
    if left <= 0:
        return DoorState(arrived, 0)
    return DoorState(moving, left)


def format_count(time_s: float, count: int) -> str:
    return f"t={time_s:.3f} count={count}"


def format_total(count: int) -> str:
    return f"total={count}"


def controller_step(
    adc: int,
    ir_levels: Sequence[LogicLevel],
    state: ControllerState,
    config: ControllerConfig,
    time_s: float = 0.0,
) -> StepResult:
    """One control cycle: classify light, switch zones, count, drive the door.

    ``ir_levels`` holds one level per road zone, followed by the door sensor's
    level when the configuration has a door.
    """
    expected = config.zone_count + (1 if config.has_door else 0)
    if len(ir_levels) != expected:
        raise LengthMismatch(f"expected {expected} IR levels, got {len(ir_levels)}")
    detections = [LogicLevel(level) == config.ir_active for level in ir_levels]
    road = detections[: config.zone_count]

    daynight = classify_day_night(adc, config, state.daynight)
    if config.mode is Mode.A:
        zones = update_zones_mode_a(daynight, road, state.zones, config)
    else:
        zones = update_zones_mode_b(daynight, road, state.zones, config)

    armed = config.count_by_day or daynight is DayNight.NIGHT
    counter, emitted = update_counter(state.counter, road[config.count_sensor], config, armed)

    door, motor = state.door, None
    if config.has_door:
        door, motor = update_door(state.door or DoorState(), detections[-1], config)

    serial = (format_count(time_s, emitted),) if emitted is not None else ()
    new_state = ControllerState(zones, counter, door, daynight)
    duties = tuple(config.duty_for(z.value) for z in zones)
    return StepResult(new_state, duties, motor, serial)
