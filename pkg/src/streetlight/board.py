"""Virtual microcontroller board.

The controller core only ever talks to a :class:`Board`: analog reads from the
LDR pin, digital reads from IR pins, PWM writes to lamp pins, digital writes
to the H-bridge pins and lines on the serial monitor. Time is an integer tick
counter owned by whoever drives the board.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Iterable

ADC_MAX = 1023
PWM_MAX = 255
RAIL_VOLTS = 5.0


class BoardError(Exception):
    pass


class WrongRole(BoardError):
    pass


class UnattachedPin(BoardError):
    pass


class UnknownPin(BoardError):
    pass


class DuplicatePin(BoardError):
    pass


class EmbeddedNewline(BoardError):
    pass


class ZeroTicks(BoardError):
    pass


class AdcValue(int):
    """10-bit ADC count: 0 is full darkness, 1023 full brightness."""

    def __new__(cls, counts: int) -> "AdcValue":
        counts = int(counts)
        if not 0 <= counts <= ADC_MAX:
            raise ValueError(f"ADC value {counts} outside 0..{ADC_MAX}")
        return super().__new__(cls, counts)

    @property
    def counts(self) -> int:
        return int(self)


class PwmDuty(int):
    """8-bit PWM duty on a 5 V rail."""

    def __new__(cls, duty: int) -> "PwmDuty":
        duty = int(duty)
        if not 0 <= duty <= PWM_MAX:
            raise ValueError(f"PWM duty {duty} outside 0..{PWM_MAX}")
        return super().__new__(cls, duty)

    @property
    def duty(self) -> int:
        return int(self)

    @property
    def equivalent_volts(self) -> float:
        return RAIL_VOLTS * int(self) / PWM_MAX


class LogicLevel(enum.IntEnum):
    LOW = 0
    HIGH = 1

    def complement(self) -> "LogicLevel":
        return LogicLevel.HIGH if self is LogicLevel.LOW else LogicLevel.LOW


class PinRole(enum.Enum):
    LDR_ANALOG = "ldr"
    IR_DIGITAL = "ir"
    LAMP_PWM = "lamp"
    MOTOR_IN1 = "in1"
    MOTOR_IN2 = "in2"
    MOTOR_ENABLE = "enable"


INPUT_ROLES = frozenset({PinRole.LDR_ANALOG, PinRole.IR_DIGITAL})
MOTOR_ROLES = frozenset({PinRole.MOTOR_IN1, PinRole.MOTOR_IN2, PinRole.MOTOR_ENABLE})


@dataclass(frozen=True)
class PinId:
    role: PinRole
    index: int | None = None
    label: str = field(default="", compare=False)

    @property
    def key(self) -> tuple[PinRole, int | None]:
        return (self.role, self.index)

    def __hash__(self) -> int:
        # str hashes are cached; Enum.__hash__ is a Python-level call
        return hash((self.role.value, self.index))


@dataclass(frozen=True)
class SimClock:
    tick: int = 0
    tick_ms: int = 10

    def __post_init__(self):
        if self.tick < 0:
            raise ValueError("tick must be non-negative")
        if self.tick_ms <= 0:
            raise ValueError("tick_ms must be positive")

    @property
    def time_s(self) -> float:
        # single rounding from exact integers, so no accumulated drift
        return self.tick * self.tick_ms / 1000


def tick_time(tick: int, tick_ms: int) -> float:
    return tick * tick_ms / 1000


@dataclass(frozen=True)
class SerialLine:
    time_s: float
    text: str


Source = Callable[[int], object]


class Board:
    """A set of role-tagged pins plus a serial sink and a virtual clock.

    Input pins are backed by *sources*: callables ``source(tick)`` that return
    the attached sensor model's output at that tick.
    """

    def __init__(self, pins: Iterable[PinId], tick_ms: int = 10):
        self.clock = SimClock(0, tick_ms)
        # PinId equality ignores the label, so (role, index) is the dict key
        self._pins: dict[PinId, PinId] = {}
        for pin in pins:
            if pin in self._pins:
                raise DuplicatePin(f"pin {pin.key} configured twice")
            self._pins[pin] = pin
        self._sources: dict[PinId, Source] = {}
        self.duties: dict[PinId, PwmDuty] = {
            p: PwmDuty(0) for p in self._pins.values() if p.role is PinRole.LAMP_PWM
        }
        self.outputs: dict[PinId, LogicLevel] = {
            p: LogicLevel.LOW for p in self._pins.values() if p.role in MOTOR_ROLES
        }
        self.pwm_trace: list[tuple[int, PinId, PwmDuty]] = []
        self.serial: list[SerialLine] = []

    @property
    def pins(self) -> list[PinId]:
        return list(self._pins.values())

    def _lookup(self, pin: PinId, *roles: PinRole) -> PinId:
        try:
            known = self._pins[pin]
        except KeyError:
            raise UnknownPin(f"pin {pin.key} is not configured") from None
        if known.role not in roles:
            raise WrongRole(f"pin {pin.key} has role {known.role.value}")
        return known

    def attach(self, pin: PinId, source: Source) -> None:
        known = self._lookup(pin, *INPUT_ROLES)
        self._sources[known] = source

    def _sample(self, pin: PinId):
        try:
            source = self._sources[pin]
        except KeyError:
            raise UnattachedPin(f"no sensor attached to {pin.key}") from None
        return source(self.clock.tick)

    def analog_read(self, pin: PinId) -> AdcValue:
        known = self._lookup(pin, PinRole.LDR_ANALOG)
        return AdcValue(self._sample(known))

    def digital_read(self, pin: PinId) -> LogicLevel:
        known = self._lookup(pin, PinRole.IR_DIGITAL)
        return LogicLevel(self._sample(known))

    def pwm_write(self, pin: PinId, duty: int) -> None:
        known = self._lookup(pin, PinRole.LAMP_PWM)
        duty = PwmDuty(duty)
        if self.duties[known] != duty:
            self.pwm_trace.append((self.clock.tick, known, duty))
        self.duties[known] = duty

    def digital_write(self, pin: PinId, level: LogicLevel) -> None:
        known = self._lookup(pin, *MOTOR_ROLES)
        self.outputs[known] = LogicLevel(level)

    def serial_print(self, text: str) -> None:
        if "\n" in text or "\r" in text:
            raise EmbeddedNewline(repr(text))
        self.serial.append(SerialLine(self.clock.time_s, text))

    def advance(self, ticks: int) -> None:
        if ticks < 1:
            raise ZeroTicks(f"advance needs at least one tick, got {ticks}")
        self.clock = SimClock(self.clock.tick + ticks, self.clock.tick_ms)


def replay_pwm_trace(trace: Iterable[tuple[int, PinId, int]]) -> dict[PinId, int]:
    """Final duty per pin reconstructed from a change trace (unchanged pins stay at 0)."""
    final: dict[PinId, int] = {}
    for _, pin, duty in trace:
        final[pin] = int(duty)
    return final
