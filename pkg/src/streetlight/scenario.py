"""Scenario documents: road layout, daylight, vehicles and controller settings.

Grammar is line oriented: ``key value...`` per line, ``#`` starts a comment.
Keys marked repeatable below may occur many times; every other key at most
once.

    mode A|B
    tick_ms <int>
    duration_s <float>
    ldr_threshold <int 0-1023>
    hysteresis <int>
    dim_duty <int>
    high_duty <int>
    linger_ticks <int>
    debounce_ticks <int>
    door_ticks <open_ticks> <close_ticks>
    ir_active LOW|HIGH
    count_sensor <int>
    count_by_day yes|no
    sensor <position_m> [window_m]                                  (repeatable)
    door_sensor <position_m> [window_m]
    sun <time_s> <lux>                                              (repeatable)
    ldr <floor_lux> <saturation_lux> <exponent>
    vehicle <enter_s> <speed_mps> <length_m> [lateral_m] [unauthorized]  (repeatable)
    traffic <seed> <rate_per_hour> <speed_mps> <length_m>
    leds_per_zone <int>
    led_power_w <float>
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from pathlib import Path

from .board import LogicLevel
from .controller import ControllerConfig, Mode
from .sensors import DEFAULT_WINDOW_M, DiurnalProfile, IrSensor, LdrModel, ObjectSpan

DEFAULT_LATERAL_M = 0.10


class ScenarioError(Exception):
    def __init__(self, message: str, line: int | None = None, key: str | None = None):
        self.line = line
        self.key = key
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message}")


class ScenarioSyntaxError(ScenarioError):
    pass


class ScenarioValidationError(ScenarioError):
    pass


class NegativeRate(ValueError):
    pass


@dataclass(frozen=True)
class Vehicle:
    enter_time_s: float
    speed_mps: float
    length_m: float
    lateral_offset_m: float = DEFAULT_LATERAL_M
    authorized: bool = True

    def __post_init__(self):
        if self.enter_time_s < 0:
            raise ValueError("enter_time_s must be non-negative")
        if self.speed_mps <= 0:
            raise ValueError("speed_mps must be positive")
        if self.length_m <= 0:
            raise ValueError("length_m must be positive")
        if self.lateral_offset_m < 0:
            raise ValueError("lateral_offset_m must be non-negative")

    def front_at(self, time_s: float) -> float:
        return self.speed_mps * (time_s - self.enter_time_s)


def vehicle_span(v: Vehicle, time_s: float, road_end_m: float | None = None) -> ObjectSpan | None:
    """Where the vehicle sits at ``time_s``, or None if it is not on the road."""
    if time_s < v.enter_time_s:
        return None
    span = ObjectSpan(v.front_at(time_s), v.length_m, v.lateral_offset_m)
    if road_end_m is not None and span.rear_m > road_end_m:
        return None
    return span


@dataclass(frozen=True)
class Scenario:
    config: ControllerConfig
    duration_s: float
    sensors: tuple[IrSensor, ...]
    tick_ms: int = 10
    door_sensor: IrSensor | None = None
    ldr: LdrModel = field(default_factory=LdrModel)
    sun: DiurnalProfile = field(default_factory=lambda: DiurnalProfile([(0.0, 0.0)]))
    vehicles: tuple[Vehicle, ...] = ()
    seed: int | None = None
    leds_per_zone: int = 4
    led_power_w: float = 0.1

    def __post_init__(self):
        if self.duration_s <= 0:
            raise ValueError("duration_s must be positive")
        if self.tick_ms <= 0:
            raise ValueError("tick_ms must be positive")
        if self.n_ticks < 1:
            raise ValueError("duration shorter than one tick")
        positions = [s.position_m for s in self.sensors]
        if any(b <= a for a, b in zip(positions, positions[1:])):
            raise ValueError("sensor positions must be strictly increasing")
        if len(self.sensors) != self.config.zone_count:
            raise ValueError("one road sensor per zone is required")
        if (self.door_sensor is not None) != self.config.has_door:
            raise ValueError("door sensor and config.has_door disagree")
        object.__setattr__(
            self, "vehicles", tuple(sorted(self.vehicles, key=lambda v: v.enter_time_s))
        )

    @property
    def n_ticks(self) -> int:
        return round(self.duration_s * 1000 / self.tick_ms)

    @property
    def all_sensors(self) -> tuple[IrSensor, ...]:
        return self.sensors + ((self.door_sensor,) if self.door_sensor else ())

    @property
    def road_end_m(self) -> float:
        return max(s.position_m + s.window_m for s in self.all_sensors)

    def with_mode(self, mode: Mode) -> "Scenario":
        return replace(self, config=replace(self.config, mode=mode))


def generate_traffic(
    seed: int,
    rate_per_hour: float,
    duration_s: float,
    speed_mps: float,
    length_m: float,
) -> list[Vehicle]:
    """Poisson arrivals: exponential inter-arrival gaps from a seeded stream."""
    if rate_per_hour < 0:
        raise NegativeRate(f"rate {rate_per_hour} < 0")
    if rate_per_hour == 0:
        return []
    rng = random.Random(seed)
    rate_per_s = rate_per_hour / 3600.0
    out = []
    t = rng.expovariate(rate_per_s)
    while t < duration_s:
        out.append(Vehicle(t, speed_mps, length_m))
        t += rng.expovariate(rate_per_s)
    return out


_SINGULAR = {
    "mode", "tick_ms", "duration_s", "ldr_threshold", "hysteresis", "dim_duty",
    "high_duty", "linger_ticks", "debounce_ticks", "door_ticks", "ir_active",
    "count_sensor", "count_by_day", "door_sensor", "ldr", "traffic",
    "leds_per_zone", "led_power_w",
}
_REPEATABLE = {"sensor", "sun", "vehicle"}

_ARITY = {
    "mode": (1, 1), "tick_ms": (1, 1), "duration_s": (1, 1), "ldr_threshold": (1, 1),
    "hysteresis": (1, 1), "dim_duty": (1, 1), "high_duty": (1, 1), "linger_ticks": (1, 1),
    "debounce_ticks": (1, 1), "door_ticks": (2, 2), "ir_active": (1, 1),
    "count_sensor": (1, 1), "count_by_day": (1, 1), "sensor": (1, 2),
    "door_sensor": (1, 2), "sun": (2, 2), "ldr": (3, 3), "vehicle": (3, 5),
    "traffic": (4, 4), "leds_per_zone": (1, 1), "led_power_w": (1, 1),
}


def _num(kind, token, lineno, key):
    try:
        return kind(token)
    except ValueError:
        raise ScenarioSyntaxError(
            f"{key}: expected {kind.__name__}, got {token!r}", lineno, key
        ) from None


def parse_scenario(text: str) -> Scenario:
    entries: dict[str, tuple[int, list[str]]] = {}
    repeated: dict[str, list[tuple[int, list[str]]]] = {k: [] for k in _REPEATABLE}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, *args = line.split()
        if key not in _ARITY:
            raise ScenarioSyntaxError(f"unknown key {key!r}", lineno, key)
        lo, hi = _ARITY[key]
        if not lo <= len(args) <= hi:
            raise ScenarioSyntaxError(f"{key}: expected {lo}-{hi} values, got {len(args)}", lineno, key)
        if key in _REPEATABLE:
            repeated[key].append((lineno, args))
        elif key in entries:
            raise ScenarioSyntaxError(f"duplicate key {key!r} (first on line {entries[key][0]})", lineno, key)
        else:
            entries[key] = (lineno, args)

    def get(key, kind, default=None):
        if key not in entries:
            return default
        lineno, args = entries[key]
        return _num(kind, args[0], lineno, key)

    def line_of(key):
        return entries[key][0] if key in entries else None

    def invalid(message, key):
        raise ScenarioValidationError(message, line_of(key), key)

    if "mode" not in entries:
        raise ScenarioValidationError("missing required key 'mode'", None, "mode")
    if "duration_s" not in entries:
        raise ScenarioValidationError("missing required key 'duration_s'", None, "duration_s")
    mode_token = entries["mode"][1][0].upper()
    if mode_token not in ("A", "B"):
        invalid(f"mode must be A or B, got {mode_token!r}", "mode")
    mode = Mode(mode_token)

    ir_active = LogicLevel.LOW
    if "ir_active" in entries:
        token = entries["ir_active"][1][0].upper()
        if token not in ("LOW", "HIGH"):
            invalid(f"ir_active must be LOW or HIGH, got {token!r}", "ir_active")
        ir_active = LogicLevel[token]

    def make_sensor(lineno, args, key):
        pos = _num(float, args[0], lineno, key)
        window = _num(float, args[1], lineno, key) if len(args) > 1 else DEFAULT_WINDOW_M
        if window <= 0:
            raise ScenarioValidationError(f"{key}: window_m must be positive", lineno, key)
        return IrSensor(pos, window, active_when_detecting=ir_active)

    sensors = [make_sensor(n, a, "sensor") for n, a in repeated["sensor"]]
    if not sensors:
        raise ScenarioValidationError("at least one 'sensor' line is required", None, "sensor")
    for (n, _), prev, cur in zip(repeated["sensor"][1:], sensors, sensors[1:]):
        if cur.position_m <= prev.position_m:
            raise ScenarioValidationError("sensor positions must be strictly increasing", n, "sensor")

    door_sensor = None
    if "door_sensor" in entries:
        door_sensor = make_sensor(*entries["door_sensor"], "door_sensor")

    duration_s = get("duration_s", float)
    if duration_s <= 0:
        invalid("duration_s must be positive", "duration_s")
    tick_ms = get("tick_ms", int, 10)
    if tick_ms <= 0:
        invalid("tick_ms must be positive", "tick_ms")
    if round(duration_s * 1000 / tick_ms) < 1:
        invalid("duration_s shorter than one tick", "duration_s")

    count_by_day = False
    if "count_by_day" in entries:
        token = entries["count_by_day"][1][0].lower()
        if token not in ("yes", "no"):
            invalid("count_by_day must be yes or no", "count_by_day")
        count_by_day = token == "yes"

    door_open = door_close = 50
    if "door_ticks" in entries:
        n, args = entries["door_ticks"]
        door_open, door_close = (_num(int, a, n, "door_ticks") for a in args)

    config_kwargs = dict(
        mode=mode,
        threshold=get("ldr_threshold", int, 10),
        zone_count=len(sensors),
        dim_duty=get("dim_duty", int, 127),
        high_duty=get("high_duty", int, 255),
        linger_ticks=get("linger_ticks", int, 0),
        debounce_ticks=get("debounce_ticks", int, 1),
        door_open_ticks=door_open,
        door_close_ticks=door_close,
        hysteresis=get("hysteresis", int, 0),
        ir_active=ir_active,
        count_sensor=get("count_sensor", int, 0),
        count_by_day=count_by_day,
        has_door=door_sensor is not None,
    )
    try:
        config = ControllerConfig(**config_kwargs)
    except ValueError as exc:
        raise ScenarioValidationError(f"controller settings: {exc}") from None

    sun_points = []
    for n, args in repeated["sun"]:
        t, lux = _num(float, args[0], n, "sun"), _num(float, args[1], n, "sun")
        if lux < 0:
            raise ScenarioValidationError("sun: lux must be non-negative", n, "sun")
        if sun_points and t <= sun_points[-1][0]:
            raise ScenarioValidationError("sun: times must be strictly increasing", n, "sun")
        sun_points.append((t, lux))
    sun = DiurnalProfile(sun_points or [(0.0, 0.0)])

    ldr = LdrModel()
    if "ldr" in entries:
        n, args = entries["ldr"]
        try:
            ldr = LdrModel(*(_num(float, a, n, "ldr") for a in args))
        except ValueError as exc:
            raise ScenarioValidationError(f"ldr: {exc}", n, "ldr") from None

    vehicles = []
    for n, args in repeated["vehicle"]:
        authorized = True
        if args[-1].lower() == "unauthorized":
            authorized = False
            args = args[:-1]
        if len(args) not in (3, 4):
            raise ScenarioSyntaxError("vehicle: expected enter, speed, length [lateral]", n, "vehicle")
        enter, speed, length = (_num(float, a, n, "vehicle") for a in args[:3])
        lateral = _num(float, args[3], n, "vehicle") if len(args) == 4 else DEFAULT_LATERAL_M
        for name, value, ok in (
            ("enter_time", enter, enter >= 0),
            ("speed", speed, speed > 0),
            ("length", length, length > 0),
            ("lateral_offset", lateral, lateral >= 0),
        ):
            if not ok:
                raise ScenarioValidationError(f"vehicle: invalid {name} {value}", n, f"vehicle.{name}")
        vehicles.append(Vehicle(enter, speed, length, lateral, authorized))

    seed = None
    if "traffic" in entries:
        n, args = entries["traffic"]
        seed = _num(int, args[0], n, "traffic")
        rate, speed, length = (_num(float, a, n, "traffic") for a in args[1:])
        if rate < 0 or speed <= 0 or length <= 0:
            raise ScenarioValidationError("traffic: rate >= 0, speed > 0, length > 0 required", n, "traffic")
        vehicles.extend(generate_traffic(seed, rate, duration_s, speed, length))

    leds_per_zone = get("leds_per_zone", int, 4)
    if leds_per_zone < 1:
        invalid("leds_per_zone must be at least 1", "leds_per_zone")
    led_power_w = get("led_power_w", float, 0.1)
    if led_power_w <= 0:
        invalid("led_power_w must be positive", "led_power_w")

    return Scenario(
        config=config,
        duration_s=duration_s,
        sensors=tuple(sensors),
        tick_ms=tick_ms,
        door_sensor=door_sensor,
        ldr=ldr,
        sun=sun,
        vehicles=tuple(vehicles),
        seed=seed,
        leds_per_zone=leds_per_zone,
        led_power_w=led_power_w,
    )


def load_scenario(path: str | Path) -> Scenario:
    return parse_scenario(Path(path).read_text())


def format_vehicle(v: Vehicle) -> str:
    parts = ["vehicle", repr(v.enter_time_s), repr(v.speed_mps), repr(v.length_m)]
    if v.lateral_offset_m != DEFAULT_LATERAL_M:
        parts.append(repr(v.lateral_offset_m))
    if not v.authorized:
        parts.append("unauthorized")
    return " ".join(parts)
