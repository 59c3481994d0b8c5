"""Closed-loop simulation: sensor models -> board -> controller -> board.

The loop is event compressed. After a control step whose state is a fixed
point, and with every input provably constant until the next scheduled
breakpoint, the intermediate ticks would all repeat that step verbatim, so
they are skipped in one ``advance``.
"""
from __future__ import annotations

import hashlib
from collections import Counter
from dataclasses import dataclass, field

from .board import Board, LogicLevel, PinId, PinRole, SerialLine, tick_time
from .controller import (
    ControllerState,
    DoorPhase,
    Lamp,
    format_total,
    controller_step,
    initial_state,
)
from .energy import EnergyLedger, PowerModel, accrue
from .scenario import Scenario, vehicle_span
from .schedule import adc_at, input_breakpoints, next_breakpoint
from .sensors import ir_output

LDR_PIN = PinId(PinRole.LDR_ANALOG, None, "A0")
MOTOR_PINS = (
    PinId(PinRole.MOTOR_IN1, None, "IN1"),
    PinId(PinRole.MOTOR_IN2, None, "IN2"),
    PinId(PinRole.MOTOR_ENABLE, None, "ENB"),
)


def ir_pin(i: int) -> PinId:
    return PinId(PinRole.IR_DIGITAL, i, f"IR{i}")


def lamp_pin(i: int) -> PinId:
    return PinId(PinRole.LAMP_PWM, i, f"LAMP{i}")


@dataclass(frozen=True)
class Record:
    time_s: float
    kind: str  # duty | door | serial
    detail: str

    def line(self) -> str:
        return f"{self.time_s:.3f}\t{self.kind}\t{self.detail}"


@dataclass
class Trace:
    duty_events: list[tuple[float, int, int]] = field(default_factory=list)
    zone_events: list[tuple[float, int, Lamp]] = field(default_factory=list)
    door_events: list[tuple[float, DoorPhase]] = field(default_factory=list)
    serial: list[SerialLine] = field(default_factory=list)
    records: list[Record] = field(default_factory=list)
    total: int = 0
    occupancy: list[dict[Lamp, float]] = field(default_factory=list)
    ledger: EnergyLedger | None = None
    final_duties: tuple[int, ...] = ()
    final_door: DoorPhase | None = None
    steps: int = 0

    def lines(self) -> list[str]:
        return [r.line() for r in self.records] + [format_total(self.total)]

    def export(self) -> str:
        return "\n".join(self.lines()) + "\n"

    def digest(self) -> str:
        return hashlib.sha256(self.export().encode()).hexdigest()

    def zone_sequence(self) -> list[tuple[Lamp, ...]]:
        """Distinct zone-state vectors in the order the run passed through them."""
        if not self.zone_events:
            return []
        zones = 1 + max(z for _, z, _ in self.zone_events)
        current: list[Lamp | None] = [None] * zones
        seq: list[tuple[Lamp, ...]] = []
        i = 0
        events = self.zone_events
        while i < len(events):
            t = events[i][0]
            while i < len(events) and events[i][0] == t:
                current[events[i][1]] = events[i][2]
                i += 1
            snapshot = tuple(current)
            if not seq or seq[-1] != snapshot:
                seq.append(snapshot)
        return seq

    def door_sequence(self) -> list[DoorPhase]:
        return [phase for _, phase in self.door_events]


def build_board(scenario: Scenario) -> Board:
    zones = scenario.config.zone_count
    pins = [LDR_PIN]
    pins += [ir_pin(i) for i in range(len(scenario.all_sensors))]
    pins += [lamp_pin(i) for i in range(zones)]
    if scenario.config.has_door:
        pins += list(MOTOR_PINS)
    board = Board(pins, scenario.tick_ms)

    board.attach(LDR_PIN, lambda tick: adc_at(scenario, tick))
    road_end = scenario.road_end_m
    door_index = len(scenario.sensors)

    def ir_source(i, sensor):
        door = scenario.config.has_door and i == door_index

        def read(tick):
            t = tick_time(tick, scenario.tick_ms)
            spans = []
            for v in scenario.vehicles:
                if v.enter_time_s > t:
                    break  # vehicles are sorted by entry time
                if door and not v.authorized:
                    continue
                s = vehicle_span(v, t, road_end)
                if s is not None:
                    spans.append(s)
            return ir_output(sensor, spans)

        return read

    for i, sensor in enumerate(scenario.all_sensors):
        board.attach(ir_pin(i), ir_source(i, sensor))
    return board


def run(scenario: Scenario, power: PowerModel | None = None) -> Trace:
    cfg = scenario.config
    power = power or PowerModel.for_scenario(scenario)
    n = scenario.n_ticks
    board = build_board(scenario)
    ir_pins = [ir_pin(i) for i in range(len(scenario.all_sensors))]
    breakpoints = input_breakpoints(scenario)

    trace = Trace()
    ticks_in = [Counter() for _ in range(cfg.zone_count)]
    ledger = EnergyLedger.empty(cfg.zone_count)
    state: ControllerState = initial_state(cfg)
    prev_zones: tuple[Lamp, ...] | None = None
    prev_duties: tuple[int, ...] | None = None
    prev_door: DoorPhase | None = None

    tick = 0
    while tick < n:
        t = board.clock.time_s
        adc = board.analog_read(LDR_PIN)
        levels = [board.digital_read(p) for p in ir_pins]
        result = controller_step(adc, levels, state, cfg, time_s=t)

        zones = tuple(z.value for z in result.state.zones)
        for i, duty in enumerate(result.duties):
            board.pwm_write(lamp_pin(i), duty)
            if prev_duties is None or prev_duties[i] != duty:
                trace.duty_events.append((t, i, int(duty)))
                trace.records.append(Record(t, "duty", f"zone={i} duty={int(duty)}"))
            if prev_zones is None or prev_zones[i] is not zones[i]:
                trace.zone_events.append((t, i, zones[i]))
        if result.motor is not None:
            m = result.motor
            board.digital_write(MOTOR_PINS[0], m.in1)
            board.digital_write(MOTOR_PINS[1], m.in2)
            board.digital_write(MOTOR_PINS[2], LogicLevel.HIGH if m.enable else LogicLevel.LOW)
        door = result.state.door.phase if result.state.door is not None else None
        if door is not None and door is not prev_door:
            trace.door_events.append((t, door))
            trace.records.append(Record(t, "door", f"phase={door.value}"))
        for text in result.serial:
            board.serial_print(text)
            trace.records.append(Record(t, "serial", text))

        if result.state == state:
            span = next_breakpoint(breakpoints, tick, n) - tick
        else:
            span = 1
        for i, lamp in enumerate(zones):
            ticks_in[i][lamp] += span
        ledger = accrue(ledger, result.duties, span * scenario.tick_ms / 1000, power)

        state, prev_zones, prev_duties, prev_door = result.state, zones, result.duties, door
        trace.steps += 1
        tick += span
        board.advance(span)

    trace.total = state.counter.count
    board.serial_print(format_total(trace.total))
    trace.serial = list(board.serial)
    trace.occupancy = [
        {lamp: c[lamp] * scenario.tick_ms / 1000 for lamp in Lamp} for c in ticks_in
    ]
    trace.ledger = ledger
    trace.final_duties = tuple(int(d) for d in (prev_duties or ()))
    trace.final_door = prev_door
    return trace


def high_fraction(trace: Trace, night_s: float) -> float:
    """Share of zone-night time spent High."""
    if night_s <= 0:
        return 0.0
    high = sum(occ[Lamp.HIGH] for occ in trace.occupancy)
    return high / (night_s * len(trace.occupancy))
