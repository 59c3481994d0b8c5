"""Automatic streetlight controller running on a simulated microcontroller board."""
from .board import AdcValue, Board, LogicLevel, PinId, PinRole, PwmDuty
from .controller import ControllerConfig, DayNight, DoorPhase, Lamp, Mode, controller_step
from .energy import EnergyLedger, Policy, PowerModel
from .scenario import Scenario, Vehicle, load_scenario, parse_scenario
from .sim import Trace, run

__all__ = [
    "AdcValue", "Board", "LogicLevel", "PinId", "PinRole", "PwmDuty",
    "ControllerConfig", "DayNight", "DoorPhase", "Lamp", "Mode", "controller_step",
    "EnergyLedger", "Policy", "PowerModel",
    "Scenario", "Vehicle", "load_scenario", "parse_scenario",
    "Trace", "run",
]
