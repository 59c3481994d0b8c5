"""Savings against an always-on road as a function of occupancy.

A single zone stays dark for the whole run while one slow vehicle holds the
sensor for a chosen fraction of it. Simulated savings are printed next to the
closed forms 1 - rho (Mode B) and (1 - d)(1 - rho) (Mode A, d = dim/high).
"""
import argparse
import dataclasses

from streetlight.controller import Mode
from streetlight.energy import Policy, PowerModel, baseline_energy, night_seconds, savings
from streetlight.scenario import Vehicle, parse_scenario
from streetlight.sim import high_fraction, run

BASE = """\
mode B
tick_ms 10
duration_s {duration}
sensor 0.25 0.25
sun 0 0
"""


def scenario_for(rho, duration, length=1.0, window=0.25):
    sc = parse_scenario(BASE.format(duration=duration))
    if rho == 0:
        return sc
    # the window starts at the road entry; the sensor sees the car while it
    # covers 2 * window + its own length
    speed = (2 * window + length) / (rho * duration)
    return dataclasses.replace(sc, vehicles=(Vehicle(0.005, speed, length),))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--duration", type=float, default=100.0)
    ap.add_argument("--steps", type=int, default=10)
    args = ap.parse_args()
    print("rho_target  rho_sim  savings_B  closed_B  savings_A  closed_A")
    for k in range(args.steps + 1):
        rho = k / args.steps * 0.9
        sc = scenario_for(rho, args.duration)
        power = PowerModel.for_scenario(sc)
        base = baseline_energy(sc, power, Policy.ALWAYS_ON_FULL)
        tr_b = run(sc.with_mode(Mode.B), power)
        tr_a = run(sc.with_mode(Mode.A), power)
        r = high_fraction(tr_b, night_seconds(sc))
        d = sc.config.dim_duty / sc.config.high_duty
        print(
            f"{rho:10.3f}  {r:7.4f}  {savings(tr_b.ledger.total, base):9.4f}  {1 - r:8.4f}"
            f"  {savings(tr_a.ledger.total, base):9.4f}  {(1 - d) * (1 - r):8.4f}"
        )


if __name__ == "__main__":
    main()
