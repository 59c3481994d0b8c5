"""Night-long energy for Poisson traffic at increasing arrival rates."""
import argparse
import dataclasses

from streetlight.cli import compare_policies
from streetlight.energy import Policy, savings
from streetlight.scenario import generate_traffic, parse_scenario

ROAD = """\
mode A
tick_ms 10
duration_s {duration}
sensor 1.0 0.15
sensor 1.5 0.15
sensor 2.0 0.15
sun 0 0
"""


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--duration", type=float, default=3600.0)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--rates", type=float, nargs="+", default=[0, 15, 30, 60, 120, 240, 480])
    args = ap.parse_args()
    road = parse_scenario(ROAD.format(duration=args.duration))
    policies = [Policy.MODE_A, Policy.MODE_B, Policy.ALWAYS_DIM, Policy.ALWAYS_ON_FULL]
    print("rate_per_h  vehicles  " + "  ".join(f"{p.value:>12}" for p in policies))
    for rate in args.rates:
        cars = generate_traffic(args.seed, rate, args.duration, 0.5, 0.2)
        sc = dataclasses.replace(road, vehicles=tuple(cars))
        energies = dict(compare_policies(sc, policies))
        full = energies[Policy.ALWAYS_ON_FULL]
        cells = "  ".join(f"{savings(energies[p], full):12.4f}" for p in policies)
        print(f"{rate:10.0f}  {len(cars):8d}  {cells}")


if __name__ == "__main__":
    main()
