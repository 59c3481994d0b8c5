"""Run every shipped scenario, print its zone and door sequences and check goldens."""
import argparse
from pathlib import Path

from streetlight.cli import GoldenMismatch, verify_golden
from streetlight.scenario import load_scenario
from streetlight.sim import run

ROOT = Path(__file__).resolve().parent.parent / "scenarios"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dir", type=Path, default=ROOT)
    ap.add_argument("--max-states", type=int, default=12, help="zone states shown per scenario")
    args = ap.parse_args()
    for path in sorted(args.dir.glob("*.scn")):
        tr = run(load_scenario(path))
        print(f"== {path.name}: {tr.steps} controller steps, total={tr.total}")
        seq = tr.zone_sequence()
        for states in seq[: args.max_states]:
            print("   zones", " ".join(s.name for s in states))
        if len(seq) > args.max_states:
            print(f"   ... {len(seq) - args.max_states} more zone states")
        if tr.door_events:
            print("   door ", " -> ".join(p.name for p in tr.door_sequence()))
        golden = path.with_suffix(".golden")
        if golden.exists():
            try:
                verify_golden(tr.lines(), golden)
                print("   golden OK")
            except GoldenMismatch as exc:
                print(f"   golden MISMATCH: {exc}")


if __name__ == "__main__":
    main()
