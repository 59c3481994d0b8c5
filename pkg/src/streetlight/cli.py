"""Command-line front end.

Exit codes: 0 success, 1 output could not be written, 2 bad scenario or
usage, 3 trace differs from the golden file.
"""
from __future__ import annotations

import argparse
import os
import sys
import tempfile
from pathlib import Path
from typing import Sequence

from .controller import Mode
from .energy import Policy, PowerModel, baseline_energy, format_report
from .scenario import Scenario, ScenarioError, format_vehicle, generate_traffic, load_scenario
from .sim import run

EXIT_OK = 0
EXIT_IO = 1
EXIT_SCENARIO = 2
EXIT_GOLDEN = 3

ALL_POLICIES = [Policy.MODE_A, Policy.MODE_B, Policy.ALWAYS_ON_FULL, Policy.ALWAYS_DIM]


class GoldenMismatch(Exception):
    pass


def compare_policies(scenario: Scenario, policies: Sequence[Policy]) -> list[tuple[Policy, float]]:
    """Energy per policy over the same traffic and daylight."""
    power = PowerModel.for_scenario(scenario)
    out = []
    for policy in policies:
        if policy is Policy.MODE_A:
            energy = run(scenario.with_mode(Mode.A), power).ledger.total
        elif policy is Policy.MODE_B:
            energy = run(scenario.with_mode(Mode.B), power).ledger.total
        else:
            energy = baseline_energy(scenario, power, policy)
        out.append((policy, energy))
    return out


def report_lines(scenario: Scenario, policies: Sequence[Policy]) -> list[str]:
    baseline = baseline_energy(scenario, PowerModel.for_scenario(scenario), Policy.ALWAYS_ON_FULL)
    return [format_report(p, e, baseline) for p, e in compare_policies(scenario, policies)]


def verify_golden(lines: list[str], golden_path: Path) -> None:
    expected = golden_path.read_text().splitlines()
    for i, (want, got) in enumerate(zip(expected, lines), start=1):
        if want != got:
            raise GoldenMismatch(f"record {i} differs: expected {want!r}, got {got!r}")
    if len(expected) != len(lines):
        i = min(len(expected), len(lines)) + 1
        want = expected[i - 1] if i <= len(expected) else "<end of golden>"
        got = lines[i - 1] if i <= len(lines) else "<end of trace>"
        raise GoldenMismatch(f"record {i} differs: expected {want!r}, got {got!r}")


def write_atomic(path: Path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _load(path: str) -> Scenario:
    try:
        return load_scenario(path)
    except FileNotFoundError:
        raise ScenarioError(f"scenario file not found: {path}") from None
    except IsADirectoryError:
        raise ScenarioError(f"scenario path is a directory: {path}") from None


def _policies(names: Sequence[str] | None) -> list[Policy]:
    return [Policy(n) for n in names] if names else list(ALL_POLICIES)


def cmd_run(args) -> int:
    scenario = _load(args.scenario)
    trace = run(scenario)
    lines = trace.lines()
    text = "\n".join(lines) + "\n"

    if args.verify_golden:
        verify_golden(lines, Path(args.verify_golden))
    if args.write_golden:
        write_atomic(Path(args.write_golden), text)
    if args.trace and args.trace != "-":
        write_atomic(Path(args.trace), text)
    elif not args.quiet:
        sys.stdout.write(text)
    if args.energy:
        policies = _policies(args.policies) if args.policies else [
            Policy.MODE_A if scenario.config.mode is Mode.A else Policy.MODE_B,
            Policy.ALWAYS_ON_FULL,
        ]
        for line in report_lines(scenario, policies):
            print(line)
    return EXIT_OK


def cmd_compare(args) -> int:
    scenario = _load(args.scenario)
    for line in report_lines(scenario, _policies(args.policies)):
        print(line)
    return EXIT_OK


def cmd_gen_traffic(args) -> int:
    if args.rate < 0 or args.speed <= 0 or args.length <= 0 or args.duration <= 0:
        print("error: rate must be >= 0; duration, speed and length > 0", file=sys.stderr)
        return EXIT_SCENARIO
    for v in generate_traffic(args.seed, args.rate, args.duration, args.speed, args.length):
        print(format_vehicle(v))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="streetlight", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    policy_names = [p.value for p in Policy]

    p = sub.add_parser("run", help="simulate a scenario and emit its trace")
    p.add_argument("scenario")
    p.add_argument("--trace", help="trace output path ('-' for stdout, the default)")
    p.add_argument("--quiet", action="store_true", help="do not print the trace to stdout")
    p.add_argument("--energy", action="store_true", help="append an energy report")
    p.add_argument("--policies", nargs="+", choices=policy_names)
    p.add_argument("--verify-golden", metavar="PATH")
    p.add_argument("--write-golden", metavar="PATH")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("compare", help="energy of several control policies on one scenario")
    p.add_argument("scenario")
    p.add_argument("--policies", nargs="+", choices=policy_names)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("gen-traffic", help="print seeded random vehicle lines")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--rate", type=float, required=True, help="vehicles per hour")
    p.add_argument("--duration", type=float, required=True, help="seconds")
    p.add_argument("--speed", type=float, default=0.5)
    p.add_argument("--length", type=float, default=0.2)
    p.set_defaults(func=cmd_gen_traffic)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCENARIO
    except GoldenMismatch as exc:
        print(f"golden mismatch: {exc}", file=sys.stderr)
        return EXIT_GOLDEN
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
