import shutil
from pathlib import Path

import pytest

from streetlight.cli import EXIT_GOLDEN, EXIT_IO, EXIT_OK, EXIT_SCENARIO, main
from streetlight.scenario import parse_scenario

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"


@pytest.fixture
def handoff(tmp_path):
    for name in ("mode_a_handoff.scn", "mode_a_handoff.golden"):
        shutil.copy(SCENARIOS / name, tmp_path / name)
    return tmp_path


def test_run_writes_trace(handoff, capsys):
    out = handoff / "out.tsv"
    assert main(["run", str(handoff / "mode_a_handoff.scn"), "--trace", str(out)]) == EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[-1] == "total=1"
    assert capsys.readouterr().out == ""


def test_run_to_stdout(handoff, capsys):
    assert main(["run", str(handoff / "mode_a_handoff.scn")]) == EXIT_OK
    assert capsys.readouterr().out.endswith("total=1\n")


def test_run_missing_file(capsys):
    assert main(["run", "missing.scn"]) == EXIT_SCENARIO
    assert "missing.scn" in capsys.readouterr().err


def test_run_bad_scenario_names_line(tmp_path, capsys):
    bad = tmp_path / "bad.scn"
    bad.write_text("mode A\nduration_s 10\nsensor 1\nvehicle -1 2.0 0.2\n")
    assert main(["run", str(bad)]) == EXIT_SCENARIO
    assert "line 4" in capsys.readouterr().err


def test_golden_verification(handoff, capsys):
    scn = handoff / "mode_a_handoff.scn"
    assert main(["run", str(scn), "--quiet", "--verify-golden", str(handoff / "mode_a_handoff.golden")]) == EXIT_OK
    scn.write_text(scn.read_text() + "dim_duty 100\n")
    out = handoff / "out.tsv"
    code = main(["run", str(scn), "--trace", str(out), "--verify-golden", str(handoff / "mode_a_handoff.golden")])
    assert code == EXIT_GOLDEN
    err = capsys.readouterr().err
    assert "record 4" in err and "duty=127" in err and "duty=100" in err
    assert not out.exists()
    assert not list(handoff.glob(".*.tmp"))


def test_write_golden_round_trip(handoff):
    target = handoff / "new.golden"
    assert main(["run", str(handoff / "mode_a_handoff.scn"), "--quiet", "--write-golden", str(target)]) == EXIT_OK
    assert target.read_text() == (handoff / "mode_a_handoff.golden").read_text()


def test_unwritable_output(handoff):
    code = main(["run", str(handoff / "mode_a_handoff.scn"), "--trace", str(handoff / "nodir" / "out.tsv")])
    assert code == EXIT_IO


def test_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["run"])
    assert exc.value.code == 2


def _report(capsys):
    return dict(
        (fields["policy"], fields)
        for fields in (
            dict(kv.split("=") for kv in line.split()) for line in capsys.readouterr().out.splitlines()
        )
    )


def test_compare_empty_night(capsys):
    assert main(["compare", str(SCENARIOS / "empty_night.scn"), "--policies", "ModeB", "AlwaysOnFull"]) == EXIT_OK
    r = _report(capsys)
    assert list(r) == ["ModeB", "AlwaysOnFull"]
    assert r["ModeB"]["savings_vs_always_on"] == "1.0000"
    assert r["AlwaysOnFull"]["savings_vs_always_on"] == "0.0000"


def test_compare_rho30(capsys):
    main(["compare", str(SCENARIOS / "rho30.scn"), "--policies", "ModeB"])
    assert _report(capsys)["ModeB"]["savings_vs_always_on"] == "0.7000"


def test_compare_mode_a_no_traffic(capsys):
    main(["compare", str(SCENARIOS / "empty_night.scn"), "--policies", "ModeA"])
    assert _report(capsys)["ModeA"]["savings_vs_always_on"] == f"{1 - 127 / 255:.4f}" == "0.5020"


def test_compare_day_only_reports_nan(tmp_path, capsys):
    day = tmp_path / "day.scn"
    day.write_text("mode B\nduration_s 10\nsensor 1\nsun 0 9000\n")
    assert main(["compare", str(day), "--policies", "ModeB"]) == EXIT_OK
    assert _report(capsys)["ModeB"]["savings_vs_always_on"] == "nan"


def test_run_energy_report(handoff, capsys):
    main(["run", str(handoff / "mode_a_handoff.scn"), "--quiet", "--energy"])
    r = _report(capsys)
    assert list(r) == ["ModeA", "AlwaysOnFull"]


def test_cli_determinism(capsys):
    args = ["compare", str(SCENARIOS / "traffic_night.scn")]
    main(args)
    first = capsys.readouterr().out
    main(args)
    assert capsys.readouterr().out == first


def test_gen_traffic(capsys):
    assert main(["gen-traffic", "--seed", "42", "--rate", "60", "--duration", "3600"]) == EXIT_OK
    out = capsys.readouterr().out
    lines = out.splitlines()
    assert lines and all(l.startswith("vehicle ") for l in lines)
    main(["gen-traffic", "--seed", "42", "--rate", "60", "--duration", "3600"])
    assert capsys.readouterr().out == out
    parse_scenario("mode A\nduration_s 3600\nsensor 1\n" + out)
    assert main(["gen-traffic", "--seed", "1", "--rate", "0", "--duration", "10"]) == EXIT_OK
    assert capsys.readouterr().out == ""
    assert main(["gen-traffic", "--seed", "1", "--rate", "-1", "--duration", "10"]) == EXIT_SCENARIO
