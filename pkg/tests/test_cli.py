import json
import os

import pytest

from conftest import GOLDEN
from treespace.cli import main
from treespace.config import JOBS_ENV, ConfigError, RunConfig, default_jobs
from treespace.reports import jsonable, render

GOLDEN_RUNS = [
    "enumerate --n 5",
    "enumerate --n 4 --space partition-nerve",
    "character --module lie --n 3",
    "character --module hatlie --n 3",
    "whitehouse --n 3",
    "verify --n 4 --depth quick",
]


def golden_name(args):
    return "cli_" + args.replace(" ", "_").replace("-", "") + ".json"


@pytest.mark.parametrize("args", GOLDEN_RUNS)
def test_reports_match_golden_files(args, tmp_path):
    out = tmp_path / "r.json"
    assert main(args.split() + ["--out", str(out)]) == 0
    with open(os.path.join(GOLDEN, golden_name(args)), encoding="utf-8") as fh:
        assert out.read_text(encoding="utf-8") == fh.read()


def test_reports_are_byte_stable(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert main(["verify", "--n", "5", "--depth", "full", "--seed", "7", "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_enumerate_values(capsys):
    assert main(["enumerate", "--n", "5"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["top_simplices"] == 105 and report["schema"] == 1
    assert main(["enumerate", "--n", "4", "--space", "partition-nerve"]) == 0
    assert json.loads(capsys.readouterr().out)["f_vector"] == [13, 18]
    assert main(["enumerate", "--n", "2"]) == 0
    assert "empty" in json.loads(capsys.readouterr().out)["notice"]


def test_enumerate_listing(capsys):
    assert main(["enumerate", "--n", "3", "--list"]) == 0
    assert json.loads(capsys.readouterr().out)["simplices"]["0"] == ["(0,(1,2),3)", "(0,(1,3),2)", "(0,1,(2,3))"]


def test_character_commands(capsys):
    assert main(["character", "--module", "lie", "--n", "3"]) == 0
    r = json.loads(capsys.readouterr().out)
    assert r["character"] == {"3": -1, "2+1": 0, "1+1+1": 2}
    assert main(["character", "--module", "hatlie", "--n", "3"]) == 0
    r = json.loads(capsys.readouterr().out)
    assert r["group"] == "S4" and r["dimension"] == 2
    assert main(["character", "--module", "homology", "--n", "4", "--space", "partition-nerve"]) == 0
    assert json.loads(capsys.readouterr().out)["dimension"] == 6


def test_whitehouse_command(capsys):
    assert main(["whitehouse", "--n", "3"]) == 0
    r = json.loads(capsys.readouterr().out)
    assert r["exactness"][0]["ranks"] == [6, 8, 2] and r["exactness"][0]["exact"]
    assert r["passed"]


def test_full_verify_includes_cycle_check(capsys):
    assert main(["verify", "--n", "5", "--depth", "full", "--format", "text"]) == 0
    text = capsys.readouterr().out
    assert "[PASS] ∂F₅ = 0" in text and "FAIL" not in text


def test_quick_verify_incidence(capsys):
    assert main(["verify", "--n", "4"]) == 0
    checks = {c["name"]: c for c in json.loads(capsys.readouterr().out)["checks"]}
    assert checks["codimension-one incidence"]["detail"] == {"3": 10}


def test_corrupted_dump_fails(tmp_path, capsys):
    with open(os.path.join(GOLDEN, "t5_complex.json"), encoding="utf-8") as fh:
        payload = json.load(fh)
    assert main(["verify", "--complex", os.path.join(GOLDEN, "t5_complex.json")]) == 0
    capsys.readouterr()
    payload["boundary"][1][0][2] *= -1
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(payload), encoding="utf-8")
    assert main(["verify", "--complex", str(bad)]) == 1
    r = json.loads(capsys.readouterr().out)
    assert r["checks"][0]["detail"]["nonzero_boundary_squared_in_degrees"] == [2]


@pytest.mark.parametrize("argv", [
    ["enumerate", "--n", "9"],
    ["enumerate"],
    ["bogus"],
    ["character", "--n", "3", "--module", "nope"],
    ["whitehouse", "--n", "2"],
    ["verify", "--complex", "/nonexistent/file.json"],
    ["enumerate", "--n", "4", "--jobs", "0"],
])
def test_usage_errors_exit_two(argv, capsys):
    assert main(argv) == 2
    capsys.readouterr()


def test_export_round_trip(tmp_path):
    out = tmp_path / "c.json"
    assert main(["export", "--n", "4", "--out", str(out)]) == 0
    data = json.loads(out.read_text(encoding="utf-8"))
    assert data["f_vector"] == [10, 15]
    assert main(["export", "--n", "4", "--what", "cycle", "--out", str(out)]) == 0
    assert len(json.loads(out.read_text(encoding="utf-8"))["terms"]) == 15


def test_text_format_and_timings(capsys):
    assert main(["verify", "--n", "4", "--format", "text", "--timings"]) == 0
    text = capsys.readouterr().out
    assert text.startswith("schema: 1") and "s)" in text


def test_big_integers_become_strings():
    assert jsonable({"a": 2**60, "b": [3, -(2**70)], "c": True}) == {"a": str(2**60), "b": [3, str(-(2**70))], "c": True}
    assert json.loads(render({"x": 2**64}, "json")) == {"x": "18446744073709551616"}


def test_config_validation(monkeypatch):
    with pytest.raises(ConfigError):
        RunConfig("verify", 8)
    with pytest.raises(ConfigError):
        RunConfig("verify", 4, space="cube")
    monkeypatch.setenv(JOBS_ENV, "3")
    assert default_jobs() == 3
    monkeypatch.setenv(JOBS_ENV, "lots")
    assert default_jobs() == 1
    assert "jobs" not in RunConfig("verify", 4, jobs=4).as_dict()
