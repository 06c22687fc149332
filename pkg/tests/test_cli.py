import json

import pytest

from minweight.cli import emit_report, parse_and_dispatch, report_document
from minweight.experiments import ExperimentConfig, ExperimentReport, Table, Verdict, run_experiment


def tiny_report(verdicts=()):
    return ExperimentReport(
        experiment="tree-scaling",
        config={"experiment": "tree-scaling", "master_seed": 1},
        tables=(
            Table("summary", ("n", "value"), ((64, 0.123456789012345678), (128, 2.0))),
        ),
        verdicts=tuple(verdicts),
        runtime_seconds=1.23,
        tool_version="0.1.0",
        mixer_version="splitmix64-absorb/v1",
    )


def test_no_arguments_is_usage_error(capsys):
    assert parse_and_dispatch([]) == 1


def test_unknown_subcommand_is_usage_error():
    assert parse_and_dispatch(["frobnicate"]) == 1


def test_missing_config_mentions_path(capsys):
    code = parse_and_dispatch(["tree-scaling", "--config", "missing.json"])
    assert code == 1
    assert "missing.json" in capsys.readouterr().err


def test_malformed_config_names_key(tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"experiment": "tree-scaling", "wat": 1}))
    code = parse_and_dispatch(["tree-scaling", "--config", str(cfg), "--output-dir", str(tmp_path)])
    assert code == 1
    assert "wat" in capsys.readouterr().err


def test_config_experiment_must_match_subcommand(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"experiment": "fpp-band"}))
    assert parse_and_dispatch(["tree-scaling", "--config", str(cfg)]) == 1


def test_selftest_passes(tmp_path, capsys):
    code = parse_and_dispatch(
        [
            "selftest",
            "--output-dir",
            str(tmp_path),
            "--config",
            str(_suite_config(tmp_path)),
        ]
    )
    out = capsys.readouterr().out
    assert code == 0
    assert "PASS" in out and "FAIL" not in out
    assert (tmp_path / "oracle-suite.json").exists()


def test_selftest_default_config(tmp_path):
    assert parse_and_dispatch(["selftest", "--output-dir", str(tmp_path), "--format", "json"]) == 0


def _suite_config(tmp_path):
    path = tmp_path / "suite.json"
    path.write_text(
        json.dumps(
            {
                "experiment": "oracle-suite",
                "master_seed": 1,
                "suite_tree_instances": 3,
                "suite_prufer_instances": 2,
                "suite_lattice_instances": 3,
            }
        )
    )
    return path


def test_smoke_run_writes_both_formats(tmp_path):
    code = parse_and_dispatch(
        ["tree-scaling", "--output-dir", str(tmp_path), "--format", "both", "--trials", "4"]
    )
    assert code in (0, 2)  # slope verdicts are statistical at 4 trials
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == [
        "tree-scaling.json",
        "tree-scaling_fits.csv",
        "tree-scaling_summary.csv",
        "tree-scaling_verdicts.csv",
    ]
    doc = json.loads((tmp_path / "tree-scaling.json").read_text())
    assert doc["config"]["trials"] == 4  # flag override echoed
    assert doc["mixer_version"] == "splitmix64-absorb/v1"
    assert "runtime" not in json.dumps(doc)


def test_byte_identical_reruns_and_worker_counts(tmp_path):
    a = tmp_path / "a"
    b = tmp_path / "b"
    c = tmp_path / "c"
    for out, workers in ((a, "1"), (b, "1"), (c, "2")):
        code = parse_and_dispatch(
            [
                "fpp-band",
                "--output-dir",
                str(out),
                "--trials",
                "6",
                "--workers",
                workers,
                "--format",
                "both",
            ]
        )
        assert code == 0
    for name in ("fpp-band_band.csv", "fpp-band_verdicts.csv", "fpp-band.json"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
        assert (a / name).read_bytes() == (c / name).read_bytes()


def test_env_var_output_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("MINWEIGHT_OUTPUT_DIR", str(tmp_path / "envdir"))
    code = parse_and_dispatch(["oracle-suite", "--config", str(_suite_config(tmp_path)), "--format", "json"])
    assert code == 0
    assert (tmp_path / "envdir" / "oracle-suite.json").exists()


def test_flag_beats_env_var(tmp_path, monkeypatch):
    monkeypatch.setenv("MINWEIGHT_OUTPUT_DIR", str(tmp_path / "envdir"))
    code = parse_and_dispatch(
        [
            "oracle-suite",
            "--config",
            str(_suite_config(tmp_path)),
            "--output-dir",
            str(tmp_path / "flagdir"),
            "--format",
            "json",
        ]
    )
    assert code == 0
    assert (tmp_path / "flagdir" / "oracle-suite.json").exists()
    assert not (tmp_path / "envdir").exists()


def test_failed_verdict_exit_code(tmp_path, monkeypatch):
    import minweight.experiments as exp_mod

    failing = tiny_report(
        [Verdict(name="x", criterion="AC4", passed=False, measured=1.0, threshold=0.0)]
    )
    monkeypatch.setitem(exp_mod.DRIVERS, "tree-scaling", lambda cfg: failing)
    code = parse_and_dispatch(["tree-scaling", "--output-dir", str(tmp_path)])
    assert code == 2


def test_emit_empty_verdicts_valid_files(tmp_path):
    paths = emit_report(tiny_report(), "both", tmp_path)
    assert len(paths) == 3
    verdict_lines = (tmp_path / "tree-scaling_verdicts.csv").read_text().splitlines()
    assert verdict_lines == ["name,criterion,passed,measured,threshold,note"]


def test_csv_numbers_round_trip(tmp_path):
    emit_report(tiny_report(), "csv", tmp_path)
    lines = (tmp_path / "tree-scaling_summary.csv").read_text().splitlines()
    header, row0, row1 = lines
    assert header == "n,value"
    n, value = row0.split(",")
    assert int(n) == 64
    assert float(value) == 0.123456789012345678
    assert float(row1.split(",")[1]) == 2.0


def test_json_numbers_round_trip(tmp_path):
    report = run_experiment(
        ExperimentConfig.from_dict(
            {
                "experiment": "oracle-suite",
                "suite": ["prufer"],
                "suite_prufer_instances": 2,
            }
        )
    )
    doc = report_document(report)
    again = json.loads(json.dumps(doc))
    assert again == json.loads(json.dumps(again))  # parse -> format -> parse fixed point


def test_emit_rejects_unknown_format(tmp_path):
    from minweight.errors import ConfigurationError

    with pytest.raises(ConfigurationError):
        emit_report(tiny_report(), "xml", tmp_path)
