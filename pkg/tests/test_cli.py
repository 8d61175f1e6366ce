"""End-to-end command-line behavior: outputs, defaults, and exit codes."""
import json
import math

import numpy as np
import pytest

from hrc_hazard import cli
from hrc_hazard.pipeline import CSV_HEADER
from hrc_hazard.simulator import ScenarioSpec, generate


def run(argv):
    return cli.main(argv)


@pytest.fixture(scope="module")
def scenario_file(tmp_path_factory, model):
    """A short but realistic scenario on disk."""
    path = tmp_path_factory.mktemp("scn") / "short.jsonl"
    spec = ScenarioSpec(kind="handover", variant="dangerous", duration=2.0, rate=10.0, seed=5)
    with open(path, "w", encoding="utf-8") as fh:
        for record in generate(spec, model):
            fh.write(json.dumps(record) + "\n")
    return path


def test_help_mentions_units(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["--help"])
    assert exc.value.code == 0
    for sub in ("analyze", "simulate", "heatmap"):
        with pytest.raises(SystemExit):
            run([sub, "--help"])
    out = capsys.readouterr().out
    for needle in ("m/s", "(s)", "deg", "meters"):
        assert needle in out, f"--help should state units; missing {needle!r}"


def test_help_lists_all_commands(capsys):
    with pytest.raises(SystemExit):
        run(["--help"])
    out = capsys.readouterr().out
    for command in ("analyze", "simulate", "heatmap", "calibrate", "compare"):
        assert command in out


def test_analyze_writes_expected_files(scenario_file, tmp_path, capsys):
    out_dir = tmp_path / "out"
    assert run(["analyze", str(scenario_file), "--out", str(out_dir)]) == 0
    csv_path = out_dir / "short_frames.csv"
    json_path = out_dir / "short_summary.json"
    assert csv_path.exists() and json_path.exists()

    lines = csv_path.read_text().splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 1 + 20  # 2 s at 10 frames/s

    payload = json.loads(json_path.read_text())
    assert payload["frame_count"] == 20
    assert "R_total" in payload["summary"]

    stdout = capsys.readouterr().out
    assert "short_frames.csv" in stdout


def test_analyze_quiet_silences_stdout(scenario_file, tmp_path, capsys):
    assert run(["analyze", str(scenario_file), "--out", str(tmp_path / "q"), "--quiet"]) == 0
    assert capsys.readouterr().out == ""


def test_analyze_is_deterministic(scenario_file, tmp_path):
    d1, d2 = tmp_path / "a", tmp_path / "b"
    run(["analyze", str(scenario_file), "--out", str(d1), "--quiet"])
    run(["analyze", str(scenario_file), "--out", str(d2), "--quiet"])
    assert (d1 / "short_frames.csv").read_bytes() == (d2 / "short_frames.csv").read_bytes()
    assert (d1 / "short_summary.json").read_bytes() == (d2 / "short_summary.json").read_bytes()


def test_analyze_missing_input_exits_1(tmp_path, capsys):
    assert run(["analyze", str(tmp_path / "absent.jsonl"), "--quiet"]) == 1
    assert "error:" in capsys.readouterr().err


def test_analyze_invalid_frame_names_the_frame(scenario_file, tmp_path, capsys):
    lines = scenario_file.read_text().splitlines()
    record = json.loads(lines[17])
    record["robot"]["q"] = record["robot"]["q"][:3]
    lines[17] = json.dumps(record)
    bad = tmp_path / "bad.jsonl"
    bad.write_text("\n".join(lines) + "\n")

    assert run(["analyze", str(bad), "--out", str(tmp_path), "--quiet"]) == 2
    err = capsys.readouterr().err
    assert "frame 17" in err


def test_analyze_bad_config_exits_3(scenario_file, tmp_path, capsys):
    config = tmp_path / "hazard.toml"
    config.write_text("[hazard]\nbeta = 7.0\n")
    code = run(["analyze", str(scenario_file), "--config", str(config), "--quiet"])
    assert code == 3
    assert "beta" in capsys.readouterr().err


def test_config_via_environment(tmp_path, monkeypatch, capsys):
    config = tmp_path / "hazard.toml"
    config.write_text("[hazard]\nepsilon_reach = 0.05\n")
    monkeypatch.setenv(cli.ENV_CONFIG, str(config))
    assert run(["calibrate"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["epsilon_reach"] == 0.05


def test_explicit_config_beats_environment(tmp_path, monkeypatch, capsys):
    env_cfg = tmp_path / "env.toml"
    env_cfg.write_text("[hazard]\nepsilon_reach = 0.05\n")
    cli_cfg = tmp_path / "cli.toml"
    cli_cfg.write_text("[hazard]\nepsilon_reach = 0.02\n")
    monkeypatch.setenv(cli.ENV_CONFIG, str(env_cfg))
    assert run(["calibrate", "--config", str(cli_cfg)]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["epsilon_reach"] == 0.02


def test_simulate_default_run(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    assert run(["simulate", "--kind", "handover", "--variant", "dangerous", "--quiet"]) == 0
    out = tmp_path / "handover_dangerous.jsonl"
    assert out.exists()
    lines = out.read_text().splitlines()
    assert len(lines) == 300
    first = json.loads(lines[0])
    assert first["t"] == 0.0
    assert len(first["robot"]["q"]) == 6


def test_simulate_then_analyze_round_trip(tmp_path):
    scn = tmp_path / "co.jsonl"
    assert run([
        "simulate", "--kind", "coexistence", "--variant", "non-dangerous",
        "--duration", "2", "--rate", "10", "--out", str(scn), "--quiet",
    ]) == 0
    assert run(["analyze", str(scn), "--out", str(tmp_path), "--quiet"]) == 0
    assert (tmp_path / "co_frames.csv").exists()


def test_simulate_rejects_unknown_kind(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["simulate", "--kind", "juggling", "--variant", "dangerous"])
    assert exc.value.code == 2  # argparse rejects the choice itself


def test_heatmap_grid_cells(tmp_path, model, cfg):
    out = tmp_path / "grid.csv"
    assert run(["heatmap", "--grid", "11x19", "--out", str(out), "--quiet"]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "v,theta_deg,r_V"
    assert len(lines) == 1 + 11 * 19

    cells = {}
    for line in lines[1:]:
        v, theta, r = (float(x) for x in line.split(","))
        cells[(v, theta)] = r

    # head-on at v_max is the unique saturated corner
    assert cells[(1.0, 0.0)] == 1.0
    # straight retreat at v_max keeps only the speed term
    assert cells[(1.0, 180.0)] == pytest.approx(cfg.beta, abs=1e-12)
    # everything below the speed threshold is inert
    for (v, _), r in cells.items():
        if v < model.v_min:
            assert r == 0.0
    assert max(cells.values()) == 1.0
    assert sum(1 for r in cells.values() if r == 1.0) == 1


def test_heatmap_rejects_malformed_grid(tmp_path, capsys):
    assert run(["heatmap", "--grid", "banana", "--out", str(tmp_path / "x.csv")]) == 3
    assert run(["heatmap", "--grid", "1x5", "--out", str(tmp_path / "y.csv")]) == 3


def test_calibrate_reproduces_derived_constants(model, capsys):
    assert run(["calibrate"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["d_min"] == pytest.approx(model.v_max * model.t_stop, abs=1e-15)
    assert payload["k_V"] == pytest.approx(1.0 / (model.v_max - model.v_min) ** 2, abs=1e-12)
    residual = math.exp(-payload["alpha"] * (payload["d_reach"] - payload["d_min"]))
    assert residual == pytest.approx(payload["epsilon_reach"], abs=1e-12)


def test_calibrate_epsilon_override(capsys):
    assert run(["calibrate", "--epsilon", "0.001"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["epsilon_reach"] == 0.001
    assert payload["alpha"] == pytest.approx(math.log(1000.0) / 1.0, rel=1e-12)


def test_compare_command(scenario_file, tmp_path, capsys):
    run(["analyze", str(scenario_file), "--out", str(tmp_path), "--quiet"])
    frames_csv = tmp_path / "short_frames.csv"
    out = tmp_path / "deltas.csv"
    assert run(["compare", str(frames_csv), str(frames_csv), "--out", str(out)]) == 0
    captured = capsys.readouterr()
    summary = json.loads(captured.out)
    assert summary["dominance_fraction"] == 0.0
    assert summary["aligned_frames"] == 20
    assert captured.err == ""
    lines = out.read_text().splitlines()
    assert lines[0] == "t,delta_r_D,delta_r_V,delta_r_PHH,delta_R_total"


def test_compare_disjoint_warns_on_stderr(scenario_file, tmp_path, capsys):
    run(["analyze", str(scenario_file), "--out", str(tmp_path), "--quiet"])
    frames_csv = tmp_path / "short_frames.csv"

    # shift every timestamp far past the original range
    lines = frames_csv.read_text().splitlines()
    shifted = [lines[0]]
    for line in lines[1:]:
        cols = line.split(",")
        cols[0] = repr(float(cols[0]) + 500.0)
        shifted.append(",".join(cols))
    moved = tmp_path / "moved.csv"
    moved.write_text("\n".join(shifted) + "\n")

    out = tmp_path / "d2.csv"
    assert run(["compare", str(frames_csv), str(moved), "--out", str(out), "--quiet"]) == 0
    captured = capsys.readouterr()
    assert "warning:" in captured.err
    assert out.read_text().splitlines() == ["t,delta_r_D,delta_r_V,delta_r_PHH,delta_R_total"]


def test_missing_robot_file_exits_3(scenario_file, tmp_path, capsys):
    code = run([
        "analyze", str(scenario_file), "--robot", str(tmp_path / "ghost.toml"), "--quiet"
    ])
    assert code == 3
