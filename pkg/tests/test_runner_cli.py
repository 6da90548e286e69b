"""Runner file contracts and the CLI surface (exit codes, outputs)."""

import json
import os

import pytest

import bmo
from bmo import runner, traceio
from bmo.cli import main as cli_main
from bmo.config import parse_config

MINI = """
schema_version = 1
name = "mini"

[field]
kind = "point_sources"
bounds = [[-4.0, 4.0], [-4.0, 4.0]]

[[field.sources]]
intensity = 1.0
position = [0.0, 0.0]
kappa = 0.5

[params]
n_agents = 4
max_iters = 25
lambda_d = 2.0

[scenario]
sensor_sigma = 0.02
capture_radius = 0.4
init = [[-3.4, -3.6], [3.6, -3.3], [3.3, 3.5], [-3.6, 3.4]]

[ensemble]
seeds = [1, 2, 3]

[output]
dir = "out"
"""

SWEEP = MINI + """
[sweep]
parameter = "step_size"
values = [0.02, 0.04, 0.08, 0.16, 0.32]
"""


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


class TestRunner:
    def test_three_seeds_three_traces_one_summary(self, tmp_path):
        cfg = parse_config(MINI)
        out = tmp_path / "out"
        results = runner.execute(cfg, out_dir=str(out), quiet=True)
        assert len(results) == 3
        files = sorted(os.listdir(out))
        assert files == [
            "mini__seed1.csv",
            "mini__seed2.csv",
            "mini__seed3.csv",
            "mini__summary.jsonl",
        ]
        lines = (out / "mini__summary.jsonl").read_text().splitlines()
        assert len(lines) == 3
        record = json.loads(lines[0])
        assert record["seed"] == 1
        assert record["capture"] is not None

    def test_sweep_file_matrix(self, tmp_path):
        cfg = parse_config(SWEEP.replace("seeds = [1, 2, 3]", "seeds = [1, 2, 3, 4]"))
        out = tmp_path / "out"
        results = runner.execute(cfg, out_dir=str(out), quiet=True)
        assert len(results) == 20
        traces = [f for f in os.listdir(out) if f.endswith(".csv")]
        assert len(traces) == 20
        lines = (out / "mini__summary.jsonl").read_text().splitlines()
        keys = [
            (json.loads(ln)["sweep"]["step_size"], json.loads(ln)["seed"])
            for ln in lines
        ]
        assert len(set(keys)) == 20

    def test_rerun_leaves_identical_bytes(self, tmp_path):
        cfg = parse_config(MINI)
        out = tmp_path / "out"
        runner.execute(cfg, out_dir=str(out), quiet=True)
        before = {
            f: (out / f).read_bytes() for f in os.listdir(out)
        }
        runner.execute(cfg, out_dir=str(out), quiet=True)
        after = {f: (out / f).read_bytes() for f in os.listdir(out)}
        assert before == after

    def test_stale_output_detected(self, tmp_path):
        cfg = parse_config(MINI)
        out = tmp_path / "out"
        runner.execute(cfg, out_dir=str(out), quiet=True)
        (out / "mini__seed2.csv").write_text("tampered")
        with pytest.raises(runner.StaleOutputError, match="seed2"):
            runner.execute(cfg, out_dir=str(out), quiet=True)

    def test_seed_override(self, tmp_path):
        cfg = parse_config(MINI)
        out = tmp_path / "out"
        runner.execute(cfg, out_dir=str(out), seed_override=[42], quiet=True)
        assert sorted(os.listdir(out)) == [
            "mini__seed42.csv",
            "mini__summary.jsonl",
        ]

    def test_trace_files_parse_back(self, tmp_path):
        cfg = parse_config(MINI)
        out = tmp_path / "out"
        results = runner.execute(cfg, out_dir=str(out), quiet=True)
        back = traceio.read_trace(out / "mini__seed1.csv")
        assert traceio.traces_equal(back, results[0].trace)


class TestCli:
    def test_run_success_and_outputs(self, tmp_path, capsys):
        cfg_path = write(tmp_path, "mini.toml", MINI)
        out = str(tmp_path / "out")
        assert cli_main(["run", cfg_path, "--out-dir", out, "--quiet"]) == 0
        assert len(os.listdir(out)) == 4

    def test_run_rejects_sweep_config(self, tmp_path, capsys):
        cfg_path = write(tmp_path, "sweep.toml", SWEEP)
        assert cli_main(["run", cfg_path, "--quiet"]) == 2
        assert "sweep" in capsys.readouterr().err

    def test_sweep_requires_sweep_config(self, tmp_path, capsys):
        cfg_path = write(tmp_path, "mini.toml", MINI)
        assert cli_main(["sweep", cfg_path, "--quiet"]) == 2

    def test_unknown_key_exits_2_and_names_it(self, tmp_path, capsys):
        cfg_path = write(
            tmp_path, "bad.toml", MINI.replace("[ensemble]", "[ensemble]\nwarp = 9")
        )
        assert cli_main(["run", cfg_path, "--quiet"]) == 2
        assert "warp" in capsys.readouterr().err

    def test_missing_config_exits_2(self, tmp_path, capsys):
        assert cli_main(["run", str(tmp_path / "nope.toml"), "--quiet"]) == 2

    def test_unwritable_out_dir_exits_1(self, tmp_path, capsys):
        cfg_path = write(tmp_path, "mini.toml", MINI)
        blocker = tmp_path / "occupied"
        blocker.write_text("a file where the output dir should go")
        assert cli_main(["run", cfg_path, "--out-dir", str(blocker), "--quiet"]) == 1

    def test_analyze_stdout(self, tmp_path, capsys):
        cfg_path = write(tmp_path, "mini.toml", MINI)
        out = str(tmp_path / "out")
        cli_main(["run", cfg_path, "--out-dir", out, "--quiet"])
        capsys.readouterr()
        trace = os.path.join(out, "mini__seed1.csv")
        assert cli_main(["analyze", trace]) == 0
        record = json.loads(capsys.readouterr().out.splitlines()[0])
        assert record["seed"] == 1
        assert record["trace_file"] == "mini__seed1.csv"

    def test_analyze_missing_trace_exits_1(self, tmp_path, capsys):
        assert cli_main(["analyze", str(tmp_path / "ghost.csv")]) == 1

    def test_render_deterministic_bytes(self, tmp_path, capsys):
        cfg_path = write(tmp_path, "mini.toml", MINI)
        out = str(tmp_path / "out")
        cli_main(["run", cfg_path, "--out-dir", out, "--quiet"])
        trace = os.path.join(out, "mini__seed1.csv")
        svg1 = str(tmp_path / "a.svg")
        svg2 = str(tmp_path / "b.svg")
        assert cli_main(["render", trace, svg1, "--quiet"]) == 0
        assert cli_main(["render", trace, svg2, "--quiet"]) == 0
        a, b = open(svg1, "rb").read(), open(svg2, "rb").read()
        assert a == b
        text = a.decode("utf-8")
        assert text.count('class="agent"') == 4
        assert 'class="bounds"' in text
        assert 'class="peak"' in text

    def test_render_single_stationary_agent(self, tmp_path):
        field = bmo.default_three_peak_field()
        params = bmo.BmoParams(n_agents=1, max_iters=4, seed=3, step_size=0.0)
        trace = bmo.kernel.run(field, params)
        path = tmp_path / "one.csv"
        traceio.write_trace(trace, path)
        svg_path = str(tmp_path / "one.svg")
        assert cli_main(["render", str(path), svg_path, "--quiet"]) == 0
        text = open(svg_path).read()
        assert text.count('class="agent"') == 1
        assert 'class="bounds"' in text

    def test_seed_override_flag(self, tmp_path):
        cfg_path = write(tmp_path, "mini.toml", MINI)
        out = str(tmp_path / "out")
        assert cli_main(
            ["run", cfg_path, "--out-dir", out, "--seed-override", "7,8", "--quiet"]
        ) == 0
        csvs = sorted(f for f in os.listdir(out) if f.endswith(".csv"))
        assert csvs == ["mini__seed7.csv", "mini__seed8.csv"]
