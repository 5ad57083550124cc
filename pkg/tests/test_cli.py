import json
import subprocess
import sys

import pytest

from nilspec.cli import main
from nilspec.experiments import EXPERIMENT_THEOREMS


def run_cli(args):
    return main(args)


class TestList:
    def test_eight_rows(self, capsys):
        assert run_cli(["list"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 1 + 8

    def test_rows_name_their_statement(self, capsys):
        run_cli(["list"])
        out = capsys.readouterr().out
        assert "Theorem 4.1/4.2" in out
        assert "Theorem 5.6" in out

    def test_json_mode(self, capsys):
        assert run_cli(["list", "--json"]) == 0
        rows = json.loads(capsys.readouterr().out)
        assert {r["experiment"] for r in rows} == set(EXPERIMENT_THEOREMS)
        assert all("theorem" in r and "default_budget" in r for r in rows)


class TestRun:
    def test_core_identities_end_to_end(self, tmp_path, capsys):
        code = run_cli(
            ["run", "core-identities", "--p", "3", "--seed", "7", "--budget", "200",
             "--out", str(tmp_path)]
        )
        assert code == 0
        assert (tmp_path / "core-identities.csv").exists()
        assert (tmp_path / "core-identities.summary.json").exists()
        assert (tmp_path / "core-identities.png").exists()
        summary = json.loads((tmp_path / "core-identities.summary.json").read_text())
        assert summary["passed"] is True
        assert all(c["measured"] <= 1e-10 for c in summary["checks"])

    def test_missing_output_dir_is_an_error(self, tmp_path, capsys):
        code = run_cli(["run", "core-identities", "--p", "2"])
        assert code == 2
        assert "output_dir" in capsys.readouterr().err

    def test_unknown_experiment(self, capsys):
        code = run_cli(["run", "nonsense", "--out", "/tmp/x"])
        assert code == 2

    def test_config_file_with_flag_override(self, tmp_path, capsys):
        config = tmp_path / "config.json"
        config.write_text(
            json.dumps(
                {"experiment": "core-identities", "p": 2, "seed": 1, "budget": 100,
                 "output_dir": str(tmp_path / "from_config")}
            )
        )
        out_override = tmp_path / "flag_wins"
        code = run_cli(["run", "--config", str(config), "--out", str(out_override)])
        assert code == 0
        assert (out_override / "core-identities.summary.json").exists()
        assert not (tmp_path / "from_config").exists()

    def test_csv_byte_determinism(self, tmp_path, capsys):
        a = tmp_path / "a"
        b = tmp_path / "b"
        for out in (a, b):
            assert run_cli(
                ["run", "fourier-suite", "--p", "2", "--seed", "3", "--budget", "14",
                 "--out", str(out)]
            ) in (0, 1)
        assert (a / "fourier-suite.csv").read_bytes() == (b / "fourier-suite.csv").read_bytes()

    def test_console_entry_point(self, tmp_path):
        proc = subprocess.run(
            [sys.executable, "-m", "nilspec.cli", "list"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert "plancherel" in proc.stdout
