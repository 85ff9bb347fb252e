"""Tests for the command-line front end: flags, config files, CSV output,
exit codes, and byte-level determinism."""

import numpy as np
import pytest

from fdsic import cli
from fdsic.sweeps import SweepCellError, SweepConfig, SweepRow, run_rsi_sweep

HEADER = "n,k,metric_mean,metric_stderr,predicted,trials,noise_floor"


def _row(**kwargs):
    defaults = dict(
        n=2000, k=20, metric_mean=0.020212345678901, metric_stderr=4.5e-5,
        predicted=0.0202, trials=100, noise_floor=0.02,
    )
    defaults.update(kwargs)
    return SweepRow(**defaults)


class TestWriteCsv:
    def test_empty_rows_give_header_only(self, tmp_path):
        path = tmp_path / "empty.csv"
        cli.write_csv([], str(path))
        assert path.read_text() == HEADER + "\n"

    def test_single_row_layout(self, tmp_path):
        path = tmp_path / "one.csv"
        cli.write_csv([_row()], str(path))
        lines = path.read_text().splitlines()
        assert lines[0] == HEADER
        fields = lines[1].split(",")
        assert fields[0] == "2000" and fields[1] == "20" and fields[5] == "100"
        assert len(fields) == 7

    def test_final_line_is_newline_terminated(self, tmp_path):
        path = tmp_path / "nl.csv"
        cli.write_csv([_row()], str(path))
        assert path.read_bytes().endswith(b"\n")

    def test_round_trip_preserves_12_significant_digits(self, tmp_path):
        """Parsing the CSV reproduces each float at 12 significant digits."""
        rng = np.random.default_rng(3)
        rows = [
            _row(
                n=int(n), metric_mean=float(m), metric_stderr=float(s),
                predicted=float(p), noise_floor=float(f),
            )
            for n, m, s, p, f in zip(
                [100, 200, 300],
                rng.uniform(1e-8, 1e3, 3),
                rng.uniform(0, 1, 3),
                rng.uniform(1e-8, 1e3, 3),
                rng.uniform(1e-8, 1, 3),
            )
        ]
        path = tmp_path / "rt.csv"
        cli.write_csv(rows, str(path))
        for row, line in zip(rows, path.read_text().splitlines()[1:]):
            fields = line.split(",")
            for expected, text in zip(
                [row.metric_mean, row.metric_stderr, row.predicted, row.noise_floor],
                [fields[2], fields[3], fields[4], fields[6]],
            ):
                assert float(text) == float(format(expected, ".11e"))


class TestConfigFile:
    def test_values_parsed(self, tmp_path):
        path = tmp_path / "sweep.cfg"
        path.write_text(
            "# comment line\n"
            "n_values = 250, 500\n"
            "k_values = 5\n"
            "trials = 17\n"
            "modulation = qpsk\n"
            "sir_db = 12.5\n"
            "master_seed = 3  # trailing comment\n"
        )
        values = cli.load_config_file(str(path))
        assert values["n_values"] == (250, 500)
        assert values["k_values"] == (5,)
        assert values["trials"] == 17
        assert values["sir_db"] == 12.5
        assert values["master_seed"] == 3

    def test_unknown_key_names_offender(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text("n_valuez = 250\n")
        with pytest.raises(cli.ConfigError, match="n_valuez"):
            cli.load_config_file(str(path))

    def test_bad_value_names_key_and_domain(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text("trials = lots\n")
        with pytest.raises(cli.ConfigError, match="trials.*positive integer"):
            cli.load_config_file(str(path))

    def test_missing_file_is_config_error(self, tmp_path):
        with pytest.raises(cli.ConfigError):
            cli.load_config_file(str(tmp_path / "nope.cfg"))

    def test_flags_override_file_which_overrides_defaults(self, tmp_path, capsys):
        cfg = tmp_path / "sweep.cfg"
        cfg.write_text("n_values = 64\nk_values = 4\ntrials = 10\nmaster_seed = 5\n")
        out = tmp_path / "out.csv"
        code = cli.run(
            ["rsi-sweep", "--config", str(cfg), "--trials", "20", "--out", str(out)]
        )
        assert code == 0
        # file set n/k/seed; flag bumped trials to 20
        expected = run_rsi_sweep(
            SweepConfig(n_values=(64,), k_values=(4,), trials=20, master_seed=5)
        )
        line = out.read_text().splitlines()[1]
        assert line.split(",")[5] == "20"
        assert float(line.split(",")[2]) == float(format(expected[0].metric_mean, ".11e"))


class TestExitCodes:
    def test_unknown_flag_is_config_error(self, capsys):
        assert cli.run(["rsi-sweep", "--bogus", "--out", "x.csv"]) == 1
        assert "bogus" in capsys.readouterr().err

    def test_missing_out_is_config_error(self, capsys):
        assert cli.run(["rsi-sweep", "--k", "4"]) == 1
        assert "--out" in capsys.readouterr().err

    def test_mutually_exclusive_n_flags(self, capsys):
        assert cli.run(["rsi-sweep", "--n", "64", "--n-list", "64,128", "--out", "x.csv"]) == 1

    def test_invalid_grid_is_config_error(self, tmp_path, capsys):
        out = tmp_path / "x.csv"
        assert cli.run(["rsi-sweep", "--n", "8", "--k", "16", "--out", str(out)]) == 1
        assert "max" in capsys.readouterr().err

    def test_unwritable_output_is_io_error(self, capsys):
        code = cli.run(
            ["rsi-sweep", "--n", "64", "--k", "4", "--trials", "2",
             "--out", "/nonexistent-dir/r.csv"]
        )
        assert code == 2
        assert "No such file" in capsys.readouterr().err

    def test_numerical_failure_names_cell(self, tmp_path, capsys, monkeypatch):
        def boom(cfg):
            raise SweepCellError(2000, 20, 3, ValueError("Gram blew up"))

        monkeypatch.setitem(cli._SWEEP_RUNNERS, "trace-sweep", boom)
        code = cli.run(["trace-sweep", "--n", "2000", "--k", "20", "--out", str(tmp_path / "t.csv")])
        assert code == 2
        err = capsys.readouterr().err
        assert "n=2000" in err and "k=20" in err and "trial=3" in err


class TestSweepCommands:
    def test_byte_identical_reruns(self, tmp_path):
        """Same argv (including seed) twice gives the same bytes."""
        args = ["rsi-sweep", "--k", "4", "--n-list", "64,128", "--trials", "25", "--seed", "7"]
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert cli.run(args + ["--out", str(a)]) == 0
        assert cli.run(args + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_seed_changes_output(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        cli.run(["mse-sweep", "--k", "4", "--n", "64", "--trials", "10", "--seed", "1", "--out", str(a)])
        cli.run(["mse-sweep", "--k", "4", "--n", "64", "--trials", "10", "--seed", "2", "--out", str(b)])
        assert a.read_bytes() != b.read_bytes()

    def test_trace_sweep_writes_expected_rows(self, tmp_path, capsys):
        out = tmp_path / "t.csv"
        assert cli.run(["trace-sweep", "--k", "1", "--n-list", "50,100", "--trials", "5",
                        "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 3
        assert float(lines[1].split(",")[2]) == pytest.approx(1 / 50, rel=1e-12)
        assert "wrote 2 rows" in capsys.readouterr().out


class TestEstimateCommand:
    def test_prints_mse_and_taps(self, capsys):
        assert cli.run(["estimate", "--n", "500", "--k", "4", "--seed", "1"]) == 0
        out = capsys.readouterr().out
        assert "empirical MSE" in out
        assert out.count("\n") >= 5 + 4  # summary lines plus one line per tap

    def test_zero_noise_gives_zero_mse(self, capsys):
        assert cli.run(["estimate", "--n", "500", "--k", "4", "--seed", "1",
                        "--sigma-w2", "0"]) == 0
        out = capsys.readouterr().out
        mse = float(next(l for l in out.splitlines() if "empirical MSE" in l).split(":")[1])
        assert mse < 1e-20

    def test_underdetermined_is_config_error(self, capsys):
        assert cli.run(["estimate", "--n", "4", "--k", "8"]) == 1

    def test_negative_sigma_w2_is_config_error(self, capsys):
        assert cli.run(["estimate", "--sigma-w2", "-1"]) == 1
        assert "sigma_w2" in capsys.readouterr().err


class TestThresholdCommand:
    def test_reference_threshold(self, capsys):
        assert cli.run(["threshold", "--k", "20", "--sir-db", "10", "--snr-db", "20"]) == 0
        out = capsys.readouterr().out
        assert "N0 = 2021" in out
        assert "2020" in out  # the crossing point just above the floor

    def test_requires_k(self, capsys):
        assert cli.run(["threshold"]) == 1
