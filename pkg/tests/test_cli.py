"""Command-line surface: CSV writers, exit codes, determinism."""

import io
import math

import numpy as np
import pytest

from spacing_lab import cli, fredholm
from spacing_lab.cli import RunConfig, main, write_primes, write_sample, write_tabulate


def _tabulate_config(**overrides):
    base = dict(command="tabulate", quantity="E2", method="all",
                s_min=0.0, s_max=1.0, s_step=0.25)
    base.update(overrides)
    return RunConfig(**base)


class TestTabulate:
    def test_csv_shape_and_agreement(self):
        out = io.StringIO()
        table, deviations = write_tabulate(_tabulate_config(), out)
        lines = out.getvalue().splitlines()
        meta = [l for l in lines if l.startswith("#")]
        assert any(l.startswith("# command: spacing-lab tabulate") for l in meta)
        assert any(l.startswith("# package: spacing-lab") for l in meta)
        header = next(l for l in lines if not l.startswith("#"))
        assert header == "s,E2_fredholm,E2_painleve"
        assert deviations[("fredholm", "painleve")] <= 1e-6
        assert len(table.s_grid) == 5

    def test_round_trip_bit_exact(self):
        out = io.StringIO()
        write_tabulate(_tabulate_config(), out)
        text = out.getvalue()
        parsed = fredholm.SpacingTable.from_csv(io.StringIO(text))
        assert parsed.to_csv_text() == text

    def test_repeat_runs_identical(self):
        first, second = io.StringIO(), io.StringIO()
        write_tabulate(_tabulate_config(), first)
        write_tabulate(_tabulate_config(), second)
        assert first.getvalue() == second.getvalue()

    def test_thread_count_invisible(self, monkeypatch):
        monkeypatch.setenv("SPACING_LAB_THREADS", "1")
        serial = io.StringIO()
        write_tabulate(_tabulate_config(), serial)
        monkeypatch.setenv("SPACING_LAB_THREADS", "3")
        threaded = io.StringIO()
        write_tabulate(_tabulate_config(), threaded)
        assert serial.getvalue() == threaded.getvalue()

    def test_surmise_column(self):
        out = io.StringIO()
        config = _tabulate_config(quantity="p0", method="surmise", beta=2)
        write_tabulate(config, out)
        header = next(l for l in out.getvalue().splitlines()
                      if not l.startswith("#"))
        assert header == "s,p0_surmise"

    def test_gap_count_column(self):
        out = io.StringIO()
        config = _tabulate_config(quantity="En", method="fredholm", n=2,
                                  s_max=0.5)
        table, _ = write_tabulate(config, out)
        column = table.columns["En_fredholm"]
        assert column[0] == 0.0            # no room for 2 eigenvalues at s=0
        assert np.all(column >= 0.0)

    def test_grid_validation(self):
        with pytest.raises(Exception):
            write_tabulate(_tabulate_config(s_step=0.0), io.StringIO())
        with pytest.raises(Exception):
            write_tabulate(_tabulate_config(s_min=-1.0), io.StringIO())


class TestSample:
    def test_csv_columns_and_seed(self):
        out = io.StringIO()
        config = RunConfig(command="sample", n=13, reps=64, seed=7)
        write_sample(config, out)
        lines = out.getvalue().splitlines()
        assert "# seed: 7" in lines
        header = next(l for l in lines if not l.startswith("#"))
        assert header == "bin_left,bin_right,count,density,exact,surmise"

    def test_deterministic(self):
        config = RunConfig(command="sample", n=13, reps=64, seed=7)
        first, second = io.StringIO(), io.StringIO()
        write_sample(config, first)
        write_sample(config, second)
        assert first.getvalue() == second.getvalue()

    def test_even_rank_rejected(self):
        config = RunConfig(command="sample", n=12, reps=10, seed=1)
        with pytest.raises(Exception):
            write_sample(config, io.StringIO())


class TestPrimes:
    def test_histogram_output(self):
        out = io.StringIO()
        config = RunConfig(command="primes", start=10**9 + 7, count=200)
        write_primes(config, out)
        lines = out.getvalue().splitlines()
        header = next(l for l in lines if not l.startswith("#"))
        assert header == "bin_left,bin_right,count,density,poisson"

    def test_raw_listing(self):
        out = io.StringIO()
        config = RunConfig(command="primes", start=10, count=3, raw=True)
        write_primes(config, out)
        body = [l for l in out.getvalue().splitlines()
                if not l.startswith("#")]
        assert body == ["index,prime,gap", "0,11,2", "1,13,4", "2,17,0"]


class TestZeros:
    @pytest.fixture()
    def zeros_file(self, tmp_path):
        # ordinates positioned exactly at the smooth counting function's
        # unit-spacing targets; plumbing test only, no statistics claimed
        path = tmp_path / "zeros.txt"
        lines = []
        for u in np.arange(5.0, 205.0):
            g = 40.0
            for _ in range(60):
                w = g / (2.0 * math.pi)
                g -= (w * (math.log(w) - 1.0) + 0.875 - u) \
                    / (math.log(w) / (2.0 * math.pi))
            lines.append(f"{g:.12f}")
        path.write_text("\n".join(lines) + "\n")
        return str(path)

    def test_csv_output(self, zeros_file):
        out = io.StringIO()
        config = RunConfig(command="zeros", zeros_path=zeros_file)
        cli.write_zeros(config, out)
        lines = out.getvalue().splitlines()
        assert "# ordinates: 200" in lines
        assert any(l.startswith("# ks_exact: ") for l in lines)
        assert any(l.startswith("# ks_poisson: ") for l in lines)
        header = next(l for l in lines if not l.startswith("#"))
        assert header == "bin_left,bin_right,count,density,exact,poisson"


class TestMainExitCodes:
    def test_usage_error_for_unsupported_combination(self, capsys):
        code = main(["tabulate", "--quantity", "En", "--n", "2",
                     "--method", "painleve"])
        assert code == 2
        assert "usage error" in capsys.readouterr().err

    def test_missing_zeros_file(self, capsys, tmp_path):
        code = main(["zeros", "--file", str(tmp_path / "absent.txt")])
        assert code == 3
        assert "error" in capsys.readouterr().err

    def test_invalid_beta_rejected_by_parser(self):
        with pytest.raises(SystemExit) as excinfo:
            main(["tabulate", "--quantity", "p0", "--beta", "3"])
        assert excinfo.value.code == 2

    def test_invalid_thread_env(self, monkeypatch, capsys):
        monkeypatch.setenv("SPACING_LAB_THREADS", "many")
        code = main(["tabulate", "--quantity", "E2", "--s-max", "0.5",
                     "--s-step", "0.25"])
        assert code == 2

    def test_tabulate_to_file(self, tmp_path, capsys):
        target = tmp_path / "table.csv"
        code = main(["tabulate", "--quantity", "E2", "--s-max", "0.5",
                     "--s-step", "0.25", "-o", str(target)])
        assert code == 0
        assert target.read_text().startswith("#")
        assert "max |E2_fredholm - E2_painleve|" in capsys.readouterr().err

    def test_verify_single_criterion(self, capsys):
        code = main(["verify", "--only", "surmise_accuracy"])
        assert code == 0
        out = capsys.readouterr().out
        assert "[PASS] surmise-accuracy" in out
        assert "1/1 criteria passed" in out

    def test_verify_unknown_criterion(self, capsys):
        code = main(["verify", "--only", "bogus_name"])
        assert code == 2
