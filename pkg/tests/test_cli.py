"""
Tests for the chi2cav command-line interface: configuration, tables and commands.
"""
import csv
import io
import json

import pytest

from chi2cav import ConfigError
from chi2cav.cli import load_config, parse_config, run_checks, worker_count
from chi2cav.cli.__main__ import main
from chi2cav.cli.tables import Table, format_value
import numpy as np

from chi2cav.cli.verify import (
    CheckStatus,
    VerifyReport,
    _sample_steady_states,
    check_balanced_rates,
    check_conservation,
    check_eq5_eq6,
)
from chi2cav.dynamics import Branch

REF1_THRESHOLD = 3.7345e-5


def read_csv(text):
    """Rows of a CSV table as dicts, comment lines skipped."""
    lines = [line for line in text.splitlines() if not line.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


class TestConfig:
    """Loading and validating run configurations."""

    def test_load_ref1(self, config_file):
        """A minimal configuration loads with defaults."""
        run_config = load_config(config_file())
        assert run_config.gamma1 == 1e7
        assert run_config.solver.tol == 1e-10
        assert run_config.cascade.order == 2
        assert run_config.cavity().eta == 1.0

    def test_unknown_key_named(self, config_file):
        """Unknown keys are rejected by name."""
        with pytest.raises(ConfigError, match="mu3"):
            load_config(config_file(mu3=1.0))

    def test_coupler_rule_names_both_keys(self, config_file):
        """gamma1_c above gamma1 names both keys."""
        with pytest.raises(ConfigError, match="gamma1_c.*gamma1"):
            load_config(config_file(gamma1_c=2e7))

    def test_missing_key_named(self, ref1_config_dict):
        """Required rates must be present."""
        data = dict(ref1_config_dict)
        del data["mu2"]
        with pytest.raises(ConfigError, match="mu2"):
            parse_config(data)

    def test_negative_rate_named(self, config_file):
        """Rates must be positive."""
        with pytest.raises(ConfigError, match="gamma_s"):
            load_config(config_file(gamma_s=-1.0))

    def test_bad_json(self, tmp_path):
        """Unparseable files raise ConfigError."""
        path = tmp_path / "broken.json"
        path.write_text("{gamma1: ", encoding="utf-8")
        with pytest.raises(ConfigError, match="cannot parse"):
            load_config(path)

    def test_missing_file(self, tmp_path):
        """Unreadable files raise ConfigError."""
        with pytest.raises(ConfigError, match="cannot read"):
            load_config(tmp_path / "absent.json")

    def test_sweep_section_validated(self, config_file):
        """sweep.stop must not be below sweep.start."""
        with pytest.raises(ConfigError, match="sweep"):
            load_config(config_file(sweep={"start": 1e-4, "stop": 1e-5, "steps": 3}))

    def test_threads_from_environment(self, monkeypatch):
        """CHI2CAV_THREADS caps sweep threads; the flag wins."""
        monkeypatch.setenv("CHI2CAV_THREADS", "3")
        assert worker_count() == 3
        assert worker_count(5) == 5
        monkeypatch.setenv("CHI2CAV_THREADS", "many")
        assert worker_count() >= 1

    def test_zero_threads_rejected(self, monkeypatch):
        """An explicit zero is an error, not a request for the default."""
        monkeypatch.setenv("CHI2CAV_THREADS", "3")
        with pytest.raises(ConfigError, match="threads"):
            worker_count(0)


class TestTables:
    """CSV and JSON emission."""

    def test_float_format(self):
        """Scientific notation with 15 significant digits."""
        assert format_value(3.7345e-5) == "3.73450000000000e-05"
        assert float(format_value(1.0 / 3.0)) == pytest.approx(1.0 / 3.0, rel=1e-14)

    def test_csv_layout(self):
        """Header row, LF endings, notes as comment lines."""
        table = Table(columns=("a", "b"))
        table.add(1.0, "x")
        table.notes["minimum"] = {"a": 2.0}
        text = table.to_csv()
        assert text.splitlines()[0] == "a,b"
        assert "\r" not in text
        assert text.endswith("# minimum: a=2.00000000000000e+00\n")

    def test_json_nan_is_null(self):
        """Non-finite values become null in JSON."""
        table = Table(columns=("a",))
        table.add(float("nan"))
        assert json.loads(table.to_json())["rows"] == [{"a": None}]

    def test_row_width_checked(self):
        """Rows must match the column count."""
        with pytest.raises(ValueError):
            Table(columns=("a", "b")).add(1.0)


class TestCommands:
    """End-to-end subcommands."""

    def test_threshold(self, config_file, capsys):
        """threshold reports the REF1 threshold, clamp and efficiency."""
        assert main(["threshold", "--config", str(config_file())]) == 0
        (row,) = read_csv(capsys.readouterr().out)
        assert float(row["p1_thr_w"]) == pytest.approx(REF1_THRESHOLD, rel=1e-4)
        assert float(row["clamped_p2_w"]) == pytest.approx(REF1_THRESHOLD, rel=1e-4)
        assert float(row["efficiency_at_threshold"]) == pytest.approx(1.0, rel=1e-12)
        p1_thr = float(row["p1_thr_w"])
        assert float(row["impedance_matching_w"]) == pytest.approx(p1_thr, rel=1e-12)
        assert float(row["p1_thr_numeric_w"]) == pytest.approx(p1_thr, rel=1e-8)
        assert row["mode"] == "zero_detuning"

    def test_threshold_detuned(self, config_file, capsys):
        """--detuned applies the effective-decay substitution."""
        path = config_file(delta_s=1e7, delta_i=1e7)
        assert main(["threshold", "--config", str(path), "--detuned"]) == 0
        (row,) = read_csv(capsys.readouterr().out)
        assert row["mode"] == "effective_decay_substitution"
        ratio = float(row["p1_thr_w"]) / REF1_THRESHOLD
        assert ratio == pytest.approx(2.0607, rel=1e-3)
        assert row["impedance_matching_w"] == "nan"

    def test_steady_analytic(self, config_file, capsys):
        """steady --analytic at twice threshold gives the clamped state."""
        path = config_file()
        power = str(2 * 3.734451e-5)
        args = ["steady", "--config", str(path), "--power", power, "--analytic"]
        assert main(args) == 0
        (row,) = read_csv(capsys.readouterr().out)
        assert row["branch"] == "ndopo"
        assert float(row["sh_flux"]) == pytest.approx(1e14, rel=1e-4)
        assert float(row["conservation_residual"]) < 1e-9
        assert float(row["max_re_eigenvalue"]) < 0.0

    def test_steady_numeric_from_config_power(self, config_file, capsys):
        """steady takes pump_power from the config when --power is absent."""
        assert main(["steady", "--config", str(config_file(pump_power=1e-5))]) == 0
        (row,) = read_csv(capsys.readouterr().out)
        assert row["branch"] == "trivial"
        alpha1 = complex(float(row["alpha1_re"]), float(row["alpha1_im"]))
        assert abs(float(row["alpha_s_re"])) < 1e-6 * abs(alpha1)

    def test_steady_needs_power(self, config_file):
        """Without a power the command is a configuration error."""
        assert main(["steady", "--config", str(config_file())]) == 2

    def test_clamp_curve(self, config_file, capsys):
        """The curve rises then clamps."""
        args = ["clamp-curve", "--config", str(config_file())]
        args += ["--pmin", "0", "--pmax", "2e-4", "--steps", "9"]
        assert main(args) == 0
        rows = read_csv(capsys.readouterr().out)
        assert len(rows) == 9
        assert rows[0]["regime"] == "below"
        assert rows[-1]["regime"] == "clamped"
        assert float(rows[-1]["p2_w"]) == pytest.approx(REF1_THRESHOLD, rel=1e-4)

    def test_clamp_curve_without_competition(self, config_file, capsys):
        """--no-competition keeps the doubler branch."""
        args = ["clamp-curve", "--config", str(config_file())]
        args += ["--pmin", "1e-5", "--pmax", "2e-4", "--steps", "5"]
        args += ["--spacing", "log", "--no-competition"]
        assert main(args) == 0
        rows = read_csv(capsys.readouterr().out)
        assert all(r["regime"] == "below" for r in rows)
        assert float(rows[-1]["p2_w"]) > REF1_THRESHOLD

    def test_clamp_curve_from_sweep_section(self, config_file, capsys):
        """The sweep section supplies the grid."""
        path = config_file(sweep={"start": 0.0, "stop": 1e-4, "steps": 4})
        assert main(["clamp-curve", "--config", str(path), "--format", "json"]) == 0
        document = json.loads(capsys.readouterr().out)
        assert document["columns"] == ["p1_w", "p2_w", "efficiency", "regime"]
        assert len(document["rows"]) == 4

    def test_spectrum_eq6(self, config_file, capsys):
        """eq6 at N=3 reports its minimum in the footer."""
        args = ["spectrum", "--config", str(config_file()), "--model", "eq6"]
        args += ["--n", "3", "--omega-max", "20", "--points", "401"]
        assert main(args) == 0
        out = capsys.readouterr().out
        rows = read_csv(out)
        assert len(rows) == 401
        assert list(rows[0]) == ["omega_hat", "f_hz", "v2", "v2_db"]
        footer = [line for line in out.splitlines() if line.startswith("# minimum:")]
        assert len(footer) == 1
        items = footer[0][len("# minimum: ") :].split(",")
        fields = dict(item.split("=") for item in items)
        assert float(fields["omega_hat"]) == pytest.approx(3.238, abs=1e-3)
        assert float(fields["v2"]) == pytest.approx(0.9622, abs=1e-3)

    def test_spectrum_eq4(self, config_file, capsys):
        """eq4 uses omega in rad/s."""
        args = ["spectrum", "--config", str(config_file()), "--model", "eq4"]
        args += ["--n", "0.5", "--points", "11"]
        assert main(args) == 0
        rows = read_csv(capsys.readouterr().out)
        assert list(rows[0]) == ["omega_rad_s", "f_hz", "v2", "v2_db"]
        assert float(rows[0]["v2"]) < 1.0

    def test_spectrum_eq5_below_threshold_rejected(self, config_file):
        """eq5 needs N > 1."""
        args = ["spectrum", "--config", str(config_file())]
        args += ["--model", "eq5", "--n", "1"]
        assert main(args) == 2

    def test_cascade(self, config_file, capsys):
        """Order 2 gives five infrared and nine visible lines."""
        args = ["cascade", "--config", str(config_file())]
        assert main(args + ["--delta", "8.2e12", "--order", "2"]) == 0
        rows = read_csv(capsys.readouterr().out)
        assert [r["band"] for r in rows].count("ir") == 5
        assert [r["band"] for r in rows].count("vis") == 9
        centre = next(r for r in rows if r["band"] == "ir" and r["order_k"] == "0")
        assert float(centre["wavelength_nm"]) == pytest.approx(1063.85, abs=0.1)

    def test_cascade_needs_delta(self, config_file):
        """Without an offset the command is a configuration error."""
        assert main(["cascade", "--config", str(config_file())]) == 2

    @pytest.mark.parametrize(
        "extra",
        [
            "spectrum --model eq6 --n 3 --points 0".split(),
            "spectrum --model eq6 --n 3 --omega-max 0".split(),
            "spectrum --model eq6 --n 0".split(),
            "cascade --delta 8.2e12 --order 0".split(),
            "clamp-curve --pmin 0 --pmax 1e-4 --steps 3 --threads 0".split(),
        ],
    )
    def test_zero_flag_not_replaced_by_default(self, config_file, extra):
        """A flag given as zero is validated, not swapped for the configured value."""
        command, *rest = extra
        assert main([command, "--config", str(config_file()), *rest]) == 2

    def test_zero_seed_reaches_checks(self, config_file, monkeypatch):
        """--seed 0 is passed through unchanged."""
        seen = []

        def fake_run_checks(config, seed):
            seen.append(seed)
            return VerifyReport()

        monkeypatch.setattr("chi2cav.cli.verify.run_checks", fake_run_checks)
        assert main(["verify", "--config", str(config_file()), "--seed", "0"]) == 0
        assert seen == [0]

    def test_bad_config_exit_code(self, config_file):
        """Invalid configurations exit with 2."""
        assert main(["threshold", "--config", str(config_file(gamma1=-1.0))]) == 2

    def test_output_is_deterministic(self, config_file, tmp_path):
        """Two runs produce byte-identical files."""
        path = config_file()
        outputs = []
        for name in ("first.csv", "second.csv"):
            target = tmp_path / name
            args = ["clamp-curve", "--config", str(path), "--pmin", "0"]
            args += ["--pmax", "1e-4", "--steps", "7", "--threads", "3"]
            args += ["--output", str(target)]
            assert main(args) == 0
            outputs.append(target.read_bytes())
        assert outputs[0] == outputs[1]
        assert b"\r\n" not in outputs[0]

    def test_csv_round_trip(self, config_file, tmp_path):
        """Emitted numbers reload at 12 or more significant digits."""
        target = tmp_path / "threshold.csv"
        args = ["threshold", "--config", str(config_file()), "--output", str(target)]
        assert main(args) == 0
        (row,) = read_csv(target.read_text(encoding="utf-8"))
        reloaded = float(row["p1_min_w"])
        assert format_value(reloaded) == row["p1_min_w"]


class TestVerify:
    """Self-verification suite."""

    def test_eq5_eq6_item_never_fails(self, ref1):
        """The dual-evaluation item passes or is flagged, never failed."""
        result = check_eq5_eq6(ref1)
        assert result.status in (CheckStatus.PASS, CheckStatus.DOCUMENTED_DISCREPANCY)
        assert "(V5-1)/(V6-1)" in result.detail

    def test_ref1_passes(self, ref1):
        """Every check passes on REF1."""
        report = run_checks(ref1, seed=1)
        failed = [c.name for c in report.checks if c.status is CheckStatus.FAIL]
        assert report.passed, f"failed checks: {failed}"
        assert len(report.checks) == 11
        document = json.loads(report.to_json())
        assert document["overall"] == "pass"
        assert "seconds" not in document["checks"][0]

    def test_steady_state_sweep_is_numeric(self, ref1):
        """Random configurations and powers converge and reach the competing branch."""
        samples = _sample_steady_states(ref1, np.random.default_rng(3), count=40)
        assert len(samples) >= 38
        assert any(report.branch is Branch.NDOPO for _, report in samples)
        assert len({cfg.gamma1 for cfg, _ in samples}) == len(samples)
        assert check_conservation(samples, attempted=40).status is CheckStatus.PASS
        assert check_balanced_rates(samples).status is CheckStatus.PASS

    def test_conservation_fails_when_too_few_converge(self, ref1):
        """Losing more than five percent of the sweep fails the item."""
        samples = _sample_steady_states(ref1, np.random.default_rng(3), count=10)
        assert check_conservation(samples[:9], attempted=10).status is CheckStatus.FAIL


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
