import json

import pytest

from shgsteer.cli import SPECTRUM_COLUMNS, main


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestCritical:
    def test_reference_value(self, capsys):
        code, out, _ = run(["critical", "--gamma-a", "1", "--gamma-b", "1",
                            "--kappa", "0.01"], capsys)
        assert code == 0
        assert "critical_pump = 600" in out

    def test_second_reference(self, capsys):
        code, out, _ = run(["critical", "--gamma-b", "0.25"], capsys)
        assert code == 0
        assert "177.878118384471" in out

    def test_bad_value_exits_2(self, capsys):
        code, _, _ = run(["critical", "--gamma-a", "-1"], capsys)
        assert code == 2

    def test_missing_subcommand_exits_2(self, capsys):
        assert main([]) == 2


class TestSteady:
    def test_reference_point(self, capsys):
        code, out, _ = run(["steady", "--epsilon", "360"], capsys)
        assert code == 0
        assert "alpha_ss = 159.0033491715563" in out

    def test_pump_frac(self, capsys):
        code, out, _ = run(["steady", "--pump-frac", "0.6"], capsys)
        assert code == 0
        assert "epsilon  = 360" in out


class TestSpectrum:
    def test_csv_schema_and_summary(self, tmp_path, capsys):
        out_path = tmp_path / "scan.csv"
        code, _, _ = run(["spectrum", "--pump-frac", "0.6",
                          "--omega-points", "11", "--out", str(out_path)],
                         capsys)
        assert code == 0
        lines = out_path.read_text().splitlines()
        assert lines[0] == ",".join(SPECTRUM_COLUMNS)
        assert len(lines) == 12
        first = lines[1].split(",")
        assert first[0] == "-20"
        assert first[-1] in ("NoSteering", "OnlyBSteerable", "OnlyASteerable",
                             "Symmetric")
        summary = json.loads((tmp_path / "scan.csv.summary.json").read_text())
        assert summary["params"]["epsilon"] == 360.0
        assert summary["critical_pump"] == 600.0
        assert summary["stable"] is True
        assert summary["omega_grid"]["points"] == 11
        assert "resolved_config" in summary

    def test_json_format_round_trips(self, tmp_path, capsys):
        out_path = tmp_path / "scan.json"
        code, _, _ = run(["spectrum", "--pump-frac", "0.6", "--format", "json",
                          "--omega-points", "5", "--out", str(out_path)],
                         capsys)
        assert code == 0
        rows = json.loads(out_path.read_text())
        assert len(rows) == 5
        assert set(rows[0]) == set(SPECTRUM_COLUMNS)

    def test_reproducible_bytes(self, tmp_path, capsys):
        args = ["spectrum", "--pump-frac", "0.5", "--omega-points", "7"]
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        run(args + ["--out", str(a)], capsys)
        run(args + ["--out", str(b)], capsys)
        assert a.read_bytes() == b.read_bytes()

    def test_above_threshold_exits_3_without_output(self, tmp_path, capsys):
        out_path = tmp_path / "never.csv"
        code, _, err = run(["spectrum", "--pump-frac", "1.1",
                            "--out", str(out_path)], capsys)
        assert code == 3
        assert not out_path.exists()

    def test_config_file_with_flag_override(self, tmp_path, capsys):
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({"pump-frac": 0.6, "omega-points": 3,
                                   "gamma-b": 0.25}))
        out_path = tmp_path / "scan.csv"
        code, _, _ = run(["spectrum", "--config", str(cfg),
                          "--omega-points", "5", "--out", str(out_path)],
                         capsys)
        assert code == 0
        assert len(out_path.read_text().splitlines()) == 6
        summary = json.loads((tmp_path / "scan.csv.summary.json").read_text())
        assert summary["params"]["gamma_b"] == 0.25

    def test_unknown_config_key_exits_2(self, tmp_path, capsys):
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({"bogus": 1}))
        code, _, _ = run(["spectrum", "--config", str(cfg),
                          "--out", str(tmp_path / "x.csv")], capsys)
        assert code == 2


class TestAsymmetryMap:
    def test_single_cell(self, tmp_path, capsys):
        out_path = tmp_path / "map.csv"
        code, _, _ = run(["asymmetry-map",
                          "--ratio-min", "1.0", "--ratio-max", "1.0",
                          "--frac-min", "0.6", "--frac-max", "0.6",
                          "--omega-points", "21", "--out", str(out_path)],
                         capsys)
        assert code == 0
        lines = out_path.read_text().splitlines()
        assert lines[0] == ("gamma_ratio,pump_fraction,indicator,"
                            "min_epr_b_given_a,min_epr_a_given_b")
        assert len(lines) == 2
        assert lines[1].split(",")[2] in ("-1", "0", "1")
        summary = json.loads((tmp_path / "map.csv.summary.json").read_text())
        assert summary["omega_grid"]["points"] == 21
        assert summary["n_cells"] == 1


class TestValidate:
    def test_small_budget_passes(self, capsys):
        code, out, _ = run(["validate", "--pump-frac", "0.6",
                            "--n-trajectories", "150", "--t-sample", "40",
                            "--t-transient", "15", "--seed", "11"], capsys)
        assert "spectral-integral-vs-lyapunov" in out
        assert "[PASS]" in out
        assert code in (0, 5)

    def test_zero_pump_trivially_passes(self, capsys):
        code, out, _ = run(["validate", "--n-trajectories", "20",
                            "--t-sample", "5", "--t-transient", "1"], capsys)
        assert code == 0
        assert "validation passed" in out
