import json

import numpy as np
import pytest

from fockskin.cli import main, fmt, PRESETS


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def read_csv(text):
    lines = text.strip().split("\n")
    assert lines[0].startswith("# fockskin-csv v1 ")
    header = lines[1].split(",")
    rows = [line.split(",") for line in lines[2:]]
    return header, rows


class TestFmt:
    def test_round_trip(self):
        for x in (1 / 3, 0.18, 1e-300, -2.5):
            assert float(fmt(x)) == x

    def test_ints_and_bools(self):
        assert fmt(7) == "7"
        assert fmt(True) == "true"
        assert fmt(np.False_) == "false"


class TestSpectrum:
    def test_default_row_count(self, capsys):
        code, out = run(capsys, "spectrum", "--n-modes", "12")
        assert code == 0
        header, rows = read_csv(out)
        assert header == ["mode_n", "branch", "energy", "mean_n", "ipr"]
        assert len(rows) == 25  # zero mode + 12 pairs

    def test_preset_fig2(self, capsys, tmp_path):
        out_file = tmp_path / "spec.csv"
        code, _ = run(capsys, "spectrum", "--preset", "fig2", "--n-modes", "10",
                      "--out", str(out_file))
        assert code == 0
        header, rows = read_csv(out_file.read_text())
        energies = sorted(float(r[2]) for r in rows)
        assert energies[0] == pytest.approx(-np.sqrt(10))


class TestEigenstate:
    def test_three_cases_normalized(self, capsys):
        code, out = run(capsys, "eigenstate", "--j1", "1.5", "--mode-n", "0",
                        "--branch", "zero")
        assert code == 0
        _, rows = read_csv(out)
        for case in ("j3_0", "phi_plus", "phi_minus"):
            probs = [float(r[2]) for r in rows if r[0] == case]
            assert sum(probs) == pytest.approx(1.0, abs=1e-10)

    def test_rejects_bad_branch(self, capsys):
        with pytest.raises(SystemExit):
            main(["eigenstate", "--mode-n", "3", "--branch", "zero"])


class TestDynamics:
    def test_slices_normalized_and_summary(self, capsys, tmp_path):
        out_file = tmp_path / "dyn.csv"
        code, _ = run(capsys, "dynamics", "--preset", "fig5c",
                      "--initial-cell", "10", "--n-modes", "80",
                      "--t-end", "2", "--t-steps", "5", "--out", str(out_file))
        assert code == 0
        _, rows = read_csv(out_file.read_text())
        times = sorted({r[0] for r in rows})
        assert len(times) == 5
        for t in times:
            probs = [float(r[2]) for r in rows if r[0] == t]
            assert sum(probs) == pytest.approx(1.0, abs=1e-9)
        summary = (tmp_path / "dyn.summary.csv").read_text()
        header, srows = read_csv(summary)
        assert header == ["t", "norm", "survival"]
        assert len(srows) == 5
        assert float(srows[0][2]) == pytest.approx(1.0)


class TestUniform:
    def test_row_count_and_zero_modes(self, capsys):
        code, out = run(capsys, "uniform", "--j1", "0.6", "--n-cells", "100")
        assert code == 0
        _, rows = read_csv(out)
        assert len(rows) == 200
        zeros = [r for r in rows if abs(float(r[0])) < 1e-6]
        assert len(zeros) == 2

    def test_trivial_phase_has_no_zero_modes(self, capsys):
        _, out = run(capsys, "uniform", "--j1", "1.5", "--n-cells", "100")
        _, rows = read_csv(out)
        assert not [r for r in rows if abs(float(r[0])) < 1e-6]


class TestValidate:
    def test_deterministic_and_passing(self, capsys, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        code1, _ = run(capsys, "validate", "--n-modes", "30", "--out", str(a))
        code2, _ = run(capsys, "validate", "--n-modes", "30", "--out", str(b))
        assert code1 == code2 == 0
        assert a.read_bytes() == b.read_bytes()
        report = json.loads(a.read_text())
        assert report["pass"] is True
        assert all(c["pass"] for c in report["checks"])

    def test_forced_failure_exit_code(self, capsys, tmp_path):
        out_file = tmp_path / "fail.json"
        code, _ = run(capsys, "validate", "--n-modes", "30", "--n-max", "31",
                      "--out", str(out_file))
        assert code == 1
        assert json.loads(out_file.read_text())["pass"] is False


class TestIon:
    def test_report_and_exit_code(self, capsys):
        code, out = run(capsys, "ion", "--t-end", "5", "--t-steps", "100")
        report = json.loads(out)
        assert code == (0 if report["feasible"] else 1)
        assert report["lamb_dicke_cells"] == 40
        assert report["initial_cell"] == 10
        assert code == 0

    def test_infeasible_eta(self, capsys):
        code, out = run(capsys, "ion", "--eta", "0.3", "--t-end", "1",
                        "--t-steps", "20")
        assert code == 1
        assert json.loads(out)["feasible"] is False


class TestSweep:
    def test_grid_rows(self, capsys):
        code, out = run(capsys, "sweep", "--j1-list", "0.6,1.5",
                        "--j3-list", "0", "--phi-list", "0",
                        "--n-modes", "4")
        assert code == 0
        _, rows = read_csv(out)
        assert len(rows) == 2 * 9  # two j1 values, zero mode + 4 pairs each


class TestConfigPrecedence:
    def test_flags_beat_config_beat_preset(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"j1": 0.9, "n_modes": 6}))
        # preset fig2 sets j1=1.5; config overrides to 0.9; flag wins with 0.3
        _, out = run(capsys, "spectrum", "--preset", "fig2",
                     "--config", str(cfg), "--j1", "0.3")
        _, rows = read_csv(out)
        assert len(rows) == 13  # n_modes=6 from the config file
        # zero-mode mean position identifies j1 through beta = -j1/j2
        zero = [r for r in rows if r[1] == "zero"][0]
        assert float(zero[3]) == pytest.approx(0.09, abs=1e-6)

    def test_unknown_config_key_rejected(self, capsys, tmp_path):
        cfg = tmp_path / "bad.json"
        cfg.write_text(json.dumps({"nope": 1}))
        with pytest.raises(SystemExit, match="unknown config keys"):
            main(["spectrum", "--config", str(cfg)])

    def test_all_presets_resolve(self):
        assert set(PRESETS) == {"fig2", "fig3a", "fig3b", "fig3c", "fig3d",
                                "fig5a", "fig5b", "fig5c", "fig5d", "fig5e",
                                "fig5f"}


class TestFigures:
    def test_spectrum_figure_file(self, capsys, tmp_path):
        fig = tmp_path / "spec.png"
        code, _ = run(capsys, "spectrum", "--n-modes", "8",
                      "--out", str(tmp_path / "s.csv"), "--fig", str(fig))
        assert code == 0
        assert fig.stat().st_size > 0

    def test_uniform_figure_file(self, capsys, tmp_path):
        fig = tmp_path / "uni.png"
        code, _ = run(capsys, "uniform", "--n-cells", "30",
                      "--out", str(tmp_path / "u.csv"), "--fig", str(fig))
        assert code == 0
        assert fig.stat().st_size > 0
