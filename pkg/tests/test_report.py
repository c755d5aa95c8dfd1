import json

import pytest
from click.testing import CliRunner

from qsta.cli import main
from qsta.io_formats import read_sweep_csv
from qsta.report import calibration_figures, sweep_figures


class TestFigures:
    def test_sweep_figures_written(self, tmp_path):
        runner = CliRunner()
        csv_path = tmp_path / "sweep.csv"
        result = runner.invoke(main, [
            "sweep", "linear", "--tau-from", "320", "--tau-to", "352",
            "--tau-step", "16", "--detunings", "1e8,2e8", "--repeats", "3",
            "--out-csv", str(csv_path), "--figures", str(tmp_path / "figs"),
        ])
        assert result.exit_code == 0, result.output
        pngs = sorted((tmp_path / "figs").glob("*.png"))
        assert len(pngs) == 2  # one per detuning
        assert all(p.stat().st_size > 0 for p in pngs)

    def test_sweep_figures_from_rows(self, tmp_path):
        rows = [
            {
                "family": "nobie", "tau_samples": tau, "detuning_rad_s": 1e8,
                "repeat": i, "p0": 0.6 + 0.01 * i, "p0_exact": 0.61,
                "p0_adiabatic": 0.6, "p0_discrimination": 0.9,
                "origin": "simulated",
            }
            for tau in (320, 336) for i in range(3)
        ]
        paths = sweep_figures(rows, tmp_path / "out")
        assert len(paths) == 1
        assert paths[0].exists()

    def test_calibration_figures_written(self, tmp_path):
        runner = CliRunner()
        out = tmp_path / "cal.json"
        result = runner.invoke(main, [
            "calibrate", "--d-values", "0.2,0.4", "--repeats", "5",
            "--out", str(out), "--figures", str(tmp_path / "figs"),
        ])
        assert result.exit_code == 0, result.output
        pngs = sorted((tmp_path / "figs").glob("*.png"))
        # one Rabi panel per amplitude plus the selection panel
        assert len(pngs) == 3
        report = json.loads(out.read_text())
        more = calibration_figures(report, tmp_path / "again")
        assert all(p.exists() for p in more)
