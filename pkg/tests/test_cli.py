"""Config parsing, file formats, and command exit behavior."""

from __future__ import annotations

import subprocess
import sys

import numpy as np
import pytest

import rabiprobe as rp
from rabiprobe import cli


SMALL_CFG = """\
grid.probe_points = 41
grid.amp_points = 5
run.model = analytical
"""


def write_cfg(tmp_path, text, name="run.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


class TestConfig:
    def test_serialize_parse_round_trip(self):
        text = cli.serialize_config(cli.RunConfig())
        again = cli.serialize_config(cli.parse_config(text))
        assert again == text

    def test_round_trip_preserves_overrides(self):
        cfg = cli.parse_config(
            "system.kappa_mhz = 2.5\ndrive.xi_over_kappa = 0.2\n"
        )
        assert cfg.kappa_mhz == 2.5
        assert cfg.xi_over_kappa == 0.2
        reparsed = cli.parse_config(cli.serialize_config(cfg))
        assert reparsed == cfg

    def test_unknown_key_rejected(self):
        with pytest.raises(rp.ConfigError):
            cli.parse_config("system.coupling_mhz = 50\n")

    def test_duplicate_key_rejected(self):
        with pytest.raises(rp.ConfigError):
            cli.parse_config("system.kappa_mhz = 1\nsystem.kappa_mhz = 2\n")

    def test_conflicting_probe_amplitudes_rejected(self):
        with pytest.raises(rp.ConfigError):
            cli.parse_config(
                "drive.xi_over_kappa = 0.05\ndrive.xi_mhz = 0.05\n"
            )

    def test_malformed_line_rejected(self):
        with pytest.raises(rp.ConfigError):
            cli.parse_config("system.kappa_mhz\n")

    def test_bad_float_rejected(self):
        with pytest.raises(rp.ConfigError):
            cli.parse_config("system.kappa_mhz = fast\n")

    def test_comments_and_blanks_ignored(self):
        cfg = cli.parse_config("# comment\n\nsystem.kappa_mhz = 2.0\n")
        assert cfg.kappa_mhz == 2.0

    def test_build_params_converts_lab_units_once(self):
        params = cli.build_params(cli.RunConfig())
        assert params == rp.default_params()
        assert params.chi == rp.angular_from_mhz(4.1)

    def test_probe_amplitude_from_ratio_or_absolute(self):
        params = cli.build_params(cli.RunConfig())
        by_ratio = cli.build_xi(cli.parse_config("drive.xi_over_kappa = 0.1\n"),
                                params)
        assert by_ratio == pytest.approx(0.1 * params.kappa, rel=1e-12)
        by_mhz = cli.build_xi(cli.parse_config("drive.xi_mhz = 0.1\n"), params)
        assert by_mhz == pytest.approx(rp.angular_from_mhz(0.1), rel=1e-12)


class TestMapFiles:
    def test_csv_round_trip_bit_exact(self, tmp_path):
        probe = np.linspace(-3.0, 3.0, 11)
        axis = np.array([0.5, 1.5])
        amp = np.vstack([np.linspace(0.0, 1.0, 11),
                         np.linspace(1.0, 0.0, 11)])
        amp[1, 4] = np.nan
        path = str(tmp_path / "map.csv")
        grid = rp.SweepGrid(probe, rp.AxisKind.AMPLITUDE, axis)
        m = rp.TransmissionMap(grid=grid, model=rp.Model.ANALYTICAL,
                               amplitude=amp, xi=0.3, d_omega_q=0.0,
                               omega_rabi=1.0)
        cli.write_map_csv(path, m, cli.RunConfig())
        probe2, axis2, amp2 = cli.read_map_csv(path)
        np.testing.assert_array_equal(probe2, probe)
        np.testing.assert_array_equal(axis2, axis)
        np.testing.assert_array_equal(amp2, amp)

    def test_pgm_header_and_nan_handling(self, tmp_path):
        amp = np.array([[0.0, 0.5, 1.0], [np.nan, 2.0, -1.0]])
        grid = rp.SweepGrid(np.array([-1.0, 0.0, 1.0]),
                            rp.AxisKind.AMPLITUDE, np.array([0.5, 1.5]))
        m = rp.TransmissionMap(grid=grid, model=rp.Model.ANALYTICAL,
                               amplitude=amp, xi=0.3, d_omega_q=0.0,
                               omega_rabi=1.0)
        path = str(tmp_path / "map.pgm")
        cli.write_map_pgm(path, m)
        raw = (tmp_path / "map.pgm").read_bytes()
        header, rest = raw.split(b"\n", 1)
        assert header == b"P5"
        dims, rest = rest.split(b"\n", 1)
        assert dims == b"3 2"
        maxval, pixels = rest.split(b"\n", 1)
        assert maxval == b"255"
        px = np.frombuffer(pixels, dtype=np.uint8).reshape(2, 3)
        assert px[0, 0] == 0 and px[0, 2] == 255
        assert px[1, 0] == 0          # NaN renders black
        assert px[1, 1] == 255        # clipped from above
        assert px[1, 2] == 0          # clipped from below


class TestCommands:
    def test_unknown_flag_is_config_error(self, capsys):
        assert cli.main(["steady", "--frobnicate"]) == 1

    def test_unknown_config_key_exit_code(self, tmp_path):
        cfg = write_cfg(tmp_path, "system.nope = 1\n")
        assert cli.main(["steady", "--config", cfg]) == 1

    def test_steady_prints_state_and_writes_txt(self, tmp_path, capsys):
        out = str(tmp_path / "st")
        rc = cli.main(["steady", "--probe-detuning-mhz", "4.1",
                       "--out", out])
        assert rc == 0
        printed = capsys.readouterr().out
        assert "transmission = " in printed
        assert (tmp_path / "st.txt").read_text() == printed

    def test_steady_strategies_agree(self, capsys):
        assert cli.main(["steady", "--probe-detuning-mhz", "4.1"]) == 0
        newton = capsys.readouterr().out
        assert cli.main(["steady", "--probe-detuning-mhz", "4.1",
                        "--strategy", "time-evolution"]) == 0
        timedom = capsys.readouterr().out

        def grab(text, key):
            line = next(l for l in text.splitlines()
                        if l.startswith(key + " = "))
            return float(line.split("=")[1].split()[0])

        assert grab(newton, "transmission") == pytest.approx(
            grab(timedom, "transmission"), rel=1e-6)

    def test_sweep_drive_writes_readable_map(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path, SMALL_CFG)
        out = str(tmp_path / "sd")
        assert cli.main(["sweep-drive", "--config", cfg, "--out", out]) == 0
        probe, axis, amp = cli.read_map_csv(out + ".csv")
        assert amp.shape == (5, 41)
        assert axis.size == 5 and probe.size == 41
        assert np.nanmax(amp) <= 1.0 + 1e-3
        assert (tmp_path / "sd.pgm").exists()

    def test_sweep_detuning_writes_map(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path, SMALL_CFG + "grid.freq_points = 4\n")
        out = str(tmp_path / "fd")
        assert cli.main(["sweep-detuning", "--config", cfg,
                         "--out", out]) == 0
        probe, axis, amp = cli.read_map_csv(out + ".csv")
        assert amp.shape == (4, 41)

    def test_cuts_reports_classifications(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path, SMALL_CFG)
        out = str(tmp_path / "ct")
        rc = cli.main(["cuts", "--config", cfg,
                       "--omega-rabi-mhz", "0.157,4.71", "--out", out])
        assert rc == 0
        printed = capsys.readouterr().out
        assert "TwoPeaks" in printed
        assert "OnePeak" in printed
        assert (tmp_path / "ct.csv").exists()

    def test_omega2_writes_curve(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path, SMALL_CFG)
        out = str(tmp_path / "o2")
        rc = cli.main(["omega2", "--config", cfg,
                       "--xi-over-kappa", "0.05", "--out", out])
        assert rc == 0
        rows = (tmp_path / "o2.csv").read_text().strip().splitlines()
        assert rows[0].startswith("#")
        vals = rows[1].split(",")
        assert float(vals[0]) == 0.05
        assert 1.0 < float(vals[3]) < 3.0

    def test_omega2_unresolved_lines_exit_two(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path, SMALL_CFG + "system.chi_mhz = 0.4\n")
        rc = cli.main(["omega2", "--config", cfg, "--xi-over-kappa", "0.05"])
        assert rc == 2


def test_console_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "rabiprobe.cli", "steady",
         "--probe-detuning-mhz", "4.1"],
        capture_output=True, text=True, timeout=120,
    )
    assert proc.returncode == 0
    assert "transmission = " in proc.stdout
