"""Command-line interface: outputs, exit codes, cleanup."""

import numpy as np
import pytest

from fimlfm import formats
from fimlfm.cli import main

SMALL = """\
waveform.fc = 1.0e9
waveform.Bw = 8e6
waveform.Tw = 40e-6
geometry.h = 2e3
geometry.v = 100.0
geometry.depression_deg = 60.0
acquisition.prf = 100.0
acquisition.n_pulses = 64
scene.target.T = 1154.7005, 32.0
seed = 3
"""


@pytest.fixture()
def small_cfg_file(tmp_path):
    p = tmp_path / "small.cfg"
    p.write_text(SMALL)
    return p


def test_waveform_command(small_cfg_file, tmp_path):
    out = tmp_path / "wf"
    assert main(["waveform", str(small_cfg_file), "-o", str(out)]) == 0
    m = formats.read_matrix(out / "waveform.bin")
    assert m.shape == (64, 400)
    assert (out / "waveform.bin.meta").is_file()
    assert (out / "spectrogram.pgm").is_file()
    meta = formats.read_meta(out / "waveform.bin.meta")
    assert float(meta["fs_hz"]) == 1e7


def test_ambiguity_cut_and_grid(small_cfg_file, tmp_path):
    cut_dir = tmp_path / "cut"
    assert main(["ambiguity", str(small_cfg_file), "--cut", "tau0", "-o", str(cut_dir)]) == 0
    assert (cut_dir / "ambiguity_cut.csv").is_file()
    assert (cut_dir / "ambiguity_cut.png").is_file()
    header = (cut_dir / "ambiguity_cut.csv").read_text().splitlines()[0]
    assert header == "doppler_hz,magnitude"

    grid_dir = tmp_path / "grid"
    assert main(["ambiguity", str(small_cfg_file), "-o", str(grid_dir)]) == 0
    for name in ("ambiguity.csv", "ambiguity.pgm", "ambiguity.png"):
        assert (grid_dir / name).is_file()

    num_dir = tmp_path / "num"
    assert main(["ambiguity", str(small_cfg_file), "--numeric", "--cut", "xi0",
                 "-o", str(num_dir)]) == 0
    header = (num_dir / "ambiguity_cut.csv").read_text().splitlines()[0]
    assert header == "delay_s,magnitude"


def test_sim_focus_metrics_chain(small_cfg_file, tmp_path):
    sim_dir = tmp_path / "sim"
    assert main(["sar-sim", str(small_cfg_file), "-o", str(sim_dir)]) == 0
    echo = formats.read_matrix(sim_dir / "echo.bin")
    assert echo.shape[0] == 64 * 4  # row k*M + m layout

    foc_dir = tmp_path / "foc"
    assert main(["sar-focus", str(small_cfg_file), "-o", str(foc_dir)]) == 0
    img = formats.read_matrix(foc_dir / "image.bin")
    assert img.shape[0] == 64
    meta = formats.read_meta(foc_dir / "image.bin.meta")
    assert meta["steps"] == "remove_qam,subpulse_compensate,rcmc,azimuth_compress"
    assert (foc_dir / "image.pgm").is_file()

    met_dir = tmp_path / "met"
    assert main(["metrics", str(foc_dir / "image.bin"), "--targets", str(small_cfg_file),
                 "--convention", "rect", "-o", str(met_dir)]) == 0
    lines = (met_dir / "report.csv").read_text().splitlines()
    assert lines[0].startswith("target,range_resolution_m")
    assert len(lines) == 2  # header + one target
    cells = lines[1].split(",")
    assert cells[0] == "T" and cells[-1] == "rect"
    assert float(cells[1]) > 0 and float(cells[2]) > 0
    assert (met_dir / "profiles.png").is_file()


def test_focus_skip_flags(small_cfg_file, tmp_path):
    out = tmp_path / "ab"
    assert main(["sar-focus", str(small_cfg_file), "--skip-qam-removal",
                 "--skip-compensation", "-o", str(out)]) == 0
    meta = formats.read_meta(out / "image.bin.meta")
    assert meta["steps"] == "fullband_compress,rcmc,azimuth_compress"


def test_comm_ber_command(small_cfg_file, tmp_path):
    out = tmp_path / "ber"
    assert main(["comm-ber", str(small_cfg_file), "--snr", "0,10", "--trials", "500",
                 "-o", str(out)]) == 0
    lines = (out / "ber.csv").read_text().splitlines()
    assert lines[0] == "snr_db,trials,index_errors,qam_errors,total_errors,index_ber,qam_ber,total_ber"
    assert len(lines) == 3
    assert (out / "ber.png").is_file()


def test_config_error_exits_2_and_cleans(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("waveform.fc = 1e9\n")  # missing Bw, Tw
    out = tmp_path / "o"
    assert main(["waveform", str(bad), "-o", str(out)]) == 2
    assert not list(out.glob("*")) if out.exists() else True


def test_runtime_error_exits_3_and_cleans(small_cfg_file, tmp_path):
    out = tmp_path / "o3"
    rc = main(["metrics", str(tmp_path / "absent.bin"), "--targets", str(small_cfg_file),
               "-o", str(out)])
    assert rc == 3
    assert not list(out.glob("*")) if out.exists() else True


def test_usage_errors_exit_2(small_cfg_file):
    with pytest.raises(SystemExit) as e:
        main(["ambiguity", str(small_cfg_file), "--closed-form", "--numeric"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(["no-such-command"])
    assert e.value.code == 2


def test_bad_snr_list_exits_2(small_cfg_file, tmp_path):
    assert main(["comm-ber", str(small_cfg_file), "--snr", "0,up,20", "--trials", "10",
                 "-o", str(tmp_path / "x")]) == 2


def test_repeated_run_bytes_identical(small_cfg_file, tmp_path):
    a, b = tmp_path / "r1", tmp_path / "r2"
    for out in (a, b):
        assert main(["sar-focus", str(small_cfg_file), "-o", str(out)]) == 0
    assert (a / "image.bin").read_bytes() == (b / "image.bin").read_bytes()
    assert (a / "image.pgm").read_bytes() == (b / "image.pgm").read_bytes()
