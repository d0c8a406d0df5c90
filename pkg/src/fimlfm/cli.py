"""Command-line entry points.

Every command takes a run-configuration file and writes fixed-name output
files into the config's output directory (``-o`` overrides).  All outputs
are pure functions of (config, seed): rerunning a command reproduces each
file byte for byte.  Exit status: 0 on success, 2 for configuration
problems, 3 for runtime failures; on failure partially written outputs
are removed.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import figures, formats
from .ambiguity import (
    ambiguity_numeric,
    doppler_cut_closed_form,
    principal_closed_form,
    range_cut_closed_form,
)
from .comm import run_ber
from .config import ConfigError, RunConfig, build_frame, parse_config
from .echo import simulate_echo
from .imaging import SarImage, focus_rda
from .metrics import REPORT_COLUMNS, extract_profiles, report_row, report_target
from .waveform import synthesize_pulse, synthesize_train

_GRID_POINTS = 401  # ambiguity sampling per axis; Doppler step stays <= 1 kHz


class _Outputs:
    """Collects written paths so a failing command can clean up."""

    def __init__(self, directory: Path):
        self.directory = directory
        self.paths: list[Path] = []

    def path(self, name: str) -> Path:
        p = self.directory / name
        self.paths.append(p)
        return p

    def discard(self) -> None:
        for p in self.paths:
            p.unlink(missing_ok=True)
            Path(str(p) + ".meta").unlink(missing_ok=True)


def _require_scene(run: RunConfig) -> None:
    if not run.scene:
        raise ConfigError("scene: at least one scene.target.<ID> entry is required")


def _matrix_meta(run: RunConfig) -> dict[str, object]:
    return {
        "fc_hz": run.waveform.fc,
        "Bw_hz": run.waveform.Bw,
        "Tw_s": run.waveform.Tw,
        "M": run.waveform.M,
        "J": run.waveform.J,
        "fs_hz": run.params.fs,
        "seed": run.seed,
    }


def cmd_waveform(run: RunConfig, out: _Outputs) -> None:
    frame = build_frame(run)
    pulses, starts = synthesize_train(run.waveform, run.params, frame, run.acquisition.prf)
    meta = _matrix_meta(run)
    meta.update(n_pulses=frame.n_pulses, prf_hz=run.acquisition.prf,
                pulse_start_step_s=float(starts[1] - starts[0]) if len(starts) > 1 else 0.0,
                layout="rows are pulses, cols are intra-pulse samples at fs_hz")
    formats.write_matrix(out.path("waveform.bin"), pulses, meta)

    from scipy.signal import spectrogram

    nper = min(256, run.params.Ns)
    _, _, sxx = spectrogram(
        pulses[0], fs=run.params.fs, nperseg=nper, noverlap=nper // 2,
        return_onesided=False, detrend=False,
    )
    # rows top-down from highest to lowest frequency, time along columns
    formats.write_pgm(out.path("spectrogram.pgm"), np.sqrt(np.fft.fftshift(sxx, axes=0))[::-1])


def cmd_ambiguity(run: RunConfig, out: _Outputs, mode: str, cut: str | None) -> None:
    params = run.params
    frame = build_frame(run, n_pulses=1)
    indices = frame.pulse(0)[0]
    doppler = np.linspace(-2.0 / params.Ts, 2.0 / params.Ts, _GRID_POINTS)

    if mode == "numeric":
        signal = synthesize_pulse(run.waveform, params, indices)
        step = max(1, (params.Ns - 1) // (_GRID_POINTS // 2))
        delay_samples = np.arange(-(params.Ns - 1), params.Ns, step)
        delays = delay_samples / params.fs
        if cut == "tau0":
            grid = ambiguity_numeric(signal, params, np.array([0]), doppler)
            values = grid.magnitude[0]
        elif cut == "xi0":
            grid = ambiguity_numeric(signal, params, delay_samples, np.array([0.0]))
            values = grid.magnitude[:, 0]
        else:
            grid = ambiguity_numeric(signal, params, delay_samples, doppler)
    else:
        # principal term valid only strictly inside |tau| < Ts
        delays = np.linspace(-params.Ts, params.Ts, _GRID_POINTS + 2)[1:-1]
        if cut == "tau0":
            values = doppler_cut_closed_form(params, doppler)
        elif cut == "xi0":
            values = range_cut_closed_form(params, indices, delays)
        else:
            grid = principal_closed_form(params, indices, delays, doppler)

    if cut == "tau0":
        formats.write_csv(out.path("ambiguity_cut.csv"), ["doppler_hz", "magnitude"],
                          zip(doppler, values))
        figures.ambiguity_cut_figure(out.path("ambiguity_cut.png"), doppler * 1e-3, values,
                                     "Doppler (kHz)", f"zero-delay cut ({mode})")
        return
    if cut == "xi0":
        formats.write_csv(out.path("ambiguity_cut.csv"), ["delay_s", "magnitude"],
                          zip(delays, values))
        figures.ambiguity_cut_figure(out.path("ambiguity_cut.png"), delays * 1e6, values,
                                     "delay (us)", f"zero-Doppler cut ({mode})")
        return

    rows = (
        (grid.delays_s[i], grid.doppler_hz[j], grid.magnitude[i, j])
        for i in range(len(grid.delays_s))
        for j in range(len(grid.doppler_hz))
    )
    formats.write_csv(out.path("ambiguity.csv"), ["delay_s", "doppler_hz", "magnitude"], rows)
    formats.write_pgm(out.path("ambiguity.pgm"), grid.magnitude.T)
    figures.ambiguity_surface_figure(out.path("ambiguity.png"), grid)


def _simulate(run: RunConfig):
    _require_scene(run)
    frame = build_frame(run)
    cube = simulate_echo(run.waveform, run.params, run.geometry, list(run.scene),
                         frame, run.acquisition)
    return frame, cube


def cmd_sar_sim(run: RunConfig, out: _Outputs) -> None:
    _, cube = _simulate(run)
    K, M, N = cube.data.shape
    meta = _matrix_meta(run)
    meta.update(
        n_pulses=K, n_fast=N, prf_hz=cube.prf, window_start_s=cube.window_start,
        layout="row k*M + m is sub-pulse m of pulse k",
    )
    formats.write_matrix(out.path("echo.bin"), cube.data.reshape(K * M, N), meta)


def cmd_sar_focus(run: RunConfig, out: _Outputs, skip_qam: bool, skip_comp: bool) -> None:
    _, cube = _simulate(run)
    img = focus_rda(
        cube, run.waveform, run.params, run.geometry,
        qam_removal=run.qam_removal and not skip_qam,
        compensation=run.compensation and not skip_comp,
    )
    meta = _matrix_meta(run)
    meta.update(
        prf_hz=img.prf,
        slant_range0_m=float(img.slant_range_m[0]),
        slant_range_step_m=float(img.slant_range_m[1] - img.slant_range_m[0]),
        azimuth0_m=float(img.azimuth_m[0]),
        azimuth_step_m=float(img.azimuth_m[1] - img.azimuth_m[0]),
        steps=",".join(img.steps),
        layout="rows are azimuth positions, cols are slant-range bins",
    )
    formats.write_matrix(out.path("image.bin"), img.data, meta)
    formats.write_pgm(out.path("image.pgm"), img.data)


def _load_image(path: Path) -> SarImage:
    data = formats.read_matrix(path)
    meta_path = Path(str(path) + ".meta")
    if not meta_path.exists():
        raise ValueError(f"missing sidecar {meta_path}")
    meta = formats.read_meta(meta_path)
    try:
        r0 = float(meta["slant_range0_m"])
        dr = float(meta["slant_range_step_m"])
        a0 = float(meta["azimuth0_m"])
        da = float(meta["azimuth_step_m"])
        fs = float(meta["fs_hz"])
        prf = float(meta["prf_hz"])
    except KeyError as exc:
        raise ValueError(f"{meta_path}: missing key {exc.args[0]}") from None
    K, N = data.shape
    return SarImage(
        data=data.astype(np.complex128),
        slant_range_m=r0 + dr * np.arange(N),
        azimuth_m=a0 + da * np.arange(K),
        fs=fs,
        prf=prf,
        steps=tuple(s for s in meta.get("steps", "").split(",") if s),
    )


def cmd_metrics(image_path: Path, run: RunConfig, out: _Outputs, convention: str) -> None:
    _require_scene(run)
    img = _load_image(image_path)
    reports = []
    cuts = []
    for target in run.scene:
        reports.append(report_target(img, target, run.geometry, convention=convention))
        rng_cut, az_cut = extract_profiles(
            img, azimuth_m=target.y, range_m=target.closest_range(run.geometry)
        )
        cuts.append((target.label, rng_cut, az_cut))
    formats.write_csv(out.path("report.csv"), REPORT_COLUMNS,
                      (report_row(r) for r in reports))
    figures.profiles_figure(out.path("profiles.png"), cuts)


def cmd_comm_ber(run: RunConfig, out: _Outputs, snr_db: list[float], trials: int) -> None:
    report = run_ber(run.waveform, run.params, snr_db, trials,
                     sigma2=run.channel.sigma2, seed=run.seed, csi=run.channel.csi)
    header = ["snr_db", "trials", "index_errors", "qam_errors", "total_errors",
              "index_ber", "qam_ber", "total_ber"]
    rows = zip(report.snr_db, [report.trials] * len(report.snr_db),
               report.index_errors, report.qam_errors, report.total_errors,
               report.index_ber, report.qam_ber, report.total_ber)
    formats.write_csv(out.path("ber.csv"), header, rows)
    figures.ber_figure(out.path("ber.png"), report)


def _parse_snr_list(text: str) -> list[float]:
    try:
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise ConfigError(f"--snr: expected comma-separated numbers, got {text!r}") from None


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fimlfm",
        description="Simulation and analysis toolkit for a frequency-index-modulated "
                    "LFM radar/communication waveform.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_: str, config_arg: bool = True) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_)
        if config_arg:
            p.add_argument("config", help="run configuration file")
        p.add_argument("-o", "--output-dir", help="override the config's output directory")
        return p

    add("waveform", "synthesize the pulse train (binary matrix + spectrogram PGM)")

    p = add("ambiguity", "ambiguity surface or cuts (CSV + images)")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--closed-form", action="store_true", help="principal-term model (default)")
    g.add_argument("--numeric", action="store_true", help="direct evaluation from samples")
    p.add_argument("--cut", choices=("tau0", "xi0"),
                   help="1-D cut: tau0 = zero delay, xi0 = zero Doppler")

    add("sar-sim", "simulate the echo cube (binary matrix)")

    p = add("sar-focus", "simulate and focus a SAR image (binary matrix + PGM)")
    p.add_argument("--skip-qam-removal", action="store_true",
                   help="leave transmit symbols on the echoes")
    p.add_argument("--skip-compensation", action="store_true",
                   help="replace the sub-band filter bank with a plain LFM reference")

    p = sub.add_parser("metrics", help="point-target quality report (CSV + profile figure)")
    p.add_argument("image", help="focused image written by sar-focus")
    p.add_argument("--targets", required=True, metavar="CONFIG",
                   help="config file providing the scene and geometry")
    p.add_argument("--convention", choices=("-3db", "rect"), default="-3db",
                   help="mainlobe width convention for the resolution columns")
    p.add_argument("-o", "--output-dir", help="override the config's output directory")

    p = add("comm-ber", "Monte-Carlo BER sweep (CSV + curve figure)")
    p.add_argument("--snr", required=True, help="comma-separated SNR points in dB")
    p.add_argument("--trials", required=True, type=int, help="trials per SNR point")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    out: _Outputs | None = None
    try:
        run = parse_config(args.targets if args.command == "metrics" else args.config)
        directory = Path(args.output_dir or run.output_dir)
        directory.mkdir(parents=True, exist_ok=True)
        out = _Outputs(directory)
        if args.command == "waveform":
            cmd_waveform(run, out)
        elif args.command == "ambiguity":
            mode = "numeric" if args.numeric else "closed-form"
            cmd_ambiguity(run, out, mode, args.cut)
        elif args.command == "sar-sim":
            cmd_sar_sim(run, out)
        elif args.command == "sar-focus":
            cmd_sar_focus(run, out, args.skip_qam_removal, args.skip_compensation)
        elif args.command == "metrics":
            cmd_metrics(Path(args.image), run, out, args.convention)
        elif args.command == "comm-ber":
            cmd_comm_ber(run, out, _parse_snr_list(args.snr), args.trials)
    except ConfigError as exc:
        if out is not None:
            out.discard()
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # runtime failure: report one line, clean up
        if out is not None:
            out.discard()
        print(f"error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
