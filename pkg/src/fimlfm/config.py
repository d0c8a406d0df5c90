"""Run configuration: strict flat-key config files and frame construction.

Grammar: one ``dotted.key = value`` per line; blank lines and ``#``
comments are ignored.  Unknown or duplicate keys are errors, so typos
cannot silently fall back to defaults.  ``scene.target.<ID> = x, y[, re[,
im]]`` adds one point target; targets keep file order.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .comm import ChannelConfig
from .echo import Acquisition, Geometry, PointTarget, default_prf
from .waveform import (
    DerivedParams,
    FimFrame,
    WaveformConfig,
    derive_params,
    map_bits_to_frame,
    qam_constellation,
)


class ConfigError(ValueError):
    """Unparseable syntax, unknown key, or invalid value in a config file."""


@dataclass(frozen=True)
class RunConfig:
    """Everything a command needs: parameter set, scene, plumbing."""

    waveform: WaveformConfig
    params: DerivedParams
    geometry: Geometry
    acquisition: Acquisition
    channel: ChannelConfig
    scene: tuple[PointTarget, ...]
    frame_indices: str | tuple[int, ...]
    frame_symbols: str
    qam_removal: bool
    compensation: bool
    output_dir: str
    seed: int


def _float(text: str, key: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"{key}: expected a number, got {text!r}") from None


def _int(text: str, key: str) -> int:
    try:
        return int(text, 0)
    except ValueError:
        raise ConfigError(f"{key}: expected an integer, got {text!r}") from None


def _bool(text: str, key: str) -> bool:
    low = text.lower()
    if low in ("true", "yes", "on", "1"):
        return True
    if low in ("false", "no", "off", "0"):
        return False
    raise ConfigError(f"{key}: expected a boolean, got {text!r}")


def _lines_to_dict(text: str, source: str) -> dict[str, str]:
    table: dict[str, str] = {}
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{ln}: expected 'key = value', got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError(f"{source}:{ln}: empty key")
        if key in table:
            raise ConfigError(f"{source}:{ln}: duplicate key {key!r}")
        table[key] = value
    return table


def _parse_indices(text: str, M: int) -> str | tuple[int, ...]:
    if text.lower() == "random":
        return "random"
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != M:
        raise ConfigError(
            f"frame.indices: need 'random' or exactly M={M} comma-separated values"
        )
    pattern = tuple(_int(p, "frame.indices") for p in parts)
    bad = [a for a in pattern if not 0 <= a < M]
    if bad:
        raise ConfigError(f"frame.indices: sub-band index {bad[0]} outside [0, {M})")
    return pattern


def _parse_target(key: str, text: str) -> PointTarget:
    label = key.rsplit(".", 1)[1]
    if not label:
        raise ConfigError(f"{key}: empty target id")
    parts = [p.strip() for p in text.split(",")]
    if len(parts) not in (2, 3, 4):
        raise ConfigError(f"{key}: expected 'x, y[, sigma_re[, sigma_im]]'")
    vals = [_float(p, key) for p in parts]
    sigma = complex(vals[2] if len(vals) > 2 else 1.0, vals[3] if len(vals) > 3 else 0.0)
    return PointTarget(x=vals[0], y=vals[1], sigma=sigma, label=label)


def parse_config(path: str | Path) -> RunConfig:
    """Parse and validate a run configuration file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    table = _lines_to_dict(text, path.name)

    def take(key: str, default=None):
        return table.pop(key, default)

    def need(key: str) -> str:
        value = table.pop(key, None)
        if value is None:
            raise ConfigError(f"missing required key {key}")
        return value

    wf_kwargs = dict(
        fc=_float(need("waveform.fc"), "waveform.fc"),
        Bw=_float(need("waveform.Bw"), "waveform.Bw"),
        Tw=_float(need("waveform.Tw"), "waveform.Tw"),
        M=_int(take("waveform.M", "4"), "waveform.M"),
        J=_int(take("waveform.J", "4"), "waveform.J"),
        P=_float(take("waveform.P", "1.0"), "waveform.P"),
        osf=_float(take("waveform.osf", "1.25"), "waveform.osf"),
    )
    try:
        waveform = WaveformConfig(**wf_kwargs)
        params = derive_params(waveform)
    except ValueError as exc:
        raise ConfigError(f"waveform: {exc}") from None

    try:
        geometry = Geometry(
            h=_float(take("geometry.h", "20e3"), "geometry.h"),
            v=_float(take("geometry.v", "100.0"), "geometry.v"),
            depression_deg=_float(
                take("geometry.depression_deg", "60.0"), "geometry.depression_deg"
            ),
            antenna_len=_float(take("geometry.antenna_len", "2.0"), "geometry.antenna_len"),
        )
    except ValueError as exc:
        raise ConfigError(f"geometry: {exc}") from None

    seed = _int(take("seed", "0"), "seed")
    ws = take("acquisition.window_start")
    nw = take("acquisition.window_samples")
    try:
        acquisition = Acquisition(
            prf=_float(take("acquisition.prf", str(default_prf(geometry))), "acquisition.prf"),
            n_pulses=_int(take("acquisition.n_pulses", "256"), "acquisition.n_pulses"),
            window_start=None if ws is None else _float(ws, "acquisition.window_start"),
            window_samples=None if nw is None else _int(nw, "acquisition.window_samples"),
            seed=seed,
            noise_std=_float(take("acquisition.noise_std", "0.0"), "acquisition.noise_std"),
            range_model=take("acquisition.range_model", "exact"),
        )
    except ValueError as exc:
        raise ConfigError(f"acquisition: {exc}") from None

    snr = take("channel.snr_db")
    try:
        channel = ChannelConfig(
            sigma2=_float(take("channel.sigma2", "1.0"), "channel.sigma2"),
            snr_db=None if snr is None else _float(snr, "channel.snr_db"),
            csi=_bool(take("channel.csi", "true"), "channel.csi"),
            seed=seed,
        )
    except ValueError as exc:
        raise ConfigError(f"channel: {exc}") from None

    frame_indices = _parse_indices(take("frame.indices", "random"), waveform.M)
    frame_symbols = take("frame.symbols", "random").lower()
    if frame_symbols not in ("random", "unit"):
        raise ConfigError("frame.symbols: expected 'random' or 'unit'")

    scene = tuple(
        _parse_target(key, table.pop(key))
        for key in [k for k in table if k.startswith("scene.target.")]
    )

    run = RunConfig(
        waveform=waveform,
        params=params,
        geometry=geometry,
        acquisition=acquisition,
        channel=channel,
        scene=scene,
        frame_indices=frame_indices,
        frame_symbols=frame_symbols,
        qam_removal=_bool(take("pipeline.qam_removal", "true"), "pipeline.qam_removal"),
        compensation=_bool(take("pipeline.compensation", "true"), "pipeline.compensation"),
        output_dir=take("output_dir", "fimlfm_out"),
        seed=seed,
    )
    if table:
        unknown = next(iter(table))
        raise ConfigError(f"unknown key {unknown!r}")
    return run


def build_frame(run: RunConfig, n_pulses: int | None = None) -> FimFrame:
    """Construct the transmitted frame for a run.

    Random content comes from the master seed's substream (0, 0), so frames
    are independent of the echo-noise and channel streams.  Fixed index
    patterns repeat every pulse; fixed patterns may use sub-bands that have
    no bit encoding (radar-only experiments), which frame_to_bits rejects.
    """
    K = run.acquisition.n_pulses if n_pulses is None else n_pulses
    cfg, params = run.waveform, run.params
    rng = np.random.default_rng(np.random.SeedSequence(entropy=run.seed, spawn_key=(0, 0)))
    if run.frame_indices == "random" and run.frame_symbols == "random":
        bits = rng.integers(0, 2, K * params.bits_per_pulse, dtype=np.uint8)
        return map_bits_to_frame(bits, cfg, params)
    if run.frame_indices == "random":
        indices = rng.integers(0, 1 << params.bits_index, K * cfg.M)
    else:
        indices = np.tile(np.asarray(run.frame_indices, dtype=np.int64), K)
    if run.frame_symbols == "random":
        symbols = qam_constellation(cfg.J)[rng.integers(0, cfg.J, K * cfg.M)]
    else:
        symbols = np.ones(K * cfg.M, dtype=np.complex128)
    return FimFrame(M=cfg.M, J=cfg.J, indices=indices, symbols=symbols)
