"""PNG figures for the report-producing commands.

matplotlib is imported lazily (Agg backend) so the compute modules stay
importable without a plotting stack; savefig strips the Software tag to
keep outputs byte-stable across matplotlib patch versions.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .ambiguity import AmbiguityGrid
from .comm import BerReport
from .metrics import DB_FLOOR, ProfileCut

_DPI = 120


def _plt():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def _save(fig, path) -> None:
    fig.savefig(path, dpi=_DPI, metadata={"Software": None})
    _plt().close(fig)


def _db(values: np.ndarray) -> np.ndarray:
    mag = np.abs(np.asarray(values, dtype=float))
    peak = mag.max()
    if peak == 0.0:
        return np.full(mag.shape, DB_FLOOR)
    with np.errstate(divide="ignore"):
        db = 20.0 * np.log10(mag / peak)
    return np.maximum(db, DB_FLOOR)


def ambiguity_surface_figure(path, grid: AmbiguityGrid) -> None:
    plt = _plt()
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    mesh = ax.pcolormesh(
        grid.delays_s * 1e6,
        grid.doppler_hz * 1e-3,
        _db(grid.magnitude).T,
        cmap="viridis",
        vmin=DB_FLOOR,
        vmax=0.0,
        shading="nearest",
    )
    fig.colorbar(mesh, ax=ax, label="|chi| (dB)")
    ax.set_xlabel("delay (us)")
    ax.set_ylabel("Doppler (kHz)")
    ax.set_title("ambiguity surface")
    _save(fig, path)


def ambiguity_cut_figure(path, positions: np.ndarray, magnitude: np.ndarray,
                         xlabel: str, title: str) -> None:
    plt = _plt()
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.plot(positions, _db(magnitude), lw=1.0)
    ax.set_xlabel(xlabel)
    ax.set_ylabel("|chi| (dB)")
    ax.set_ylim(DB_FLOOR, 2.0)
    ax.grid(True, alpha=0.3)
    ax.set_title(title)
    _save(fig, path)


def profiles_figure(path, cuts: Sequence[tuple[str, ProfileCut, ProfileCut]]) -> None:
    """One row per target: range cut and azimuth cut, dB versus metres."""
    plt = _plt()
    n = len(cuts)
    fig, axes = plt.subplots(n, 2, figsize=(9.0, 2.6 * n), squeeze=False)
    for row, (label, rng_cut, az_cut) in enumerate(cuts):
        for col, (cut, name) in enumerate(((rng_cut, "range"), (az_cut, "azimuth"))):
            ax = axes[row][col]
            centre = cut.positions[cut.peak_index]
            ax.plot(cut.positions - centre, _db(cut.values), lw=1.0)
            ax.set_ylim(DB_FLOOR, 2.0)
            ax.grid(True, alpha=0.3)
            ax.set_title(f"target {label}: {name} cut")
            ax.set_xlabel(f"{name} offset (m)")
            if col == 0:
                ax.set_ylabel("dB")
    fig.tight_layout()
    _save(fig, path)


def ber_figure(path, report: BerReport) -> None:
    plt = _plt()
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    for attr, style in (("total_ber", "o-"), ("index_ber", "s--"), ("qam_ber", "d:")):
        values = [max(b, 1e-12) for b in getattr(report, attr)]
        ax.semilogy(report.snr_db, values, style, label=attr.replace("_", " "), ms=4)
    ax.set_xlabel("SNR (dB)")
    ax.set_ylabel("BER")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    ax.set_title(f"M={report.M}, J={report.J}, {report.trials} trials/point")
    _save(fig, path)
