"""Downlink simulation: fading channel, de-chirp, two-step demodulation.

Each sub-pulse rides an independent block-fading gain h ~ CN(0, sigma2)
plus white noise.  The receiver de-chirps, picks the sub-band index from
tone-correlation statistics, then decides the QAM symbol coherently
using the known h.  With Bs*Ts integer the candidate tones are exactly
orthogonal over a sub-pulse, so the noiseless statistics are one-hot.

SNR follows the convention 10*log10(P^2/N0) with N0 the per-complex-
sample noise variance; with the default P = 1 this reads as a plain
P/N0.  The tone projection averages Ns samples, so the statistic-level
noise variance is N0/Ns.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .waveform import DerivedParams, WaveformConfig, qam_constellation


@dataclass(frozen=True)
class ChannelConfig:
    """Fading/noise channel settings.

    ``snr_db=None`` disables noise.  ``csi=False`` models a receiver
    without channel knowledge (unit gain assumed at the QAM decision).
    """

    sigma2: float = 1.0
    snr_db: float | None = None
    csi: bool = True
    seed: int = 0

    def __post_init__(self):
        if self.sigma2 <= 0:
            raise ValueError("sigma2 must be positive")

    def noise_var(self, P: float) -> float:
        if self.snr_db is None:
            return 0.0
        return P * P / 10.0 ** (self.snr_db / 10.0)


@dataclass(frozen=True)
class RxSubpulse:
    """One received sub-pulse with its true channel gain."""

    samples: np.ndarray
    h: complex
    k: int = 0
    m: int = 0


def apply_channel(
    tx: np.ndarray, chan: ChannelConfig, cfg: WaveformConfig, k: int = 0, m: int = 0
) -> RxSubpulse:
    """h*tx + noise with a fresh (k, m)-keyed RNG substream.

    Keying the substream by sub-pulse position makes the result
    independent of evaluation order and thread count.
    """
    rng = np.random.default_rng(np.random.SeedSequence(entropy=chan.seed, spawn_key=(3, k, m)))
    h = complex(rng.normal(scale=np.sqrt(chan.sigma2 / 2.0))
                + 1j * rng.normal(scale=np.sqrt(chan.sigma2 / 2.0)))
    out = h * tx
    n0 = chan.noise_var(cfg.P)
    if n0 > 0.0:
        s = np.sqrt(n0 / 2.0)
        out = out + rng.normal(scale=s, size=len(tx)) + 1j * rng.normal(scale=s, size=len(tx))
    return RxSubpulse(samples=out, h=h, k=k, m=m)


def dechirp(samples: np.ndarray, params: DerivedParams) -> np.ndarray:
    """Multiply by the conjugate chirp; leaves the sub-band tone."""
    tp = np.arange(params.Ns) / params.fs
    return samples * np.exp(-1j * np.pi * params.Kc * tp * tp)


def detect_index(
    dechirped: np.ndarray, params: DerivedParams, candidates: int | None = None
) -> tuple[int, np.ndarray]:
    """Tone-correlation index decision.

    D[l] = |(1/Ns) sum_n y[n] e^{-j2*pi*l*Bs*n/fs}|^2, the candidate tone
    energies; returns (argmax, D) with ties broken toward the smallest
    index.  Candidate tone l lives on DFT bin l*L, so the statistics are
    DFT bins of y.
    """
    if candidates is None:
        candidates = params.M
    if not 1 <= candidates <= params.M:
        raise ValueError(f"candidate count must lie in [1, {params.M}]")
    z = np.fft.fft(dechirped)[np.arange(candidates) * params.L] / params.Ns
    D = (z * z.conj()).real
    return int(np.argmax(D)), D


def detect_qam(
    dechirped: np.ndarray,
    a_hat: int,
    h: complex,
    cfg: WaveformConfig,
    params: DerivedParams,
) -> int:
    """Coherent QAM decision on the detected tone.

    Projects onto tone a_hat, then picks the constellation label
    minimizing |z - h*c*sqrt(P)|^2; ties break toward the lowest label.
    """
    n = np.arange(params.Ns)
    z = np.mean(dechirped * np.exp(-2j * np.pi * a_hat * params.Bs * n / params.fs))
    ref = h * qam_constellation(cfg.J) * np.sqrt(cfg.P)
    d = np.abs(z - ref)
    return int(np.argmin(d))


def demodulate_frame(
    rx: list[RxSubpulse], cfg: WaveformConfig, params: DerivedParams, csi: bool = True
) -> np.ndarray:
    """Recover the bit stream from received sub-pulses.

    The index search is restricted to the 2**bits_index encodable
    sub-bands (the transmitter never uses the rest when M is not a power
    of two), so every decision maps to bits.
    """
    per_sub = params.bits_index + params.bits_qam
    if len(rx) % cfg.M:
        raise ValueError("sub-pulse count is not a multiple of M")
    alphabet = 1 << params.bits_index
    bits = np.empty(len(rx) * per_sub, dtype=np.uint8)
    for i, sub in enumerate(rx):
        y = dechirp(sub.samples, params)
        a_hat, _ = detect_index(y, params, candidates=alphabet)
        label = detect_qam(y, a_hat, sub.h if csi else 1.0, cfg, params)
        o = i * per_sub
        for b in range(params.bits_index):
            bits[o + b] = (a_hat >> (params.bits_index - 1 - b)) & 1
        for b in range(params.bits_qam):
            bits[o + params.bits_index + b] = (label >> (params.bits_qam - 1 - b)) & 1
    return bits


@dataclass(frozen=True)
class BerReport:
    """Monte-Carlo BER sweep results; errors split by bit stream."""

    snr_db: tuple[float, ...]
    trials: int
    index_errors: tuple[int, ...]
    qam_errors: tuple[int, ...]
    total_errors: tuple[int, ...]
    index_bits: int
    qam_bits: int
    M: int
    J: int
    sigma2: float
    seed: int

    @property
    def index_ber(self) -> tuple[float, ...]:
        return tuple(e / self.index_bits if self.index_bits else 0.0 for e in self.index_errors)

    @property
    def qam_ber(self) -> tuple[float, ...]:
        return tuple(e / self.qam_bits for e in self.qam_errors)

    @property
    def total_ber(self) -> tuple[float, ...]:
        return tuple(e / (self.index_bits + self.qam_bits) for e in self.total_errors)


_CHUNK = 4096


def run_ber(
    cfg: WaveformConfig,
    params: DerivedParams,
    snr_db: list[float],
    trials: int,
    *,
    sigma2: float = 1.0,
    seed: int = 0,
    csi: bool = True,
) -> BerReport:
    """Monte-Carlo BER over random bits, fading, and noise.

    One trial is one pulse: M sub-pulses with independent h and fresh
    data.  The sampler draws the tone-projection statistics directly:
    with Bs*Ts integer the candidate tones are orthonormal, so the Ns
    projected noises are i.i.d. CN(0, N0/Ns) and the statistic vector
    has exactly the distribution the sample-level receiver sees.  Work
    is chunked with an RNG substream per (SNR point, chunk), making the
    result independent of chunking or parallel order.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    alphabet = 1 << params.bits_index
    J = cfg.J
    const = qam_constellation(J) * np.sqrt(cfg.P)
    idx_err = []
    qam_err = []
    for si, snr in enumerate(snr_db):
        n0 = ChannelConfig(sigma2=sigma2, snr_db=snr).noise_var(cfg.P)
        stat_std = np.sqrt(n0 / params.Ns / 2.0)
        e_idx = 0
        e_qam = 0
        done = 0
        ci = 0
        while done < trials:
            t = min(_CHUNK, trials - done)
            rng = np.random.default_rng(
                np.random.SeedSequence(entropy=seed, spawn_key=(2, si, ci))
            )
            a = rng.integers(0, alphabet, size=(t, cfg.M))
            lab = rng.integers(0, J, size=(t, cfg.M))
            h = rng.normal(scale=np.sqrt(sigma2 / 2.0), size=(t, cfg.M, 2)).view(complex)[..., 0]
            z = np.zeros((t, cfg.M, alphabet), dtype=complex)
            if stat_std > 0.0:
                z += rng.normal(scale=stat_std, size=(t, cfg.M, alphabet, 2)).view(complex)[..., 0]
            # (trial, sub-pulse, true index) triples are unique, so fancy += is safe
            z[np.arange(t)[:, None], np.arange(cfg.M)[None, :], a] += h * const[lab]
            a_hat = np.argmax((z * z.conj()).real, axis=2)
            z_hat = np.take_along_axis(z, a_hat[:, :, None], 2)[:, :, 0]
            g = h if csi else np.ones_like(h)
            d = np.abs(z_hat[:, :, None] - g[:, :, None] * const[None, None, :])
            l_hat = np.argmin(d, axis=2)
            e_idx += int(np.bitwise_count(a ^ a_hat).sum())
            e_qam += int(np.bitwise_count(lab ^ l_hat).sum())
            done += t
            ci += 1
        idx_err.append(e_idx)
        qam_err.append(e_qam)
    return BerReport(
        snr_db=tuple(float(s) for s in snr_db),
        trials=trials,
        index_errors=tuple(idx_err),
        qam_errors=tuple(qam_err),
        total_errors=tuple(i + q for i, q in zip(idx_err, qam_err)),
        index_bits=trials * cfg.M * params.bits_index,
        qam_bits=trials * cfg.M * params.bits_qam,
        M=cfg.M,
        J=J,
        sigma2=sigma2,
        seed=seed,
    )
