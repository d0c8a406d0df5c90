"""Frequency-index-modulated LFM pulse definition and synthesis.

A pulse of width Tw and total bandwidth Bw is divided into M sub-pulses of
width Ts = Tw/M.  Sub-pulse m is a chirp of rate Kc = Bw/Tw confined to the
sub-band [a_m*Bs, (a_m+1)*Bs), Bs = Bw/M, where the sub-band index a_m and a
Gray-coded QAM symbol c_m carry the payload bits.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil, floor, log2

import numpy as np

# Propagation speed used for all range conversions.  The rounded radar value
# keeps the published resolution figures (c/2Bw = 1.8750 m at 80 MHz) exact.
C0 = 3.0e8


@dataclass(frozen=True)
class WaveformConfig:
    """User-facing waveform parameters.

    Attributes
    ----------
    fc : float
        Carrier frequency in Hz.
    Bw : float
        Total swept bandwidth in Hz.
    Tw : float
        Pulse width in seconds.
    M : int
        Number of sub-pulses (equivalently sub-bands) per pulse.
    J : int
        QAM order; must be a square constellation (4, 16, 64, ...).
    P : float
        Transmit power; the complex envelope has magnitude sqrt(P).
    osf : float
        Fast-time oversampling control; the sample rate is q*Bs with
        q = ceil(osf*M), so osf >= 1 guarantees fs >= Bw.
    """

    fc: float
    Bw: float
    Tw: float
    M: int = 4
    J: int = 4
    P: float = 1.0
    osf: float = 1.25


@dataclass(frozen=True)
class DerivedParams:
    """Quantities derived from :class:`WaveformConfig`, fixed at config time.

    ``L = Bs*Ts`` is the sub-pulse time-bandwidth product.  It is required to
    be a positive integer: that single condition makes the M candidate
    sub-band tones exactly orthogonal over one sub-pulse and places every
    sub-band shift on an integer bin of any fast-time DFT whose length is a
    multiple of q.
    """

    Bs: float
    Ts: float
    Kc: float
    q: int
    fs: float
    Ns: int
    Npulse: int
    L: int
    bits_index: int
    bits_qam: int

    @property
    def M(self) -> int:
        return self.Npulse // self.Ns

    @property
    def bits_per_pulse(self) -> int:
        return self.M * (self.bits_index + self.bits_qam)


def derive_params(cfg: WaveformConfig) -> DerivedParams:
    """Validate a waveform configuration and derive its sampling grid.

    Raises
    ------
    ValueError
        If a parameter is out of range, if Bs*Ts < 1 (the sub-band tones
        would not be orthogonal over a sub-pulse), or if Bs*Ts is not an
        integer.
    """
    if cfg.fc <= 0 or cfg.Bw <= 0 or cfg.Tw <= 0 or cfg.P <= 0:
        raise ValueError("fc, Bw, Tw and P must be positive")
    if cfg.M < 1 or int(cfg.M) != cfg.M:
        raise ValueError(f"M must be a positive integer, got {cfg.M}")
    if cfg.osf < 1.0:
        raise ValueError("osf must be >= 1 so that fs >= Bw")
    k = log2(cfg.J) / 2 if cfg.J > 0 else -1
    if cfg.J < 4 or k != int(k):
        raise ValueError(f"J must be a square QAM order (4, 16, 64, ...), got {cfg.J}")

    M = int(cfg.M)
    Bs = cfg.Bw / M
    Ts = cfg.Tw / M
    tbp = Bs * Ts
    if tbp < 1.0:
        raise ValueError(
            f"Bs*Ts = {tbp:.6g} < 1 for M = {M}; sub-band tones are not "
            "orthogonal over a sub-pulse"
        )
    L = round(tbp)
    if abs(tbp - L) > 1e-6 * tbp:
        raise ValueError(
            f"Bs*Ts = {tbp!r} must be an integer (got M = {M}); required for "
            "tone orthogonality and integer-bin sub-band shifts"
        )
    q = ceil(cfg.osf * M)
    Ns = q * L
    return DerivedParams(
        Bs=Bs,
        Ts=Ts,
        Kc=cfg.Bw / cfg.Tw,
        q=q,
        fs=q * Bs,
        Ns=Ns,
        Npulse=M * Ns,
        L=L,
        bits_index=floor(log2(M)) if M > 1 else 0,
        bits_qam=int(log2(cfg.J)),
    )


def qam_constellation(J: int) -> np.ndarray:
    """Gray-coded square QAM constellation, unit average power.

    Returns an array of J complex points indexed by bit label; the first
    half of the label bits select the in-phase level and the second half the
    quadrature level, each Gray-decoded.  Label 0 is the corner point
    -(l-1)*(1+1j)*scale with l levels per axis.
    """
    k = int(log2(J))
    if J < 4 or 2 ** k != J or k % 2:
        raise ValueError(f"J must be a square QAM order, got {J}")
    half = k // 2
    levels = 1 << half
    labels = np.arange(J)
    gi = labels >> half
    gq = labels & (levels - 1)
    ki = _gray_to_binary(gi)
    kq = _gray_to_binary(gq)
    scale = np.sqrt(3.0 / (2.0 * (J - 1)))
    return ((2 * ki - (levels - 1)) + 1j * (2 * kq - (levels - 1))) * scale


def _gray_to_binary(g: np.ndarray) -> np.ndarray:
    b = np.asarray(g).copy()
    shift = 1
    while (b >> shift).any():
        b ^= b >> shift
        shift <<= 1
    return b


@dataclass(frozen=True)
class FimFrame:
    """Index and symbol content of K consecutive pulses.

    ``indices`` and ``symbols`` have length K*M; sub-pulse i of pulse k is
    element k*M + i.
    """

    M: int
    J: int
    indices: np.ndarray
    symbols: np.ndarray

    @property
    def n_pulses(self) -> int:
        return len(self.indices) // self.M

    def pulse(self, k: int) -> tuple[np.ndarray, np.ndarray]:
        sl = slice(k * self.M, (k + 1) * self.M)
        return self.indices[sl], self.symbols[sl]


def map_bits_to_frame(bits: np.ndarray, cfg: WaveformConfig, params: DerivedParams) -> FimFrame:
    """Map a bit vector to sub-band indices and QAM symbols.

    Each sub-pulse consumes bits_index bits (natural binary, MSB first) for
    the sub-band index followed by bits_qam bits for the Gray-coded symbol.
    The bit count must be a multiple of the per-pulse payload
    M*(bits_index + bits_qam).
    """
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.ndim != 1 or np.any(bits > 1):
        raise ValueError("bits must be a flat 0/1 vector")
    per_sub = params.bits_index + params.bits_qam
    per_pulse = cfg.M * per_sub
    if len(bits) == 0 or len(bits) % per_pulse:
        raise ValueError(
            f"bit count {len(bits)} is not a positive multiple of the "
            f"per-pulse payload {per_pulse}"
        )
    grouped = bits.reshape(-1, per_sub)
    if params.bits_index:
        weights = 1 << np.arange(params.bits_index - 1, -1, -1)
        indices = grouped[:, : params.bits_index] @ weights
    else:
        indices = np.zeros(len(grouped), dtype=np.int64)
    qweights = 1 << np.arange(params.bits_qam - 1, -1, -1)
    labels = grouped[:, params.bits_index:] @ qweights
    symbols = qam_constellation(cfg.J)[labels]
    return FimFrame(M=cfg.M, J=cfg.J, indices=indices.astype(np.int64), symbols=symbols)


def frame_to_bits(frame: FimFrame, params: DerivedParams) -> np.ndarray:
    """Inverse of :func:`map_bits_to_frame`.

    Rejects frames containing a sub-band index outside [0, 2**bits_index):
    such indices have no bit encoding (possible when M is not a power of
    two).
    """
    indices = np.asarray(frame.indices)
    if indices.min(initial=0) < 0 or indices.max(initial=0) >= (1 << params.bits_index):
        raise ValueError(
            f"frame contains indices outside [0, {1 << params.bits_index}) "
            "that cannot be encoded"
        )
    const = qam_constellation(frame.J)
    labels = np.argmin(np.abs(np.asarray(frame.symbols)[:, None] - const[None, :]), axis=1)
    out = np.empty((len(indices), params.bits_index + params.bits_qam), dtype=np.uint8)
    for i in range(params.bits_index):
        out[:, i] = (indices >> (params.bits_index - 1 - i)) & 1
    for i in range(params.bits_qam):
        out[:, params.bits_index + i] = (labels >> (params.bits_qam - 1 - i)) & 1
    return out.ravel()


def synthesize_pulse(
    cfg: WaveformConfig,
    params: DerivedParams,
    indices: np.ndarray,
    symbols: np.ndarray | None = None,
) -> np.ndarray:
    """Sample one pulse at fs as an analytic baseband signal.

    Sub-pulse m occupies local time t' in [0, Ts) at offset m*Ts and equals
    c_m*sqrt(P)*exp(j*2*pi*(a_m*Bs + Kc*t'/2)*t'); its instantaneous
    frequency sweeps [a_m*Bs, (a_m+1)*Bs).  ``symbols=None`` synthesizes
    with unit symbols (index-only modulation, used for ambiguity analysis).
    """
    indices = np.asarray(indices)
    if indices.shape != (cfg.M,):
        raise ValueError(f"need exactly M = {cfg.M} sub-band indices")
    if indices.min() < 0 or indices.max() >= cfg.M:
        raise ValueError(f"sub-band indices must lie in [0, {cfg.M})")
    if symbols is None:
        symbols = np.ones(cfg.M)
    symbols = np.asarray(symbols, dtype=complex)
    if symbols.shape != (cfg.M,):
        raise ValueError(f"need exactly M = {cfg.M} symbols")
    tp = np.arange(params.Ns) / params.fs
    quad = np.exp(1j * np.pi * params.Kc * tp * tp)
    out = np.empty(params.Npulse, dtype=complex)
    amp = np.sqrt(cfg.P)
    for m in range(cfg.M):
        tone = np.exp(2j * np.pi * indices[m] * params.Bs * tp)
        out[m * params.Ns:(m + 1) * params.Ns] = symbols[m] * amp * tone * quad
    return out


def synthesize_train(
    cfg: WaveformConfig,
    params: DerivedParams,
    frame: FimFrame,
    prf: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Sample a frame as a pulse train.

    Returns (pulses, start_times) where pulses has shape (K, Npulse) and
    start_times[k] = k/prf.  Only the active Tw of each pulse is sampled;
    the inter-pulse dead time is implied by the start times.
    """
    if frame.n_pulses < 1:
        raise ValueError("frame is empty")
    pri = 1.0 / prf
    if pri < cfg.Tw:
        raise ValueError(f"PRI = {pri:.3e} s is shorter than the pulse width {cfg.Tw:.3e} s")
    pulses = np.empty((frame.n_pulses, params.Npulse), dtype=complex)
    for k in range(frame.n_pulses):
        idx, sym = frame.pulse(k)
        pulses[k] = synthesize_pulse(cfg, params, idx, sym)
    return pulses, np.arange(frame.n_pulses) / prf
