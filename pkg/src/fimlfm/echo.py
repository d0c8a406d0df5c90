"""Stripmap SAR echo simulation for the sub-banded pulse.

The platform flies along y at height h with speed v; a point target sits
on the ground plane at (x, y, 0).  Echoes are recorded per sub-pulse in a
common fast-time window ("ideal sub-pulse separation"); a merged per-pulse
record with time-gated separation is available for realism studies.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .waveform import C0, DerivedParams, FimFrame, WaveformConfig


@dataclass(frozen=True)
class Geometry:
    """Acquisition geometry; depression angle is to the scene centre."""

    h: float
    v: float
    depression_deg: float
    antenna_len: float = 2.0

    def __post_init__(self):
        if not 0.0 < self.depression_deg < 90.0:
            raise ValueError("depression angle must lie in (0, 90) degrees")
        if self.h <= 0 or self.v <= 0 or self.antenna_len <= 0:
            raise ValueError("h, v and antenna_len must be positive")

    @property
    def R0(self) -> float:
        """Closest slant range to the scene centre."""
        return self.h / np.sin(np.radians(self.depression_deg))

    @property
    def ground_range(self) -> float:
        """Ground range of the scene centre from the flight track."""
        return self.h / np.tan(np.radians(self.depression_deg))


def default_prf(geom: Geometry) -> float:
    """Four times the antenna Doppler bandwidth 2*v/antenna_len."""
    return 4.0 * 2.0 * geom.v / geom.antenna_len


@dataclass(frozen=True)
class PointTarget:
    x: float
    y: float
    sigma: complex = 1.0 + 0.0j
    label: str = ""

    @property
    def R0(self) -> float:
        raise AttributeError  # use closest_range(geom) to avoid h ambiguity

    def closest_range(self, geom: Geometry) -> float:
        return float(np.hypot(self.x, geom.h))


def slant_range(geom: Geometry, target: PointTarget, s: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Exact and second-order slant range at slow time s.

    exact  = sqrt(x**2 + (y - v*s)**2 + h**2)
    taylor = R0 + (y - v*s)**2 / (2*R0),  R0 = sqrt(x**2 + h**2)
    """
    s = np.asarray(s, dtype=float)
    dy = target.y - geom.v * s
    r0 = target.closest_range(geom)
    exact = np.sqrt(target.x ** 2 + dy ** 2 + geom.h ** 2)
    return exact, r0 + dy ** 2 / (2.0 * r0)


def instantaneous_doppler(
    cfg: WaveformConfig,
    params: DerivedParams,
    geom: Geometry,
    target: PointTarget,
    s: np.ndarray,
    a: int,
) -> np.ndarray:
    """Doppler of sub-band a at slow time s, (fc + a*Bs)*(y - v*s)*v/(c*R0).

    The fractional spread across sub-bands is (fc + a*Bs)/fc - 1; it is
    what the sub-pulse alignment stage has to absorb.
    """
    s = np.asarray(s, dtype=float)
    r0 = target.closest_range(geom)
    return (cfg.fc + a * params.Bs) * (target.y - geom.v * s) * geom.v / (C0 * r0)


@dataclass(frozen=True)
class Acquisition:
    """Slow/fast time sampling plan.

    ``window_start``/``window_samples`` override the automatic fast-time
    window (start is seconds after pulse emission).  ``noise_std`` adds
    complex white noise per sample; pulse k draws from an RNG substream
    keyed by (seed, k) so results do not depend on evaluation order.
    """

    prf: float
    n_pulses: int
    window_start: float | None = None
    window_samples: int | None = None
    seed: int = 0
    noise_std: float = 0.0
    range_model: str = "exact"  # or "taylor"

    def __post_init__(self):
        if self.prf <= 0 or self.n_pulses < 1:
            raise ValueError("prf must be positive and n_pulses >= 1")
        if self.range_model not in ("exact", "taylor"):
            raise ValueError(f"unknown range model {self.range_model!r}")


@dataclass(frozen=True)
class EchoCube:
    """Received echoes, one fast-time row per (pulse, sub-pulse).

    data[k, m, n] is sample n of sub-pulse m of pulse k on the common
    fast-time axis window_start + n/fs (seconds after pulse k's emission).
    """

    data: np.ndarray
    fs: float
    window_start: float
    prf: float
    frame: FimFrame = field(repr=False)

    @property
    def n_pulses(self) -> int:
        return self.data.shape[0]

    @property
    def n_fast(self) -> int:
        return self.data.shape[2]

    def fast_time(self) -> np.ndarray:
        return self.window_start + np.arange(self.n_fast) / self.fs


def _auto_window(params: DerivedParams, tau: np.ndarray, M: int) -> tuple[float, int]:
    # cover every sub-pulse echo [m*Ts + tau, m*Ts + tau + Ts) plus a Ts
    # guard on each side; length padded to a multiple of q for integer-bin
    # sub-band shifts
    start = tau.min() - params.Ts
    end = (M - 1) * params.Ts + tau.max() + 2.0 * params.Ts
    n = int(np.ceil((end - start) * params.fs))
    n += (-n) % params.q
    return start, n


def simulate_echo(
    cfg: WaveformConfig,
    params: DerivedParams,
    geom: Geometry,
    targets: list[PointTarget],
    frame: FimFrame,
    acq: Acquisition,
) -> EchoCube:
    """Simulate the echo cube for a frame of pulses.

    Each target contributes, inside sub-pulse row (k, m),
    sigma*c*sqrt(P)*exp(-j*2*pi*fc*tau)*exp(j*2*pi*a*Bs*u)*exp(j*pi*Kc*u**2)
    over u = t - m*Ts - tau in [0, Ts), with tau the two-way delay frozen at
    the pulse's slow time (stop-and-go).
    """
    if not targets:
        raise ValueError("need at least one target")
    K = acq.n_pulses
    if frame.n_pulses < K:
        raise ValueError(f"frame has {frame.n_pulses} pulses, acquisition needs {K}")
    M = frame.M
    s = np.arange(K) / acq.prf
    tau_kt = np.empty((K, len(targets)))
    for t_i, tgt in enumerate(targets):
        exact, taylor = slant_range(geom, tgt, s)
        r = exact if acq.range_model == "exact" else taylor
        tau_kt[:, t_i] = 2.0 * r / C0
    if acq.window_start is None or acq.window_samples is None:
        t0, n_fast = _auto_window(params, tau_kt, M)
        t0 = acq.window_start if acq.window_start is not None else t0
        n_fast = acq.window_samples if acq.window_samples is not None else n_fast
    else:
        t0, n_fast = acq.window_start, acq.window_samples
    if n_fast % params.q:
        raise ValueError(f"window_samples must be a multiple of q = {params.q}")

    data = np.zeros((K, M, n_fast), dtype=complex)
    amp = np.sqrt(cfg.P)
    rel = np.arange(params.Ns)
    for k in range(K):
        idx, sym = frame.pulse(k)
        for t_i, tgt in enumerate(targets):
            tau = tau_kt[k, t_i]
            carrier = tgt.sigma * amp * np.exp(-2j * np.pi * cfg.fc * tau)
            for m in range(M):
                b_real = (m * params.Ts + tau - t0) * params.fs
                n0 = int(np.ceil(b_real - 1e-9))
                if n0 < 0 or n0 + params.Ns > n_fast:
                    raise ValueError(
                        f"echo of target {t_i} (pulse {k}, sub-pulse {m}) falls "
                        "outside the fast-time window"
                    )
                u = (n0 + rel - b_real) / params.fs
                data[k, m, n0:n0 + params.Ns] += (
                    carrier
                    * sym[m]
                    * np.exp(2j * np.pi * (idx[m] * params.Bs * u + 0.5 * params.Kc * u * u))
                )
    if acq.noise_std > 0.0:
        scale = acq.noise_std / np.sqrt(2.0)
        for k in range(K):
            # domain tag 1 = echo noise; keeps pulse streams disjoint from
            # the frame-content (0) and channel (2, 3) substreams
            rng = np.random.default_rng(np.random.SeedSequence(entropy=acq.seed, spawn_key=(1, k)))
            data[k] += scale * (
                rng.standard_normal((M, n_fast)) + 1j * rng.standard_normal((M, n_fast))
            )
    return EchoCube(data=data, fs=params.fs, window_start=t0, prf=acq.prf, frame=frame)


def merge_subpulses(cube: EchoCube) -> np.ndarray:
    """Collapse the cube to one received record per pulse (shape K x n_fast)."""
    return cube.data.sum(axis=1)


def gate_subpulses(
    merged: np.ndarray, cube: EchoCube, params: DerivedParams, tau_ref: float
) -> EchoCube:
    """Re-separate a merged record by time gating.

    Sub-pulse m is taken from the nominal support [m*Ts + tau_ref,
    m*Ts + tau_ref + Ts), i.e. a width-Ts gate centred on the echo of a
    scene-centre target.  Targets away from tau_ref lose edge samples to
    the gate; that truncation is the price of merged operation.
    """
    K, n_fast = merged.shape
    M = cube.frame.M
    data = np.zeros((K, M, n_fast), dtype=complex)
    for m in range(M):
        lo_t = m * params.Ts + tau_ref - cube.window_start
        lo = int(np.ceil(lo_t * params.fs - 1e-9))
        hi = lo + params.Ns
        lo_c, hi_c = max(lo, 0), min(hi, n_fast)
        if lo_c < hi_c:
            data[:, m, lo_c:hi_c] = merged[:, lo_c:hi_c]
    return EchoCube(
        data=data, fs=cube.fs, window_start=cube.window_start, prf=cube.prf, frame=cube.frame
    )
