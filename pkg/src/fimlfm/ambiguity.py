"""Ambiguity analysis of the sub-banded chirp pulse.

chi(tau, xi) = integral of s(t) * conj(s(t + tau)) * exp(j*2*pi*xi*t) dt.

The numeric evaluator works on sampled pulses with delays restricted to
integer sample shifts.  The closed forms model the principal
(same-sub-pulse) term only; the cross-sub-pulse coupling term is bounded
for small delays and vanishes identically at tau = 0, so the zero-delay
cut is exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .waveform import C0, DerivedParams


@dataclass(frozen=True)
class AmbiguityGrid:
    """Magnitude surface |chi| on a (delay, Doppler) grid."""

    delays_s: np.ndarray
    doppler_hz: np.ndarray
    magnitude: np.ndarray  # shape (len(delays_s), len(doppler_hz))


def _sinc(x: np.ndarray) -> np.ndarray:
    # sin(x)/x with sinc(0) = 1
    return np.sinc(np.asarray(x) / np.pi)


def ambiguity_numeric(
    signal: np.ndarray,
    params: DerivedParams,
    delay_samples: np.ndarray,
    doppler_hz: np.ndarray,
) -> AmbiguityGrid:
    """Evaluate |chi| from pulse samples on integer-sample delays.

    ``delay_samples`` must satisfy |d| < Ns (one sub-pulse width), the
    validity region of the principal-term model against which the result
    is compared.
    """
    s = np.asarray(signal, dtype=complex)
    d = np.asarray(delay_samples, dtype=int)
    if np.any(np.abs(d) >= params.Ns):
        raise ValueError(f"delays must satisfy |d| < Ns = {params.Ns} samples")
    xi = np.asarray(doppler_hz, dtype=float)
    n = len(s)
    prods = np.zeros((len(d), n), dtype=complex)
    for i, di in enumerate(d):
        if di >= 0:
            prods[i, : n - di] = s[: n - di] * np.conj(s[di:])
        else:
            prods[i, -di:] = s[-di:] * np.conj(s[: n + di])
    # fixed-order reduction; keeps CLI artifacts bit-reproducible
    phases = np.exp(2j * np.pi * np.outer(np.arange(n) / params.fs, xi))
    mag = np.abs(np.einsum("dn,nx->dx", prods, phases, optimize=False)) / params.fs
    return AmbiguityGrid(delays_s=d / params.fs, doppler_hz=xi, magnitude=mag)


def principal_closed_form(
    params: DerivedParams,
    indices: np.ndarray,
    delays_s: np.ndarray,
    doppler_hz: np.ndarray,
) -> AmbiguityGrid:
    """Principal-term |chi| for arbitrary (tau, xi) with |tau| < Ts.

    |chi| = (Ts-|tau|) * sinc(pi*(xi - Kc*tau)*(Ts-|tau|))
            * |sum_m exp(j*2*pi*(xi*m*Ts - a_m*Bs*tau))|
    """
    a = np.asarray(indices)
    tau = np.atleast_1d(np.asarray(delays_s, dtype=float))
    xi = np.atleast_1d(np.asarray(doppler_hz, dtype=float))
    if np.any(np.abs(tau) >= params.Ts):
        raise ValueError(f"principal term is valid for |tau| < Ts = {params.Ts:.3e} s")
    tg, xg = tau[:, None], xi[None, :]
    width = params.Ts - np.abs(tg)
    env = width * _sinc(np.pi * (xg - params.Kc * tg) * width)
    m = np.arange(len(a))
    comb = np.exp(
        2j * np.pi * (xg[..., None] * m * params.Ts - a * params.Bs * tg[..., None])
    ).sum(axis=-1)
    return AmbiguityGrid(delays_s=tau, doppler_hz=xi, magnitude=np.abs(env * comb))


def doppler_cut_closed_form(params: DerivedParams, doppler_hz: np.ndarray) -> np.ndarray:
    """Zero-delay cut |chi(0, xi)| = |Ts*sinc(pi*xi*Ts)*sin(pi*M*xi*Ts)/sin(pi*xi*Ts)|.

    At xi*Ts integer the Dirichlet ratio has the removable value M (up to
    sign), giving M*Ts*|sinc(pi*xi*Ts)| there.  Independent of the index
    sequence: at tau = 0 every sub-pulse overlaps only itself.
    """
    M = params.M
    xi = np.asarray(doppler_hz, dtype=float)
    x = np.pi * xi * params.Ts
    singular = np.abs(xi * params.Ts - np.round(xi * params.Ts)) < 1e-9
    denom = np.where(singular, 1.0, np.sin(x))
    ratio = np.where(singular, M * np.cos(M * x) / np.cos(x), np.sin(M * x) / denom)
    return np.abs(params.Ts * _sinc(x) * ratio)


def range_cut_closed_form(
    params: DerivedParams, indices: np.ndarray, delays_s: np.ndarray
) -> np.ndarray:
    """Zero-Doppler cut of the principal term, |tau| < Ts."""
    grid = principal_closed_form(params, indices, delays_s, np.zeros(1))
    return grid.magnitude[:, 0]


def resolution_bounds(params: DerivedParams) -> tuple[float, float]:
    """Slant-range resolution bounds (c/(2*Bw), c/(2*Bs)) in metres.

    The lower bound is reached when the M sub-bands tile the full band
    (a_m a permutation) and the upper when all sub-pulses share one
    sub-band.
    """
    return C0 / (2.0 * params.M * params.Bs), C0 / (2.0 * params.Bs)


def doppler_resolution(Tw: float) -> float:
    """First-null Doppler width 1/Tw of the zero-delay cut, in Hz."""
    return 1.0 / Tw
