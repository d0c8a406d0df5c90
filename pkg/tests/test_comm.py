"""Communication receiver: dechirp, detection, channel, BER harness."""

import numpy as np
import pytest

from fimlfm import (
    ChannelConfig,
    apply_channel,
    dechirp,
    demodulate_frame,
    detect_index,
    detect_qam,
    map_bits_to_frame,
    qam_constellation,
    run_ber,
    synthesize_pulse,
)


def test_noise_variance_rule():
    c = ChannelConfig(snr_db=10.0)
    cfg_P = 2.0
    assert c.noise_var(cfg_P) == pytest.approx(0.4)
    assert ChannelConfig().noise_var(cfg_P) == 0.0
    with pytest.raises(ValueError):
        ChannelConfig(sigma2=0.0)


def _subpulse(cfg, params, a, symbol=1.0 + 0.0j):
    indices = np.full(cfg.M, 0)
    indices[0] = a
    symbols = np.ones(cfg.M, dtype=complex)
    symbols[0] = symbol
    s = synthesize_pulse(cfg, params, indices, symbols)
    return s[: params.Ns]


def test_tone_projections_orthogonal(sec4_cfg, sec4_params):
    # noiseless statistics of the wrong sub-bands sit at numerical zero
    for a in range(sec4_cfg.M):
        y = dechirp(_subpulse(sec4_cfg, sec4_params, a), sec4_params)
        a_hat, D = detect_index(y, sec4_params)
        assert a_hat == a
        wrong = np.delete(D, a)
        assert wrong.max() < 1e-20 * D[a]


def test_detect_index_candidate_guard(sec4_cfg, sec4_params):
    y = dechirp(_subpulse(sec4_cfg, sec4_params, 1), sec4_params)
    with pytest.raises(ValueError):
        detect_index(y, sec4_params, candidates=0)
    with pytest.raises(ValueError):
        detect_index(y, sec4_params, candidates=sec4_cfg.M + 1)
    a_hat, D = detect_index(y, sec4_params, candidates=2)
    assert len(D) == 2 and a_hat == 1


def test_detect_qam_with_channel_gain(sec4_cfg, sec4_params):
    const = qam_constellation(sec4_cfg.J)
    h = 0.6 - 1.1j
    for label in range(sec4_cfg.J):
        y = h * dechirp(_subpulse(sec4_cfg, sec4_params, 2, const[label]), sec4_params)
        assert detect_qam(y, 2, h, sec4_cfg, sec4_params) == label


def test_apply_channel_keyed_substreams(sec4_cfg, sec4_params):
    tx = _subpulse(sec4_cfg, sec4_params, 1)
    chan = ChannelConfig(snr_db=10.0, seed=9)
    a = apply_channel(tx, chan, sec4_cfg, k=3, m=1)
    b = apply_channel(tx, chan, sec4_cfg, k=3, m=1)
    c = apply_channel(tx, chan, sec4_cfg, k=3, m=2)
    assert a.h == b.h
    np.testing.assert_array_equal(a.samples, b.samples)
    assert a.h != c.h


def test_apply_channel_noiseless_is_pure_gain(sec4_cfg, sec4_params):
    tx = _subpulse(sec4_cfg, sec4_params, 2)
    rx = apply_channel(tx, ChannelConfig(seed=4), sec4_cfg)
    np.testing.assert_allclose(rx.samples, rx.h * tx, rtol=1e-15)


def test_noiseless_loopback_exact(sec4_cfg, sec4_params):
    rng = np.random.default_rng(12)
    chan = ChannelConfig(seed=21)
    for trial in range(10):
        bits = rng.integers(0, 2, size=2 * sec4_params.bits_per_pulse).astype(np.uint8)
        frame = map_bits_to_frame(bits, sec4_cfg, sec4_params)
        rx = []
        for k in range(frame.n_pulses):
            idx, sym = frame.pulse(k)
            pulse = synthesize_pulse(sec4_cfg, sec4_params, idx, sym)
            for m in range(sec4_cfg.M):
                rx.append(apply_channel(pulse[m * sec4_params.Ns:(m + 1) * sec4_params.Ns],
                                        chan, sec4_cfg, k=trial * 2 + k, m=m))
        out = demodulate_frame(rx, sec4_cfg, sec4_params)
        np.testing.assert_array_equal(out, bits)


def test_demodulate_rejects_ragged_input(sec4_cfg, sec4_params):
    tx = _subpulse(sec4_cfg, sec4_params, 0)
    rx = [apply_channel(tx, ChannelConfig(), sec4_cfg)] * 3
    with pytest.raises(ValueError, match="multiple of M"):
        demodulate_frame(rx, sec4_cfg, sec4_params)


def test_run_ber_deterministic_and_consistent(sec4_cfg, sec4_params):
    snrs = [0.0, 10.0, 20.0]
    a = run_ber(sec4_cfg, sec4_params, snrs, trials=3000, seed=7)
    b = run_ber(sec4_cfg, sec4_params, snrs, trials=3000, seed=7)
    c = run_ber(sec4_cfg, sec4_params, snrs, trials=3000, seed=8)
    assert a.index_errors == b.index_errors and a.qam_errors == b.qam_errors
    assert (a.index_errors, a.qam_errors) != (c.index_errors, c.qam_errors)
    # bookkeeping invariants
    assert a.total_errors == tuple(i + q for i, q in zip(a.index_errors, a.qam_errors))
    assert a.index_bits == 3000 * sec4_cfg.M * sec4_params.bits_index
    assert a.qam_bits == 3000 * sec4_cfg.M * sec4_params.bits_qam
    for ber, err, nb in ((a.index_ber, a.index_errors, a.index_bits),
                         (a.qam_ber, a.qam_errors, a.qam_bits)):
        assert ber == tuple(e / nb for e in err)
    # errors drop by orders of magnitude over 20 dB of SNR
    assert a.total_errors[0] > 20 * max(a.total_errors[2], 1)


def test_run_ber_validation(sec4_cfg, sec4_params):
    with pytest.raises(ValueError):
        run_ber(sec4_cfg, sec4_params, [10.0], trials=0)
