"""Profile metrics: widths, sidelobe ratios, and peak extraction."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fimlfm import (
    DB_FLOOR,
    REPORT_COLUMNS,
    ProfileCut,
    SarImage,
    TargetReport,
    extract_profiles,
    fft_interpolate,
    islr,
    measure_cut_resolution,
    pslr,
    report_row,
)


def _sinc_cut(extent=20, n_per=400, scale=1.0):
    x = np.linspace(-extent, extent, 2 * extent * n_per + 1)
    return ProfileCut(positions=x, values=scale * np.abs(np.sinc(x)))


# frozen from a dense evaluation cross-checked against quadrature of
# sinc^2: the analytic -3 dB half width is 0.4429467..., the +-20-lobe
# energy integral 0.9949346, first sidelobe -13.2615 dB
def test_sinc_width_3db():
    assert measure_cut_resolution(_sinc_cut(), "-3db") == pytest.approx(0.885892, abs=2e-5)


def test_sinc_width_rect():
    assert measure_cut_resolution(_sinc_cut(), "rect") == pytest.approx(0.994935, abs=2e-4)


def test_sinc_pslr():
    assert pslr(_sinc_cut()) == pytest.approx(-13.2615, abs=0.01)


def test_sinc_islr_extent_dependence():
    assert islr(_sinc_cut(20)) == pytest.approx(-9.9129, abs=0.01)
    assert islr(_sinc_cut(30)) == pytest.approx(-9.8340, abs=0.01)


@given(scale=st.floats(1e-6, 1e6), phase=st.floats(0, 2 * np.pi))
@settings(max_examples=20, deadline=None)
def test_metrics_scale_invariant(scale, phase):
    base = _sinc_cut(10, 100)
    scaled = ProfileCut(base.positions, np.abs(scale * np.exp(1j * phase) * base.values))
    for conv in ("-3db", "rect"):
        assert measure_cut_resolution(scaled, conv) == pytest.approx(
            measure_cut_resolution(base, conv), rel=1e-9
        )
    assert pslr(scaled) == pytest.approx(pslr(base), abs=1e-9)
    assert islr(scaled) == pytest.approx(islr(base), abs=1e-9)


def test_triangle_has_no_sidelobes():
    x = np.linspace(-3, 3, 1201)
    cut = ProfileCut(x, np.maximum(1.0 - np.abs(x), 0.0))
    assert pslr(cut) == DB_FLOOR
    assert islr(cut) == DB_FLOOR
    assert measure_cut_resolution(cut, "-3db") == pytest.approx(2 - np.sqrt(2), abs=1e-3)


def test_width_requires_contained_crossing():
    x = np.linspace(-0.2, 0.2, 81)  # cut ends above half power
    with pytest.raises(ValueError, match="crossing"):
        measure_cut_resolution(ProfileCut(x, np.abs(np.sinc(x))), "-3db")
    with pytest.raises(ValueError):
        measure_cut_resolution(ProfileCut(x, np.zeros_like(x)), "-3db")
    with pytest.raises(ValueError, match="convention"):
        measure_cut_resolution(_sinc_cut(), "-6db")


def test_profile_cut_properties():
    x = np.linspace(5.0, 6.0, 11)
    v = np.zeros(11)
    v[7] = 2.0
    cut = ProfileCut(x, v)
    assert cut.spacing == pytest.approx(0.1)
    assert cut.peak_index == 7
    assert cut.peak_position == pytest.approx(5.7)
    with pytest.raises(ValueError):
        ProfileCut(x, v[:-1])


def test_fft_interpolate_tone_exact():
    n, factor = 32, 4
    tone = np.exp(2j * np.pi * 3 * np.arange(n) / n)
    fine = fft_interpolate(tone, factor, "positive")
    expect = np.exp(2j * np.pi * 3 * np.arange(n * factor) / (n * factor))
    np.testing.assert_allclose(fine, expect, atol=1e-12)


def test_fft_interpolate_centered_real():
    n, factor = 64, 8
    x = np.cos(2 * np.pi * 2 * np.arange(n) / n) + 0.3
    fine = fft_interpolate(x, factor, "centered")
    expect = np.cos(2 * np.pi * 2 * np.arange(n * factor) / (n * factor)) + 0.3
    np.testing.assert_allclose(fine.real, expect, atol=1e-12)
    np.testing.assert_allclose(fine.imag, 0.0, atol=1e-12)
    np.testing.assert_allclose(fft_interpolate(x, 1, "centered"), x)


def test_fft_interpolate_validation():
    with pytest.raises(ValueError):
        fft_interpolate(np.ones(8), 0)
    with pytest.raises(ValueError, match="band"):
        fft_interpolate(np.ones(8), 2, "sideways")


def _separable_image(k_frac, n_frac, wa=4.0, wr=3.0, K=64, N=96):
    az = (np.arange(K) - k_frac) / wa
    rg = (np.arange(N) - n_frac) / wr
    # range rows ride a positive-frequency carrier, matching the analytic
    # spectrum convention of the compressed range profiles
    carrier = np.exp(2j * np.pi * 0.4 * np.arange(N))
    data = np.outer(np.sinc(az), np.sinc(rg) * carrier)
    return SarImage(
        data=data,
        slant_range_m=1000.0 + np.arange(N) * 1.5,
        azimuth_m=np.arange(K) * 1.0,
        fs=1e8,
        prf=100.0,
    )


def test_extract_profiles_recovers_fractional_peak():
    img = _separable_image(k_frac=30.31, n_frac=50.77)
    rng_cut, az_cut = extract_profiles(img, azimuth_m=30.0, range_m=1000.0 + 50 * 1.5)
    assert rng_cut.peak_position == pytest.approx(1000.0 + 50.77 * 1.5, abs=0.05)
    assert az_cut.peak_position == pytest.approx(30.31, abs=0.05)
    # separable sinc widths scale with the synthetic lobe spacing
    assert measure_cut_resolution(rng_cut, "-3db") == pytest.approx(0.885892 * 3 * 1.5, rel=0.01)
    assert measure_cut_resolution(az_cut, "-3db") == pytest.approx(0.885892 * 4 * 1.0, rel=0.01)


def test_extract_profiles_rejects_empty_neighbourhood():
    img = _separable_image(k_frac=10.0, n_frac=10.0)
    with pytest.raises(ValueError, match="no peak"):
        extract_profiles(img, azimuth_m=55.0, range_m=1000.0 + 90 * 1.5)


def test_report_row_matches_columns():
    r = TargetReport(
        label="T", range_resolution_m=1.0, azimuth_resolution_m=2.0,
        range_pslr_db=-13.0, azimuth_pslr_db=-12.0, range_islr_db=-10.0,
        azimuth_islr_db=-9.0, peak_range_m=100.0, peak_azimuth_m=5.0,
        peak_range_bin=4.0, peak_azimuth_bin=3.0, convention="rect",
    )
    row = report_row(r)
    assert len(row) == len(REPORT_COLUMNS) == 10
    assert REPORT_COLUMNS[0] == "target"
    assert REPORT_COLUMNS[-1] == "width_convention"
    assert row[0] == "T"
    assert row[-1] == "rect"
