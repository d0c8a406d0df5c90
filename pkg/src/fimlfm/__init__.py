"""Simulation and analysis toolkit for a frequency-index-modulated LFM
waveform that serves SAR imaging and data transmission simultaneously."""

__version__ = "0.1.0"

from .ambiguity import (
    AmbiguityGrid,
    ambiguity_numeric,
    doppler_cut_closed_form,
    doppler_resolution,
    principal_closed_form,
    range_cut_closed_form,
    resolution_bounds,
)
from .comm import (
    BerReport,
    ChannelConfig,
    RxSubpulse,
    apply_channel,
    dechirp,
    demodulate_frame,
    detect_index,
    detect_qam,
    run_ber,
)
from .config import ConfigError, RunConfig, build_frame, parse_config
from .echo import (
    Acquisition,
    EchoCube,
    Geometry,
    PointTarget,
    default_prf,
    gate_subpulses,
    instantaneous_doppler,
    merge_subpulses,
    simulate_echo,
    slant_range,
)
from .imaging import (
    CompensationFilter,
    RangeCompressedMatrix,
    SarImage,
    azimuth_compress,
    build_compensation_filter,
    focus_rda,
    fullband_compress,
    rcmc,
    remove_qam,
    subpulse_compensate,
)
from .metrics import (
    DB_FLOOR,
    REPORT_COLUMNS,
    ProfileCut,
    TargetReport,
    extract_profiles,
    fft_interpolate,
    islr,
    measure_cut_resolution,
    pslr,
    report_row,
    report_target,
)
from .waveform import (
    C0,
    DerivedParams,
    FimFrame,
    WaveformConfig,
    derive_params,
    frame_to_bits,
    map_bits_to_frame,
    qam_constellation,
    synthesize_pulse,
    synthesize_train,
)

__all__ = [
    "AmbiguityGrid",
    "Acquisition",
    "BerReport",
    "C0",
    "ChannelConfig",
    "CompensationFilter",
    "ConfigError",
    "DB_FLOOR",
    "DerivedParams",
    "EchoCube",
    "FimFrame",
    "Geometry",
    "PointTarget",
    "ProfileCut",
    "REPORT_COLUMNS",
    "RangeCompressedMatrix",
    "RunConfig",
    "RxSubpulse",
    "SarImage",
    "TargetReport",
    "WaveformConfig",
    "ambiguity_numeric",
    "apply_channel",
    "azimuth_compress",
    "build_compensation_filter",
    "build_frame",
    "dechirp",
    "default_prf",
    "demodulate_frame",
    "derive_params",
    "detect_index",
    "detect_qam",
    "doppler_cut_closed_form",
    "doppler_resolution",
    "extract_profiles",
    "fft_interpolate",
    "focus_rda",
    "frame_to_bits",
    "fullband_compress",
    "gate_subpulses",
    "instantaneous_doppler",
    "islr",
    "map_bits_to_frame",
    "measure_cut_resolution",
    "merge_subpulses",
    "parse_config",
    "principal_closed_form",
    "pslr",
    "qam_constellation",
    "range_cut_closed_form",
    "rcmc",
    "remove_qam",
    "report_row",
    "report_target",
    "resolution_bounds",
    "run_ber",
    "simulate_echo",
    "slant_range",
    "subpulse_compensate",
    "synthesize_pulse",
    "synthesize_train",
    "__version__",
]
