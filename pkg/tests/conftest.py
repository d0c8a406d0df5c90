"""Shared fixtures: the reference parameter set and a smaller fast one."""

from pathlib import Path

import pytest

from fimlfm import Geometry, WaveformConfig, derive_params


@pytest.fixture(scope="session")
def sec4_cfg():
    return WaveformConfig(fc=3.2e9, Bw=80e6, Tw=40e-6, M=4, J=4)


@pytest.fixture(scope="session")
def sec4_params(sec4_cfg):
    return derive_params(sec4_cfg)


@pytest.fixture(scope="session")
def sec4_geom():
    return Geometry(h=20e3, v=100.0, depression_deg=60.0)


@pytest.fixture(scope="session")
def small_cfg():
    # same structure at a tenth of the bandwidth: q=5, fs=10 MHz, Ns=100, L=20
    return WaveformConfig(fc=1.0e9, Bw=8e6, Tw=40e-6, M=4, J=4)


@pytest.fixture(scope="session")
def small_params(small_cfg):
    return derive_params(small_cfg)


@pytest.fixture(scope="session")
def repo_root():
    return Path(__file__).resolve().parent.parent


@pytest.fixture(scope="session")
def shipped_cfg(repo_root):
    path = repo_root / "paper_sec4.cfg"
    assert path.is_file(), "reference config missing from repository root"
    return path
