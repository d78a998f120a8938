"""
Shared fixtures for chi2cav tests.

REF1 is the symmetric reference cavity: every decay rate 1e7 /s, unit couplings,
1064 nm pump (nu = 2.818e14 Hz), zero detuning.
"""

import json

import pytest

from chi2cav import CavityConfig, pump_drive, threshold_power

REF1_RATES = {
    "gamma1": 1e7,
    "gamma_s": 1e7,
    "gamma_i": 1e7,
    "mu1": 1.0,
    "mu2": 1.0,
    "nu": 2.818e14,
}


@pytest.fixture
def ref1():
    """The REF1 cavity configuration."""
    return CavityConfig.from_rates(**REF1_RATES)


@pytest.fixture
def ref1_threshold(ref1):
    """REF1 competition threshold (W)."""
    return threshold_power(ref1)


@pytest.fixture
def drive_at(ref1, ref1_threshold):
    """Factory for REF1 pump drives at N times threshold."""

    def make(n_scaled, config=None):
        config = ref1 if config is None else config
        return pump_drive(n_scaled * threshold_power(config), config.nu)

    return make


@pytest.fixture
def ref1_config_dict():
    """REF1 as a run-configuration object."""
    return {
        "gamma1": 1e7,
        "gamma_s": 1e7,
        "gamma_i": 1e7,
        "mu1": 1.0,
        "mu2": 1.0,
        "nu_hz": 2.818e14,
    }


@pytest.fixture
def config_file(tmp_path, ref1_config_dict):
    """Factory writing a run configuration (REF1 plus overrides) to a JSON file."""

    def write(**overrides):
        data = dict(ref1_config_dict)
        data.update(overrides)
        path = tmp_path / "config.json"
        path.write_text(json.dumps(data), encoding="utf-8")
        return path

    return write
