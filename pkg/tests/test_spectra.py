"""
Tests for the second-harmonic squeezing spectra.
"""
import math

import numpy as np
import pytest

from chi2cav import (
    DomainError,
    SpectrumModel,
    SpectrumParams,
    UnsupportedRegimeError,
    continuity_check,
    spectrum_params,
    spectrum_sweep,
    v2_competition_general,
    v2_competition_symmetric,
    v2_no_competition,
)
from chi2cav.spectra import (
    eq5_eq6_comparison,
    gamma_nl_at,
    onset_squeezing,
    symmetric_minimum,
    to_db,
)


class TestNoCompetition:
    """Doubler-only spectrum."""

    def test_strong_nonlinearity_limit(self):
        """gamma_nl = 1e3 gamma1 at zero frequency approaches 1/9 (about -9.5 dB)."""
        params = SpectrumParams(gamma_nl=1e10, gamma1=1e7, gamma1_c=1e7)
        v = v2_no_competition(0.0, params)
        assert abs(v - 1.0 / 9.0) < 1e-3
        assert v == pytest.approx(0.11171, abs=1e-4)
        assert abs(to_db(v) - (-9.5)) < 0.05

    def test_no_nonlinearity_is_shot_noise(self):
        """Without nonlinear loss the output is coherent."""
        params = SpectrumParams(gamma_nl=0.0, gamma1=1e7, gamma1_c=1e7)
        np.testing.assert_array_equal(v2_no_competition([0.0, 1e7, 1e9], params), 1.0)

    def test_high_frequency_returns_to_shot_noise(self):
        """Squeezing vanishes far outside the cavity bandwidth."""
        params = SpectrumParams(gamma_nl=1e7, gamma1=1e7, gamma1_c=1e7)
        assert v2_no_competition(1e13, params) == pytest.approx(1.0, abs=1e-10)

    def test_scalar_in_scalar_out(self):
        """Scalars give floats, arrays give arrays."""
        params = SpectrumParams(gamma_nl=1e7, gamma1=1e7, gamma1_c=1e7)
        assert isinstance(v2_no_competition(0.0, params), float)
        assert v2_no_competition(np.zeros(3), params).shape == (3,)

    def test_negative_gamma_nl_rejected(self):
        """gamma_nl must be non-negative."""
        with pytest.raises(DomainError, match="gamma_nl"):
            SpectrumParams(gamma_nl=-1.0, gamma1=1e7, gamma1_c=1e7)

    def test_bounded_by_one_ninth(self):
        """With a coherent pump the spectrum stays in [1/9, 1)."""
        rng = np.random.default_rng(5)
        gamma1 = 1e7
        for _ in range(200):
            params = SpectrumParams(
                gamma_nl=gamma1 * 10.0 ** rng.uniform(-3.0, 6.0),
                gamma1=gamma1,
                gamma1_c=gamma1 * rng.uniform(0.1, 1.0),
            )
            v = v2_no_competition(gamma1 * rng.uniform(0.0, 1e3, size=50), params)
            assert np.all(v >= 1.0 / 9.0)
            assert np.all(v < 1.0)

    def test_onset_squeezing_at_optimum(self, ref1):
        """Just before competition the doubler reaches 1/2 at the symmetric optimum."""
        assert onset_squeezing(ref1) == pytest.approx(0.5, rel=1e-14)


class TestSymmetricCompetition:
    """Competition spectrum at the symmetric optimum."""

    @pytest.mark.parametrize("n, expected", [(1.001, 2001.0), (1.25, 9.0), (3.0, 2.0)])
    def test_zero_frequency_excess(self, n, expected):
        """V(0) = 1 + 2/(N - 1)."""
        assert v2_competition_symmetric(0.0, n) == pytest.approx(expected, rel=1e-9)

    def test_threshold_limit(self):
        """At N = 1 and zero frequency the limit 1/2 is returned."""
        assert v2_competition_symmetric(0.0, 1.0) == 0.5

    @pytest.mark.parametrize("n", [1.001, 1.25, 3.0])
    def test_squeezing_band(self, n):
        """Squeezing only where omega_hat^2 > N - 1."""
        w = np.linspace(0.0, 10.0, 4001)
        v = v2_competition_symmetric(w, n)
        away = np.abs(w ** 2 - (n - 1.0)) > 1e-9
        np.testing.assert_array_equal(v[away] < 1.0, w[away] ** 2 > n - 1.0)

    def test_minimum_at_three_times_threshold(self):
        """N = 3: minimum near omega_hat = 3.238 with V = 0.9622."""
        w, v = symmetric_minimum(3.0)
        assert w == pytest.approx(math.sqrt(2.0 + math.sqrt(72.0)), rel=1e-12)
        assert abs(w - 3.238) < 1e-3
        assert abs(v - 0.9622) < 1e-3

    @pytest.mark.parametrize("w", [0.5, 1.0, 3.0])
    def test_noise_pulled_to_shot_noise(self, w):
        """Far above threshold |V - 1| falls off as 2 / (N (4 omega_hat^2 + 1))."""
        n = np.logspace(math.log10(5.0), 4.0, 400)
        excess = np.array([abs(v2_competition_symmetric(w, x) - 1.0) for x in n])
        bound = 2.0 / (n * (4.0 * w ** 2 + 1.0))
        assert np.all(excess <= bound * (1.0 + 1e-12))
        assert excess[-1] == pytest.approx(bound[-1], rel=1e-3)

    @pytest.mark.parametrize("w", [0.5, 1.0, 3.0])
    def test_noise_pulling_monotone(self, w):
        """|V - 1| decreases in N once N - 1 - omega_hat^2 passes its peak."""
        c = 1.0 + w ** 2
        n_peak = c + 2.0 * w * c / math.sqrt(4.0 * w ** 2 + 1.0)
        n = np.logspace(math.log10(max(5.0, n_peak)), 4.0, 400)
        excess = np.array([abs(v2_competition_symmetric(w, x) - 1.0) for x in n])
        assert np.all(np.diff(excess) < 0.0)

    def test_shot_noise_crossing_inside_pulling_range(self):
        """At omega_hat = 3 the excess vanishes at N = 10 and then regrows."""
        assert v2_competition_symmetric(3.0, 10.0) == 1.0
        near = abs(v2_competition_symmetric(3.0, 12.0) - 1.0)
        assert abs(v2_competition_symmetric(3.0, 19.0) - 1.0) > near

    def test_below_threshold_rejected(self):
        """N < 1 has no competition spectrum."""
        with pytest.raises(DomainError, match="N >= 1"):
            v2_competition_symmetric(0.0, 0.9)


class TestGeneralCompetition:
    """Competition spectrum for general parameters."""

    def test_zero_frequency_matches_symmetric(self):
        """At zero frequency the general and symmetric forms agree."""
        for n in np.linspace(1.01, 10.0, 20):
            params = SpectrumParams.symmetric(1e7, n)
            assert v2_competition_general(0.0, params) == pytest.approx(
                v2_competition_symmetric(0.0, n), abs=1e-12
            )

    def test_comparison_harness(self):
        """The general form reduces to the symmetric one across the band."""
        comparison = eq5_eq6_comparison(
            np.linspace(1.01, 10.0, 10), np.logspace(-2.0, 2.0, 50), gamma1=1e7
        )
        assert comparison.zero_frequency_gap <= 1e-12
        assert comparison.band_gap <= 1e-9
        assert comparison.ratio_min == pytest.approx(1.0, abs=1e-5)
        assert comparison.ratio_max == pytest.approx(1.0, abs=1e-5)

    def test_needs_power_above_threshold(self):
        """N <= 1 is rejected."""
        with pytest.raises(DomainError, match="N > 1"):
            v2_competition_general(0.0, SpectrumParams.symmetric(1e7, 1.0))


class TestContinuity:
    """No-competition and competition spectra meet at threshold."""

    def test_gap_below_tolerance(self, ref1):
        """The two forms agree to 1e-12 at N = 1."""
        assert continuity_check(ref1) < 1e-12

    def test_asymmetric_rejected(self, ref1):
        """The check needs the symmetric optimum."""
        with pytest.raises(UnsupportedRegimeError):
            continuity_check(ref1.replace(gamma_s=2e7))


class TestParamsFromConfig:
    """Operating points taken from a configuration."""

    def test_ref1_params(self, ref1, drive_at):
        """At REF1 the competing branch has gamma_nl = N gamma1."""
        params = spectrum_params(ref1, drive_at(2.0))
        assert params.n_scaled == pytest.approx(2.0, rel=1e-12)
        assert params.gamma_f == pytest.approx(2e7, rel=1e-15)
        assert params.gamma_nl == pytest.approx(2e7, rel=1e-12)

    def test_doubler_operating_point(self, ref1, drive_at):
        """The doubler saturates below the competing branch."""
        competing = spectrum_params(ref1, drive_at(2.0))
        doubler = spectrum_params(ref1, drive_at(2.0), competition=False)
        assert 1e7 < doubler.gamma_nl < competing.gamma_nl

    def test_gamma_nl_zero_drive(self, ref1):
        """No pump, no nonlinear loss."""
        from chi2cav import pump_drive

        assert gamma_nl_at(ref1, pump_drive(0.0, ref1.nu)) == 0.0


class TestSweep:
    """Sampled spectra and minimum search."""

    def test_eq6_sweep_minimum(self):
        """Grid scan plus golden refinement finds the closed-form minimum."""
        params = SpectrumParams.symmetric(1e7, 3.0)
        grid = np.linspace(0.0, 10.0, 2001)
        spectrum = spectrum_sweep(SpectrumModel.EQ6, params, grid)
        w, v = symmetric_minimum(3.0)
        assert spectrum.omega_min == pytest.approx(w, abs=1e-4)
        assert spectrum.v_min == pytest.approx(v, abs=1e-9)
        np.testing.assert_allclose(spectrum.db, 10.0 * np.log10(spectrum.values))

    def test_eq6_frequency_conversion(self):
        """omega = 2 gamma1 omega_hat and f = omega / 2 pi."""
        spectrum = spectrum_sweep("eq6", SpectrumParams.symmetric(1e7, 2.0), [0.0, 1.0])
        np.testing.assert_allclose(spectrum.angular_frequencies(), [0.0, 2e7])
        expected = [0.0, 2e7 / (2.0 * math.pi)]
        np.testing.assert_allclose(spectrum.frequencies_hz(), expected)

    def test_eq4_sweep(self):
        """The doubler spectrum is smallest at zero frequency."""
        params = SpectrumParams(gamma_nl=5e6, gamma1=1e7, gamma1_c=1e7)
        spectrum = spectrum_sweep(SpectrumModel.EQ4, params, np.linspace(0.0, 2e8, 101))
        assert spectrum.omega_min == 0.0
        assert spectrum.v_min < 1.0

    def test_grid_must_ascend(self):
        """Non-ascending grids are rejected."""
        with pytest.raises(DomainError, match="ascending"):
            params = SpectrumParams.symmetric(1e7, 2.0)
            spectrum_sweep(SpectrumModel.EQ6, params, [1.0, 0.5])


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
