"""Tests for interference reconstruction, subtraction, and the residual-power
law with its sub-noise threshold."""

import numpy as np
import pytest

from fdsic.cancellation import (
    cancel,
    find_threshold_n0,
    predicted_residual_power,
    reconstruct,
)
from fdsic.estimation import ls_estimate
from fdsic.signal_model import (
    ConvolutionMatrix,
    NoiseSpec,
    build_convolution_matrix,
    generate_symbols,
    noise_for_taps,
    resolve_noise,
    sample_channel,
    transmit,
)

from oracles import direct_convolution, pinv_apply

SEED = 11


def _estimated_instance(n, k, seed, noise=None):
    noise = noise if noise is not None else resolve_noise(10, 20, k)
    x = generate_symbols(n, "bpsk", seed)
    h = sample_channel(k, seed)
    X = build_convolution_matrix(x, k)
    frame = transmit(x, h, noise, seed, matrix=X)
    estimate = ls_estimate(X, frame.samples)
    return x, h, X, frame, estimate


class TestReconstruct:
    def test_true_taps_reproduce_noiseless_frame(self):
        x = generate_symbols(200, "bpsk", SEED)
        h = sample_channel(5, SEED)
        X = build_convolution_matrix(x, 5)
        frame = transmit(x, h, NoiseSpec.from_sigma_w2(0.0), SEED, matrix=X)
        np.testing.assert_array_equal(reconstruct(X, h), frame.samples)

    def test_zero_taps_give_zero(self):
        x = generate_symbols(50, "bpsk", SEED)
        X = build_convolution_matrix(x, 3)
        np.testing.assert_array_equal(reconstruct(X, np.zeros(3)), np.zeros(50))

    def test_matches_direct_convolution(self):
        """Reconstruction is the truncated convolution of symbols and taps."""
        rng = np.random.default_rng(SEED)
        for _ in range(20):
            n = int(rng.integers(2, 64))
            k = int(rng.integers(1, n + 1))
            x = generate_symbols(n, "qpsk", int(rng.integers(0, 2**32)))
            taps = (rng.standard_normal(k) + 1j * rng.standard_normal(k)) / np.sqrt(2)
            X = build_convolution_matrix(x, k)
            np.testing.assert_allclose(
                reconstruct(X, taps), direct_convolution(x.symbols, taps), atol=1e-12
            )

    def test_dimension_mismatch_rejected(self):
        x = generate_symbols(10, "bpsk", SEED)
        X = build_convolution_matrix(x, 2)
        with pytest.raises(ValueError):
            reconstruct(X, np.zeros(3))


class TestCancel:
    def test_perfect_estimate(self):
        """With the true taps the leftover interference vanishes and the
        practical residual is exactly the noise."""
        _, h, X, frame, _ = _estimated_instance(300, 6, SEED)
        result = cancel(frame, X, h)
        scale = np.max(np.abs(frame.samples))
        np.testing.assert_allclose(result.analysis_residual, 0.0, atol=1e-12 * scale)
        np.testing.assert_allclose(
            result.practical_residual, frame.noise_realization, atol=1e-12 * scale
        )

    def test_residuals_differ_by_noise(self):
        _, _, X, frame, estimate = _estimated_instance(200, 4, SEED)
        result = cancel(frame, X, estimate)
        np.testing.assert_allclose(
            result.practical_residual - result.analysis_residual,
            frame.noise_realization,
            atol=1e-12 * np.max(np.abs(frame.samples)),
        )

    def test_analysis_residual_is_projected_noise(self):
        """With the LS estimate the leftover equals -X X^dagger w."""
        _, _, X, frame, estimate = _estimated_instance(250, 5, SEED)
        result = cancel(frame, X, estimate)
        projected = X.entries @ pinv_apply(X.entries, frame.noise_realization)
        np.testing.assert_allclose(result.analysis_residual, -projected, atol=1e-10)

    def test_residual_identity(self):
        """analysis_residual + X h_hat + w reassembles the received frame."""
        _, _, X, frame, estimate = _estimated_instance(150, 3, SEED)
        result = cancel(frame, X, estimate)
        rebuilt = result.analysis_residual + X.entries @ estimate.taps + frame.noise_realization
        np.testing.assert_allclose(rebuilt, frame.samples, atol=1e-10)

    def test_projection_contraction(self):
        """The leftover never carries more energy than the noise that caused it."""
        for seed in range(50):
            _, _, X, frame, estimate = _estimated_instance(100, 8, seed)
            result = cancel(frame, X, estimate)
            assert (
                np.sum(np.abs(result.analysis_residual) ** 2)
                <= np.sum(np.abs(frame.noise_realization) ** 2)
            )

    def test_predicted_power_field(self):
        _, _, X, frame, estimate = _estimated_instance(500, 5, SEED)
        result = cancel(frame, X, estimate)
        assert result.predicted_power == 5 * frame.noise_spec.sigma_w2 / 500

    def test_below_noise_flag(self):
        """The flag compares the analysis power against the AWGN floor.

        Frame lengths sit far on either side of the threshold so one trial
        decides the flag with a wide statistical margin.
        """
        k = 20
        noise = noise_for_taps(k, 10.0, 20.0)
        _, _, X, frame, estimate = _estimated_instance(250, k, SEED, noise=noise)
        assert cancel(frame, X, estimate).below_noise is False
        n_far = 4 * find_threshold_n0(k, noise.sigma_w2, noise.sigma_n2)
        _, _, X, frame, estimate = _estimated_instance(n_far, k, SEED, noise=noise)
        assert cancel(frame, X, estimate).below_noise is True

    def test_variance_law_monte_carlo(self):
        """Mean analysis-residual power tracks k sigma_w2 / n within 5%."""
        k, n, trials = 5, 500, 2000
        noise = noise_for_taps(k, 10.0, 20.0)
        total = 0.0
        for seed in range(trials):
            _, _, X, frame, estimate = _estimated_instance(n, k, seed, noise=noise)
            total += cancel(frame, X, estimate).empirical_analysis_power
        assert total / trials == pytest.approx(k * noise.sigma_w2 / n, rel=0.05)

    def test_monotone_decay_with_frame_length(self):
        """Mean residual power strictly decreases across n in {500, 2000, 8000}."""
        k = 20
        noise = noise_for_taps(k, 10.0, 20.0)
        means = []
        for n in [500, 2000, 8000]:
            total = 0.0
            trials = 60
            for seed in range(trials):
                _, _, X, frame, estimate = _estimated_instance(n, k, seed, noise=noise)
                total += cancel(frame, X, estimate).empirical_analysis_power
            means.append(total / trials)
        assert means[0] > means[1] > means[2]

    def test_dimension_mismatch_rejected(self):
        _, _, X, frame, estimate = _estimated_instance(60, 2, SEED)
        short = build_convolution_matrix(generate_symbols(30, "bpsk", SEED), 2)
        with pytest.raises(ValueError):
            cancel(frame, short, estimate)


class TestPredictedResidualPower:
    def test_zero_noise(self):
        assert predicted_residual_power(20, 0.0, 2000) == 0.0

    def test_reference_value(self):
        assert predicted_residual_power(20, 2.02, 2000) == pytest.approx(0.0202, rel=1e-12)

    def test_exactly_at_threshold(self):
        """At n = 2020 the predicted power sits exactly on the AWGN floor."""
        assert predicted_residual_power(20, 2.02, 2020) == 0.02

    def test_invalid_inputs(self):
        with pytest.raises(ValueError):
            predicted_residual_power(20, 2.02, 19)
        with pytest.raises(ValueError):
            predicted_residual_power(0, 2.02, 100)
        with pytest.raises(ValueError):
            predicted_residual_power(2, -1.0, 100)


class TestFindThresholdN0:
    def test_reference_case(self):
        """Defaults at k=20 give the first sub-noise length 2021."""
        assert find_threshold_n0(20, 2.02, 0.02) == 2021

    def test_boundary_needs_strict_inequality(self):
        """k=1, sigma_w2=1, sigma_n2=1: n=1 only reaches equality, so n0=2."""
        assert find_threshold_n0(1, 1.0, 1.0) == 2

    def test_grows_with_channel_length(self):
        """Longer channels push the threshold out (about proportionally)."""
        n20 = find_threshold_n0(20, 2.02, 0.02)
        n40 = find_threshold_n0(40, 2.02, 0.02)
        assert n40 > n20
        assert n40 == 4041

    def test_consistent_with_power_law(self):
        """The returned length is the first with predicted power below floor."""
        for k, sigma_w2, sigma_n2 in [(20, 2.02, 0.02), (5, 0.505, 0.005), (3, 1.7, 0.4)]:
            n0 = find_threshold_n0(k, sigma_w2, sigma_n2)
            assert predicted_residual_power(k, sigma_w2, n0) < sigma_n2
            if n0 - 1 >= k:
                assert predicted_residual_power(k, sigma_w2, n0 - 1) >= sigma_n2

    def test_invalid_inputs(self):
        with pytest.raises(ValueError):
            find_threshold_n0(20, 2.02, 0.0)
        with pytest.raises(ValueError):
            find_threshold_n0(20, 2.02, -0.1)
        with pytest.raises(ValueError):
            find_threshold_n0(0, 2.02, 0.02)
