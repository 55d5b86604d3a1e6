import numpy as np
from django.test import SimpleTestCase

from factorization.core.datagen import add_noise, impulsive_signal, nonzero_count, synth_factors
from factorization.core.metrics import sparsity
from factorization.core.spectral import detect_fundamental, envelope_spectrum, envsi, stft_power_spectrogram
from factorization.exceptions import ConfigError, DomainError
from factorization.models import SynthSpec


class SynthFactorsTests(SimpleTestCase):
    def test_default_densities(self):
        W, H, X = synth_factors(SynthSpec(m=100, n=70, r=3, density_W=0.1, density_H=0.7, seed=0))
        self.assertEqual(np.count_nonzero(W), 30)
        self.assertEqual(np.count_nonzero(H), 147)
        self.assertEqual(sparsity(W), 90.0)
        self.assertTrue(np.all(W.any(axis=0)))
        self.assertTrue(np.all(H.any(axis=1)))
        self.assertTrue(np.all((W >= 0) & (W <= 1)))
        np.testing.assert_array_equal(X, W @ H)

    def test_deterministic_per_seed(self):
        spec = SynthSpec(m=20, n=15, r=2, seed=7)
        first, second = synth_factors(spec), synth_factors(spec)
        for a, b in zip(first, second):
            np.testing.assert_array_equal(a, b)
        other = synth_factors(SynthSpec(m=20, n=15, r=2, seed=8))
        self.assertFalse(np.array_equal(first[0], other[0]))

    def test_nonzero_count_rounds_half_up(self):
        self.assertEqual(nonzero_count(0.1, 300), 30)
        self.assertEqual(nonzero_count(0.7, 210), 147)
        self.assertEqual(nonzero_count(0.5, 5), 3)

    def test_density_too_low_to_cover_components(self):
        with self.assertRaises(DomainError):
            synth_factors(SynthSpec(m=100, n=70, r=3, density_W=0.001))

    def test_invalid_spec(self):
        with self.assertRaises(ConfigError):
            SynthSpec(density_W=0.0)
        with self.assertRaises(ConfigError):
            SynthSpec(m=2, n=5, r=3)


class NoiseTests(SimpleTestCase):
    def test_zero_noise_is_a_copy(self):
        X = np.ones((3, 3))
        Y = add_noise(X, 0.0, seed=1)
        np.testing.assert_array_equal(X, Y)
        self.assertIsNot(X, Y)

    def test_noise_is_clipped_and_seeded(self):
        X = np.zeros((50, 50))
        Y = add_noise(X, 0.5, seed=[3, 2])
        self.assertTrue(np.all(Y >= 0))
        self.assertGreater(np.count_nonzero(Y), 0)
        np.testing.assert_array_equal(Y, add_noise(X, 0.5, seed=[3, 2]))

    def test_error_grows_with_level(self):
        X = np.random.default_rng(4).uniform(0.5, 1.0, (20, 15))
        errors = [np.linalg.norm(add_noise(X, level, seed=[4, 2]) - X) for level in (0.01, 0.1, 1.0)]
        self.assertTrue(errors[0] < errors[1] < errors[2], errors)
        # no entry is clipped at the two small levels, so the error is linear there
        self.assertAlmostEqual(errors[1] / errors[0], 10.0, places=6)

    def test_negative_level(self):
        with self.assertRaises(DomainError):
            add_noise(np.ones((2, 2)), -0.1, seed=0)


class ImpulsiveSignalTests(SimpleTestCase):
    def test_envelope_reveals_fault_rate(self):
        signal = impulsive_signal(50000.0, 1.0, 91.0, 3000.0, 800.0, 0.3, seed=[0, 3])
        self.assertEqual(signal.samples.size, 50000)
        spec = stft_power_spectrogram(signal)
        # carrier band energy over time follows the impact train
        band = spec.power[25:38].sum(axis=0)
        envelope = envelope_spectrum(band, spec.frame_rate)
        self.assertLess(abs(detect_fundamental(envelope, (50.0, 150.0)) - 91.0), 2 * envelope.bin_hz)

    def band_envsi(self, noise_sigma, amplitude=1.0):
        signal = impulsive_signal(50000.0, 1.0, 91.0, 3000.0, 800.0, noise_sigma, seed=[0, 3], amplitude=amplitude)
        band = stft_power_spectrogram(signal).power[25:38].sum(axis=0)
        return envsi(envelope_spectrum(band, 50000.0 / 28), 91.0, M1=6)

    def test_indicator_rises_with_snr(self):
        scores = [self.band_envsi(sigma) for sigma in (2.0, 0.5, 0.05)]
        self.assertTrue(scores[0] < scores[1] < scores[2], scores)

    def test_impulse_train_scores_above_pure_noise(self):
        fault = self.band_envsi(0.3)
        noise = self.band_envsi(0.3, amplitude=0.0)
        self.assertLess(noise, 0.1)
        self.assertGreater(fault, 5.0 * noise)

    def test_pure_noise_control(self):
        signal = impulsive_signal(1000.0, 1.0, 10.0, 100.0, 50.0, 0.0, seed=0, amplitude=0.0)
        np.testing.assert_array_equal(signal.samples, np.zeros(1000))

    def test_invalid_parameters(self):
        with self.assertRaises(DomainError):
            impulsive_signal(1000.0, 1.0, 600.0, 100.0, 50.0, 0.1, seed=0)
        with self.assertRaises(DomainError):
            impulsive_signal(1000.0, -1.0, 10.0, 100.0, 50.0, 0.1, seed=0)
