import numpy as np
from django.test import SimpleTestCase
from scipy.signal import get_window

from factorization.core.spectral import (
    best_component_envsi,
    detect_fundamental,
    envelope_spectrum,
    envsi,
    frame_count,
    stft_power_spectrogram,
)
from factorization.exceptions import DimensionError, DomainError
from factorization.models import EnvelopeSpectrum, SampledSignal


class StftTests(SimpleTestCase):
    def test_default_geometry(self):
        signal = SampledSignal(np.random.default_rng(0).standard_normal(50000), 50000.0)
        spec = stft_power_spectrogram(signal)
        self.assertEqual(spec.shape, (257, 1782))
        self.assertEqual(frame_count(50000, 128, 100), 1782)
        self.assertAlmostEqual(spec.frame_rate, 50000.0 / 28)
        self.assertAlmostEqual(spec.freq_resolution, 50000.0 / 512)
        self.assertTrue(np.all(spec.power >= 0))

    def test_constant_signal_lands_in_dc_bin(self):
        signal = SampledSignal(np.full(128, 2.0), 1000.0)
        spec = stft_power_spectrogram(signal, window='rectangular', overlap=0, nfft=128)
        self.assertEqual(spec.shape, (65, 1))
        self.assertAlmostEqual(spec.power[0, 0], (2.0 * 128) ** 2)
        self.assertLess(spec.power[1:, 0].max(), 1e-10 * spec.power[0, 0])

    def test_bin_centred_sinusoid_has_no_leakage(self):
        n = np.arange(64)
        signal = SampledSignal(np.sin(2 * np.pi * 5 * n / 64), 512.0)
        spec = stft_power_spectrogram(signal, window_len=64, overlap=0, nfft=64, window='rectangular')
        column = spec.power[:, 0]
        self.assertAlmostEqual(column[5], 32.0 ** 2, places=8)
        self.assertLessEqual(np.delete(column, 5).max(), 1e-10 * column[5])

    def test_power_matches_frame_energy(self):
        rng = np.random.default_rng(1)
        signal = SampledSignal(rng.standard_normal(1000), 8000.0)
        window_len, overlap, nfft = 128, 64, 256
        spec = stft_power_spectrogram(signal, window_len, overlap, nfft)
        P = spec.power
        one_sided = P[0] + 2.0 * P[1:-1].sum(axis=0) + P[-1]
        taper = get_window('hann', window_len)
        hop = window_len - overlap
        for t in range(P.shape[1]):
            frame = signal.samples[t * hop:t * hop + window_len] * taper
            self.assertAlmostEqual(one_sided[t] / (nfft * np.sum(frame ** 2)), 1.0, places=10)

    def test_magnitude_option(self):
        signal = SampledSignal(np.random.default_rng(2).standard_normal(512), 1000.0)
        power = stft_power_spectrogram(signal, power=True).power
        magnitude = stft_power_spectrogram(signal, power=False).power
        np.testing.assert_allclose(magnitude ** 2, power, rtol=1e-12)

    def test_invalid_parameters(self):
        signal = SampledSignal(np.ones(512), 1000.0)
        with self.assertRaises(DomainError):
            stft_power_spectrogram(signal, window_len=128, overlap=128)
        with self.assertRaises(DomainError):
            stft_power_spectrogram(signal, window_len=256, nfft=128)
        with self.assertRaises(DomainError):
            stft_power_spectrogram(signal, window='kaiser')

    def test_short_signal(self):
        with self.assertRaises(DimensionError) as ctx:
            stft_power_spectrogram(SampledSignal(np.ones(100), 1000.0))
        self.assertIn('at least 128', str(ctx.exception))

    def test_requires_sampled_signal(self):
        with self.assertRaises(TypeError):
            stft_power_spectrogram(np.ones(512))


class EnvelopeTests(SimpleTestCase):
    def test_periodic_activation_peaks_at_its_rate(self):
        t = np.arange(100) / 100.0
        activation = 1.0 + np.cos(2 * np.pi * 10 * t)
        spec = envelope_spectrum(activation, frame_rate=100.0)
        self.assertAlmostEqual(spec.bin_hz, 1.0)
        self.assertLess(spec.magnitudes[0], 1e-9)
        self.assertEqual(int(np.argmax(spec.magnitudes)), 10)
        self.assertEqual(detect_fundamental(spec, (5.0, 20.0)), 10.0)

    def test_too_short(self):
        with self.assertRaises(DimensionError):
            envelope_spectrum(np.ones(7), 100.0)

    def test_all_zero(self):
        with self.assertRaises(DomainError):
            envelope_spectrum(np.zeros(16), 100.0)

    def test_empty_search_band(self):
        spec = EnvelopeSpectrum(np.ones(11), bin_hz=10.0)
        with self.assertRaises(DomainError):
            detect_fundamental(spec, (0.0, 5.0))
        with self.assertRaises(DomainError):
            detect_fundamental(spec, (50.0, 20.0))


class EnvsiTests(SimpleTestCase):
    def test_flat_spectrum(self):
        spec = EnvelopeSpectrum(np.ones(101), bin_hz=1.0)
        self.assertAlmostEqual(envsi(spec, 10.0, M1=6, tolerance=0), 6 / 100)
        self.assertAlmostEqual(envsi(spec, 10.0, M1=6, M2=60, tolerance=0), 6 / 60)

    def test_energy_only_at_harmonics(self):
        magnitudes = np.zeros(101)
        magnitudes[[10, 20, 30, 40, 50, 60]] = [6.0, 5.0, 4.0, 3.0, 2.0, 1.0]
        spec = EnvelopeSpectrum(magnitudes, bin_hz=1.0)
        self.assertAlmostEqual(envsi(spec, 10.0, M1=6, tolerance=1), 1.0)

    def test_tolerance_catches_offset_peak(self):
        magnitudes = np.zeros(101)
        magnitudes[11] = 1.0
        spec = EnvelopeSpectrum(magnitudes, bin_hz=1.0)
        self.assertEqual(envsi(spec, 10.0, M1=1, tolerance=0), 0.0)
        self.assertAlmostEqual(envsi(spec, 10.0, M1=1, tolerance=1), 1.0)

    def test_harmonic_beyond_nyquist(self):
        spec = EnvelopeSpectrum(np.ones(101), bin_hz=1.0)
        with self.assertRaises(DomainError):
            envsi(spec, 30.0, M1=6)
        self.assertAlmostEqual(envsi(spec, 30.0, M1=6, tolerance=0, truncate=True), 3 / 100)

    def test_silent_spectrum(self):
        self.assertEqual(envsi(EnvelopeSpectrum(np.zeros(51), bin_hz=1.0), 10.0, M1=2), 0.0)

    def test_best_component(self):
        t = np.arange(200) / 100.0
        H = np.vstack([
            np.zeros(200),
            1.0 + np.cos(2 * np.pi * 10 * t),
            np.random.default_rng(3).uniform(0.0, 1.0, 200),
        ])
        best, scores = best_component_envsi(H, 100.0, 10.0, M1=3)
        self.assertEqual(scores[0], 0.0)
        self.assertEqual(best, scores[1])
        self.assertGreater(scores[1], 0.99)
