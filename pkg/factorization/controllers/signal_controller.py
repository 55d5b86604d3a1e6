# factorization/controllers/signal_controller.py
import logging

from .base_controller import BaseController
from ..core.datagen import impulsive_signal
from ..core.experiment import SIGNAL_STREAM
from ..core.spectral import stft_power_spectrogram
from ..exceptions import ShinboError

logger = logging.getLogger(__name__)


class SignalController(BaseController):
    """
    Controller for raw signals and their spectrograms.

    Reads WAV/CSV signals, builds the spectrogram that feeds IS-NMF, and
    writes it as a CSV matrix with a JSON sidecar holding the frequency
    resolution and the frame rate.
    """

    def load(self, path, sample_rate=None):
        return self.read_signal(path, sample_rate)

    def surrogate(self, surrogate, seed):
        """Bearing-like burst train from a resolved surrogate section."""
        return impulsive_signal(
            surrogate['fs'], surrogate['duration'], surrogate['f0'], surrogate['carrier_hz'],
            surrogate['decay'], surrogate['noise_sigma'], [seed, SIGNAL_STREAM],
            amplitude=surrogate['amplitude'],
        )

    def spectrogram(self, signal, spectrogram):
        """
        Spectrogram of `signal` with a resolved spectrogram section.

        Args:
            signal (SampledSignal): Input samples
            spectrogram (dict): window_len, overlap, nfft, window, power

        Returns:
            Spectrogram
        """
        try:
            spec = stft_power_spectrogram(
                signal, spectrogram['window_len'], spectrogram['overlap'], spectrogram['nfft'],
                spectrogram['window'], spectrogram['power'],
            )
        except ShinboError as e:
            logger.error(f"Error computing spectrogram: {e}")
            raise
        logger.info(
            f"Spectrogram {spec.shape[0]}x{spec.shape[1]} "
            f"({spec.freq_resolution:g} Hz/bin, {spec.frame_rate:g} frames/s)"
        )
        return spec

    def save_spectrogram(self, out_dir, spec, spectrogram, source=None):
        """Write spectrogram.csv and its spectrogram.json sidecar; returns both paths."""
        out_dir = self.ensure_dir(out_dir)
        matrix = self.write_matrix(out_dir / 'spectrogram.csv', spec.power)
        sidecar = self.write_json(out_dir / 'spectrogram.json', {
            'shape': list(spec.shape),
            'freq_resolution': spec.freq_resolution,
            'frame_rate': spec.frame_rate,
            'spectrogram': spectrogram,
            'source': None if source is None else str(source),
        })
        return matrix, sidecar

    def save_surrogate(self, out_dir, signal, surrogate, seed):
        """Write signal.wav (32-bit float) and signal.json describing how it was drawn."""
        out_dir = self.ensure_dir(out_dir)
        wav = self.write_wav(out_dir / 'signal.wav', signal)
        sidecar = self.write_json(out_dir / 'signal.json', {
            'seed': seed,
            'sample_rate': signal.sample_rate,
            'samples': int(signal.samples.size),
            'duration': signal.duration,
            'surrogate': surrogate,
        })
        return wav, sidecar
