from dataclasses import dataclass

import numpy as np

from ..exceptions import DomainError


@dataclass
class SampledSignal:
    """Mono signal with its sampling rate in Hz."""
    samples: np.ndarray
    sample_rate: float

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=float).reshape(-1)
        if not self.sample_rate > 0:
            raise DomainError(f"sample_rate must be > 0, got {self.sample_rate}")
        if not np.all(np.isfinite(self.samples)):
            raise DomainError("signal contains NaN or Inf", index=np.argwhere(~np.isfinite(self.samples))[0])

    @property
    def duration(self):
        return self.samples.size / self.sample_rate


@dataclass
class Spectrogram:
    """One-sided (power or magnitude) spectrogram, frequency bins x frames."""
    power: np.ndarray
    freq_resolution: float
    frame_rate: float

    @property
    def shape(self):
        return self.power.shape


@dataclass
class EnvelopeSpectrum:
    """One-sided magnitude spectrum of an activation; bin k sits at k * bin_hz."""
    magnitudes: np.ndarray
    bin_hz: float

    @property
    def frequencies(self):
        return np.arange(self.magnitudes.size) * self.bin_hz
