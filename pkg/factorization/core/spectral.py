# factorization/core/spectral.py
"""
Spectrogram construction and envelope-spectrum scoring of NMF activations.
"""
import logging

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.fft import rfft
from scipy.signal import get_window

from ..exceptions import DimensionError, DomainError
from ..models import EnvelopeSpectrum, SampledSignal, Spectrogram

logger = logging.getLogger(__name__)

WINDOWS = {'hann': 'hann', 'rectangular': 'boxcar', 'hamming': 'hamming'}
MIN_ACTIVATION_LENGTH = 8


def frame_count(length, window_len, overlap):
    """floor((length - window_len) / hop) + 1 with hop = window_len - overlap."""
    hop = window_len - overlap
    return (length - window_len) // hop + 1


def stft_power_spectrogram(signal, window_len=128, overlap=100, nfft=512,
                           window='hann', power=True):
    """
    One-sided short-time Fourier spectrogram.

    Frames advance by window_len - overlap samples, are multiplied by the
    (periodic) window, zero-padded to nfft and transformed. With power=True
    the squared magnitude is returned, otherwise the magnitude.

    Args:
        signal: SampledSignal
        window_len: samples per frame
        overlap: samples shared by consecutive frames
        nfft: transform length (>= window_len)
        window: 'hann', 'hamming' or 'rectangular'
        power: squared magnitude (True) or magnitude (False)

    Returns:
        Spectrogram of shape (nfft // 2 + 1, frames)
    """
    if not isinstance(signal, SampledSignal):
        raise TypeError("signal must be a SampledSignal")
    if not 0 <= overlap < window_len <= nfft:
        raise DomainError(
            f"need 0 <= overlap < window_len <= nfft, got overlap={overlap}, "
            f"window_len={window_len}, nfft={nfft}"
        )
    if window not in WINDOWS:
        raise DomainError(f"unknown window {window!r}; expected one of {', '.join(WINDOWS)}")
    if signal.samples.size < window_len:
        raise DimensionError(
            f"signal has {signal.samples.size} samples; at least {window_len} are needed for one frame"
        )

    hop = window_len - overlap
    frames = sliding_window_view(signal.samples, window_len)[::hop]
    taper = get_window(WINDOWS[window], window_len)
    spectrum = np.abs(rfft(frames * taper, n=nfft, axis=1)).T
    values = spectrum ** 2 if power else spectrum

    logger.debug(f"STFT: {values.shape[1]} frames of {window_len} samples, hop {hop}, nfft {nfft}")
    return Spectrogram(
        power=values,
        freq_resolution=signal.sample_rate / nfft,
        frame_rate=signal.sample_rate / hop,
    )


def envelope_spectrum(activation, frame_rate):
    """
    Magnitude spectrum of the mean-removed activation (the activation is
    already a nonnegative energy envelope, so no analytic-signal step).
    """
    activation = np.asarray(activation, dtype=float).reshape(-1)
    if activation.size < MIN_ACTIVATION_LENGTH:
        raise DimensionError(
            f"activation has {activation.size} samples; at least {MIN_ACTIVATION_LENGTH} are needed"
        )
    if not frame_rate > 0:
        raise DomainError(f"frame_rate must be > 0, got {frame_rate}")
    if not np.any(activation):
        raise DomainError("activation is identically zero; no envelope spectrum")

    magnitudes = np.abs(rfft(activation - activation.mean()))
    return EnvelopeSpectrum(magnitudes=magnitudes, bin_hz=frame_rate / activation.size)


def detect_fundamental(spec, search_band):
    """Frequency of the largest non-DC bin inside [f_lo, f_hi]."""
    f_lo, f_hi = search_band
    if f_lo > f_hi:
        raise DomainError(f"search band [{f_lo}, {f_hi}] is reversed")
    freqs = spec.frequencies
    band = np.flatnonzero((freqs >= f_lo) & (freqs <= f_hi) & (np.arange(freqs.size) > 0))
    if band.size == 0:
        raise DomainError(
            f"search band [{f_lo}, {f_hi}] Hz contains no non-DC bin (bin width {spec.bin_hz:g} Hz)"
        )
    return float(freqs[band[np.argmax(spec.magnitudes[band])]])


def envsi(spec, f0, M1=6, M2=None, tolerance=1, truncate=False):
    """
    Envelope-spectrum based indicator.

        ENVSI = sum_{i=1..M1} AIS_i^2 / sum_{k=1..M2} S_k^2

    AIS_i is the largest magnitude within +-tolerance bins of i * f0; S_k are
    the non-DC bin magnitudes up to M2 (default: every bin up to Nyquist).
    A harmonic beyond the last bin raises unless truncate=True, in which case
    the remaining harmonics are dropped.
    """
    if M1 < 1:
        raise DomainError(f"M1 must be >= 1, got {M1}")
    if not f0 > 0:
        raise DomainError(f"fundamental must be > 0, got {f0}")
    magnitudes = np.asarray(spec.magnitudes, dtype=float)
    last = magnitudes.size - 1
    M2 = last if M2 is None else int(M2)
    if not 1 <= M2 <= last:
        raise DimensionError(f"M2 = {M2} outside [1, {last}]")

    harmonics = []
    for i in range(1, M1 + 1):
        centre = int(round(i * f0 / spec.bin_hz))
        if centre > last:
            if truncate:
                logger.debug(f"ENVSI: harmonic {i} of {f0:g} Hz beyond Nyquist, truncated")
                break
            raise DomainError(f"harmonic {i} of {f0:g} Hz lies beyond the Nyquist bin", harmonic=i)
        lo, hi = max(centre - tolerance, 1), min(centre + tolerance, last)
        harmonics.append(magnitudes[lo:hi + 1].max() if lo <= hi else 0.0)

    denominator = float(np.sum(magnitudes[1:M2 + 1] ** 2))
    if denominator == 0.0:
        return 0.0
    return float(np.sum(np.square(harmonics)) / denominator)


def best_component_envsi(H, frame_rate, f0, M1=6, tolerance=1, M2=None, truncate=True):
    """
    ENVSI of every row of H at fundamental f0; all-zero rows score 0.
    Returns (best, per_row).
    """
    scores = []
    for h in np.asarray(H, dtype=float):
        if not np.any(h):
            scores.append(0.0)
            continue
        spec = envelope_spectrum(h, frame_rate)
        scores.append(envsi(spec, f0, M1=M1, M2=M2, tolerance=tolerance, truncate=truncate))
    return max(scores), scores
