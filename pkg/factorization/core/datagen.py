# factorization/core/datagen.py
"""
Seeded synthetic data: sparse ground-truth factors, nonnegative noise
corruption and the bearing-like surrogate vibration signal.
"""
import logging

import numpy as np

from ..exceptions import DomainError
from ..models import SampledSignal, SynthSpec

logger = logging.getLogger(__name__)

MAX_PLACEMENT_ATTEMPTS = 1000


def nonzero_count(density, size):
    """round(density * size) with halves rounded up."""
    return int(np.floor(density * size + 0.5))


def _sparse_factor(shape, density, rng, axis, name):
    """
    Matrix of the given shape with exactly nonzero_count(density, size)
    entries drawn from U(0, 1], placed uniformly at random and resampled until
    every slice along `axis` holds a nonzero.
    """
    size = shape[0] * shape[1]
    nnz = nonzero_count(density, size)
    components = shape[1 - axis]
    if nnz < components:
        raise DomainError(
            f"{name}: {nnz} nonzeros cannot cover {components} components "
            f"(density {density} on {shape[0]}x{shape[1]})",
            nonzeros=nnz,
        )
    for attempt in range(MAX_PLACEMENT_ATTEMPTS):
        mask = np.zeros(size, dtype=bool)
        mask[rng.choice(size, size=nnz, replace=False)] = True
        mask = mask.reshape(shape)
        if np.all(mask.any(axis=axis)):
            break
    else:
        raise DomainError(f"{name}: no placement covered every component after {MAX_PLACEMENT_ATTEMPTS} draws")
    if attempt:
        logger.debug(f"{name}: placement resampled {attempt} times")
    values = np.zeros(shape)
    values[mask] = 1.0 - rng.random(nnz)
    return values


def synth_factors(spec):
    """
    Ground truth (W_true, H_true, X = W_true H_true) for a SynthSpec.

    W keeps every column and H every row nonzero. Deterministic per seed.
    """
    if not isinstance(spec, SynthSpec):
        raise TypeError("spec must be a SynthSpec")
    rng = np.random.default_rng(spec.seed)
    W = _sparse_factor((spec.m, spec.r), spec.density_W, rng, axis=0, name='W')
    H = _sparse_factor((spec.r, spec.n), spec.density_H, rng, axis=1, name='H')
    return W, H, W @ H


def add_noise(X, epsilon, seed):
    """Y = max(X + epsilon G, 0) with G i.i.d. standard normal."""
    if epsilon < 0:
        raise DomainError(f"noise level must be >= 0, got {epsilon}")
    X = np.asarray(X, dtype=float)
    if epsilon == 0:
        return X.copy()
    rng = np.random.default_rng(seed)
    return np.maximum(X + epsilon * rng.standard_normal(X.shape), 0.0)


def impulsive_signal(fs, duration, f0, carrier_hz, decay, noise_sigma, seed, amplitude=1.0):
    """
    Surrogate vibration signal: exponentially decaying carrier bursts
    repeating at f0 plus white Gaussian noise.

        tau(t) = t - floor(t f0) / f0
        x(t)   = amplitude exp(-decay tau) sin(2 pi carrier_hz tau) + noise_sigma n(t)

    amplitude=0 gives the pure-noise control.
    """
    errors = []
    if not fs > 0:
        errors.append(f"fs must be > 0 (got {fs})")
    if not duration > 0:
        errors.append(f"duration must be > 0 (got {duration})")
    if not 0 < f0 < fs / 2:
        errors.append(f"f0 must lie in (0, fs/2) (got {f0})")
    if not 0 < carrier_hz < fs / 2:
        errors.append(f"carrier_hz must lie in (0, fs/2) (got {carrier_hz})")
    if decay < 0:
        errors.append(f"decay must be >= 0 (got {decay})")
    if noise_sigma < 0:
        errors.append(f"noise_sigma must be >= 0 (got {noise_sigma})")
    if amplitude < 0:
        errors.append(f"amplitude must be >= 0 (got {amplitude})")
    if errors:
        raise DomainError("; ".join(errors))

    n = int(round(fs * duration))
    t = np.arange(n) / fs
    tau = t - np.floor(t * f0) / f0
    bursts = amplitude * np.exp(-decay * tau) * np.sin(2.0 * np.pi * carrier_hz * tau)
    rng = np.random.default_rng(seed)
    noise = noise_sigma * rng.standard_normal(n) if noise_sigma > 0 else np.zeros(n)
    return SampledSignal(samples=bursts + noise, sample_rate=fs)
