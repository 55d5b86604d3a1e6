# factorization/core/__init__.py
"""
Numerical kernels. Pure functions of numpy arrays and the domain types in
factorization.models; nothing here touches Django or the filesystem.
"""
from .bilevel import response_report, row_hypergradient, run_shinbo, sweep_rows, unrolled_row_response
from .datagen import add_noise, impulsive_signal, synth_factors
from .divergence import beta_divergence, diversity_J, penalized_objective, relative_objective_change
from .initialization import initial_factors, nndsvd_init, truncated_gaussian_init, warm_start
from .metrics import bh_adjust, compare_groups, kruskal_wallis, mann_whitney, mean_std, sir, sparsity
from .solvers import run_mu
from .spectral import detect_fundamental, envelope_spectrum, envsi, stft_power_spectrogram
from .updates import normalize, update_H_full, update_H_row, update_W

__all__ = [
    'add_noise',
    'beta_divergence',
    'bh_adjust',
    'compare_groups',
    'detect_fundamental',
    'diversity_J',
    'envelope_spectrum',
    'envsi',
    'impulsive_signal',
    'initial_factors',
    'kruskal_wallis',
    'mann_whitney',
    'mean_std',
    'nndsvd_init',
    'normalize',
    'penalized_objective',
    'relative_objective_change',
    'response_report',
    'row_hypergradient',
    'run_mu',
    'run_shinbo',
    'sir',
    'sparsity',
    'stft_power_spectrogram',
    'sweep_rows',
    'synth_factors',
    'truncated_gaussian_init',
    'unrolled_row_response',
    'update_H_full',
    'update_H_row',
    'update_W',
    'warm_start',
]
