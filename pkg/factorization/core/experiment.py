# factorization/core/experiment.py
"""
One Monte-Carlo replicate: fresh data for a seed, every algorithm started
from the same initial factors, every algorithm scored.

Everything here is a pure function of plain dictionaries so that replicates
can be shipped to worker processes without Django.
"""
import logging
import time

import numpy as np

from ..exceptions import ShinboError
from ..models import SolverConfig, SynthSpec
from .bilevel import run_shinbo
from .datagen import add_noise, impulsive_signal, synth_factors
from .initialization import initial_factors
from .metrics import score_factors
from .solvers import run_mu
from .spectral import best_component_envsi, stft_power_spectrogram

logger = logging.getLogger(__name__)

NOISE_STREAM = 2
SIGNAL_STREAM = 3

MATRIX_INIT = 'warm_start'
SIGNAL_INIT = 'truncated_gaussian'

SOLVER_KEYS = (
    'max_outer_iters', 'inner_iters', 'tol', 'step_alpha', 'w_update_rule', 'floor', 'init',
    'warm_start_iters', 'lambda_update', 'jacobian', 'outer_reference', 'normalize',
    'update_exponent', 'step_scaling', 'lambda_max',
)


def parse_algorithm(label):
    """'shinbo' -> ('shinbo', None); 'mu' -> ('mu', 0.0); 'mu:0.5' -> ('mu', 0.5)."""
    name, _, value = str(label).strip().lower().partition(':')
    if name == 'shinbo' and not value:
        return name, None
    if name == 'mu':
        lam = float(value) if value else 0.0
        if lam >= 0:
            return name, lam
    raise ValueError(f"unknown algorithm {label!r}; expected mu, mu:<lambda> or shinbo")


def build_solver_config(solver, rank, algorithm, seed=None, default_init=MATRIX_INIT):
    """
    SolverConfig for `algorithm` from a resolved solver section.

    mu:<lambda> runs with the fixed penalty lambda on every row; shinbo with
    per-row adaptive penalties. An unset or null init becomes `default_init`.
    """
    name, lam = parse_algorithm(algorithm)
    options = {key: solver[key] for key in SOLVER_KEYS if key in solver}
    if options.get('init') is None:
        options['init'] = default_init
    return SolverConfig(
        rank=int(rank),
        lambda_mode='fixed' if name == 'mu' else 'per_row_adaptive',
        lambda_value=lam if name == 'mu' else 0.0,
        seed=int(solver.get('seed', 0) if seed is None else seed),
        **options,
    )


def run_algorithm(X, config, algorithm, initial=None):
    """Dispatch to run_mu or run_shinbo; returns (FactorPair, lambdas, RunTrace)."""
    name, _ = parse_algorithm(algorithm)
    if name == 'mu':
        pair, trace = run_mu(X, config, initial=initial)
        return pair, [config.lambda_value] * config.rank, trace
    pair, lambdas, trace = run_shinbo(X, config, initial=initial)
    return pair, lambdas.tolist(), trace


def trace_points(trace):
    return [
        {'k': record.k, 'D0': record.objective.fit, 'response': record.response}
        for record in trace
    ]


def _synthetic_data(task):
    synth = task['synth']
    spec = SynthSpec(
        m=synth['m'], n=synth['n'], r=task['rank'],
        density_W=synth['density_W'], density_H=synth['density_H'], seed=task['seed'],
    )
    W_true, H_true, X = synth_factors(spec)
    if task['noise'] > 0:
        X = add_noise(X, task['noise'], [task['seed'], NOISE_STREAM])
    return X, (W_true, H_true), None


def _surrogate_data(task):
    surrogate = task['surrogate']
    spectrogram = task['spectrogram']
    signal = impulsive_signal(
        surrogate['fs'], surrogate['duration'], surrogate['f0'], surrogate['carrier_hz'],
        surrogate['decay'], surrogate['noise_sigma'], [task['seed'], SIGNAL_STREAM],
        amplitude=surrogate['amplitude'],
    )
    spec = stft_power_spectrogram(
        signal, spectrogram['window_len'], spectrogram['overlap'], spectrogram['nfft'],
        spectrogram['window'], spectrogram['power'],
    )
    return spec.power, None, spec.frame_rate


def describe_error(error):
    """Domain errors carry their own message; anything else is prefixed with its type."""
    if isinstance(error, ShinboError):
        return str(error)
    return f"{type(error).__name__}: {error}"


def failed_rows(base, algorithms, error):
    """One 'failed' row per algorithm for a task or algorithm that raised `error`."""
    return [dict(base, algorithm=a, status='failed', error=describe_error(error)) for a in algorithms]


def run_replicate(task):
    """
    Run every algorithm of `task` on one seed's data.

    task keys: seed, rank, noise, mode ('synthetic' | 'surrogate'),
    algorithms, synth, solver, spectrogram, metrics, surrogate.

    Returns one row per algorithm with status 'ok' (metrics, iterations,
    stop reason, trace points) or 'failed' (error message). A failure of one
    algorithm leaves the others untouched. Spectrogram replicates start from
    the clipped-Gaussian draw unless the solver section names an init.
    """
    base = {'seed': task['seed'], 'rank': task['rank'], 'noise': task['noise']}
    default_init = SIGNAL_INIT if task['mode'] == 'surrogate' else MATRIX_INIT
    try:
        if task['mode'] == 'surrogate':
            X, truth, frame_rate = _surrogate_data(task)
        else:
            X, truth, frame_rate = _synthetic_data(task)
        shared = initial_factors(
            X, build_solver_config(task['solver'], task['rank'], 'mu', task['seed'], default_init)
        )
    except Exception as e:
        logger.error(f"replicate seed={task['seed']}: data preparation failed: {describe_error(e)}")
        return failed_rows(base, task['algorithms'], e)

    metrics = task['metrics']
    rows = []
    for algorithm in task['algorithms']:
        row = dict(base, algorithm=algorithm)
        start = time.perf_counter()
        try:
            config = build_solver_config(task['solver'], task['rank'], algorithm, task['seed'], default_init)
            pair, lambdas, trace = run_algorithm(X, config, algorithm, initial=shared)
            if truth is not None:
                scores = score_factors(
                    truth[0], truth[1], pair.W, pair.H, metrics['sir_cap_db'], metrics['sparsity_tau'],
                )
                row.update({key: scores[key] for key in ('sir_W', 'sir_H', 'sp_W', 'sp_H')})
            else:
                f0 = metrics.get('f0') or task['surrogate']['f0']
                best, _ = best_component_envsi(
                    pair.H, frame_rate, f0, metrics['envsi_harmonics'], metrics['envsi_tolerance'],
                    metrics.get('envsi_bins'), metrics.get('envsi_truncate', False),
                )
                row['envsi'] = best
        except Exception as e:
            logger.error(f"replicate seed={task['seed']} algorithm={algorithm}: {describe_error(e)}")
            rows.extend(failed_rows(base, [algorithm], e))
            continue
        row.update(
            status='ok',
            iterations=len(trace),
            stop_reason=trace.stop_reason,
            final_lambdas=[float(v) for v in np.asarray(lambdas, dtype=float)],
            seconds=time.perf_counter() - start,
            trace=trace_points(trace),
        )
        rows.append(row)
    return rows
