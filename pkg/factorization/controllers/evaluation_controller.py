# factorization/controllers/evaluation_controller.py
import logging

import numpy as np

from .base_controller import BaseController
from ..core.metrics import compare_groups, mean_std, score_factors
from ..core.spectral import detect_fundamental, envelope_spectrum, envsi
from ..exceptions import DimensionError, ShinboError

logger = logging.getLogger(__name__)

SYNTHETIC_METRICS = ('sir_W', 'sir_H', 'sp_W', 'sp_H')
SURROGATE_METRICS = ('envsi',)


class EvaluationController(BaseController):
    """
    Controller for factor-quality metrics and their statistical comparison.

    Scores estimates against ground truth (SIR, sparsity), scores activations
    by their envelope spectrum (ENVSI), and summarizes per-run tables into
    mean/std aggregates, Kruskal-Wallis results and BH-adjusted pairwise
    Mann-Whitney tables.
    """

    def evaluate_synthetic(self, W_true, H_true, W, H, metrics):
        """
        Args:
            W_true, H_true: Ground-truth factors
            W, H: Estimated factors
            metrics (dict): Resolved metrics section

        Returns:
            dict: sir_W, sir_H (mean dB), per-component SIR, matchings, sp_W, sp_H
        """
        try:
            return score_factors(W_true, H_true, W, H, metrics['sir_cap_db'], metrics['sparsity_tau'])
        except ShinboError as e:
            logger.error(f"Error scoring factors: {e}")
            raise

    def evaluate_activations(self, H, frame_rate, metrics):
        """
        Envelope-spectrum scores of every row of H.

        The fundamental is metrics['f0'] when given, otherwise the strongest
        envelope line inside metrics['search_band'] of each row.

        Returns:
            dict: per-component f0 and ENVSI, best ENVSI and its component
        """
        H = np.asarray(H, dtype=float)
        if not frame_rate or frame_rate <= 0:
            raise DimensionError("a positive frame rate is required to score activations")
        components = []
        for l, h in enumerate(H):
            if not np.any(h):
                components.append({'component': l, 'f0': None, 'envsi': 0.0})
                continue
            try:
                spec = envelope_spectrum(h, frame_rate)
                f0 = metrics.get('f0') or detect_fundamental(spec, metrics['search_band'])
                score = envsi(
                    spec, f0, M1=metrics['envsi_harmonics'], M2=metrics.get('envsi_bins'),
                    tolerance=metrics['envsi_tolerance'], truncate=metrics['envsi_truncate'],
                )
            except ShinboError as e:
                e.context.setdefault('component', l)
                logger.error(f"Error scoring activation {l}: {e}")
                raise
            components.append({'component': l, 'f0': float(f0), 'envsi': score})
        best = max(components, key=lambda c: c['envsi'])
        return {
            'frame_rate': float(frame_rate),
            'components': components,
            'envsi': best['envsi'],
            'best_component': best['component'],
        }

    def summarize(self, runs, algorithms, metric_names):
        """
        Aggregate a per-run table.

        Runs are grouped by (rank, noise); inside a group each algorithm's
        successful runs give one sample per metric.

        Args:
            runs (list): Per-run rows (seed, rank, noise, algorithm, status, metrics)
            algorithms (list): Algorithm labels in report order
            metric_names (iterable): Metric columns to summarize

        Returns:
            tuple: (aggregates, kruskal, pairwise) lists of rows
        """
        aggregates, kruskal, pairwise = [], [], []
        settings_seen = sorted({(run['rank'], run['noise']) for run in runs})
        for rank, noise in settings_seen:
            group = [run for run in runs if run['rank'] == rank and run['noise'] == noise and run['status'] == 'ok']
            for metric in metric_names:
                samples = {}
                for algorithm in algorithms:
                    values = [run[metric] for run in group if run['algorithm'] == algorithm]
                    if not values:
                        continue
                    mean, std = mean_std(values)
                    aggregates.append({
                        'rank': rank, 'noise': noise, 'algorithm': algorithm, 'metric': metric,
                        'mean': mean, 'std': std, 'n': len(values),
                    })
                    if len(values) >= 2:
                        samples[algorithm] = values
                if len(samples) < 2:
                    logger.warning(f"Skipping tests for {metric} at rank={rank} noise={noise}: fewer than 2 samples")
                    continue
                test, pairs = compare_groups(samples)
                kruskal.append({
                    'rank': rank, 'noise': noise, 'metric': metric,
                    'statistic': test.statistic, 'p_value': test.p_value,
                })
                for pair in pairs:
                    pairwise.append(dict(pair, rank=rank, noise=noise, metric=metric))
        return aggregates, kruskal, pairwise
