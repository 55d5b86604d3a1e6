# factorization/controllers/experiment_controller.py
import logging
from concurrent.futures import ProcessPoolExecutor, as_completed

from .base_controller import BaseController
from .evaluation_controller import SURROGATE_METRICS, SYNTHETIC_METRICS
from .service_registry import ServiceRegistry
from ..core.experiment import describe_error, failed_rows, run_replicate
from ..models import ReportBundle

logger = logging.getLogger(__name__)

DEFAULT_SURROGATE_RANK = 4


class ExperimentController(BaseController):
    """
    Controller for Monte-Carlo batches.

    Expands a resolved configuration into one task per (rank, noise, seed),
    runs the tasks (in a process pool when more than one worker is
    configured), and collects the per-run table into a ReportBundle. Results
    are keyed and ordered by (rank, noise, seed, algorithm) so the report does
    not depend on scheduling; a failing task only marks its own rows.
    """

    def tasks(self, config):
        mc = config['mc']
        if mc['mode'] == 'surrogate':
            default_rank = config['solver'].get('rank') or DEFAULT_SURROGATE_RANK
        else:
            default_rank = config['solver'].get('rank') or config['synth']['r']
        ranks = mc['ranks'] or [default_rank]
        noises = mc['noise'] or [config['synth']['noise']]
        return [
            {
                'seed': mc['base_seed'] + i,
                'rank': rank,
                'noise': noise,
                'mode': mc['mode'],
                'algorithms': list(mc['algorithms']),
                'synth': config['synth'],
                'solver': config['solver'],
                'spectrogram': config['spectrogram'],
                'metrics': config['metrics'],
                'surrogate': mc['surrogate'],
            }
            for rank in ranks
            for noise in noises
            for i in range(mc['runs'])
        ]

    def execute(self, tasks, workers=1):
        """
        Run every task and return {(rank, noise, seed): rows}.
        """
        results = {}
        if workers <= 1 or len(tasks) <= 1:
            for task in tasks:
                try:
                    results[self._key(task)] = run_replicate(task)
                except Exception as e:
                    results[self._key(task)] = self._failed(task, e)
            return results

        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {pool.submit(run_replicate, task): task for task in tasks}
            for future in as_completed(futures):
                task = futures[future]
                try:
                    results[self._key(task)] = future.result()
                except Exception as e:
                    results[self._key(task)] = self._failed(task, e)
        return results

    @staticmethod
    def _failed(task, error):
        logger.error(
            f"Error in Monte-Carlo task seed={task['seed']} rank={task['rank']}: {describe_error(error)}"
        )
        base = {'seed': task['seed'], 'rank': task['rank'], 'noise': task['noise']}
        return failed_rows(base, task['algorithms'], error)

    @staticmethod
    def _key(task):
        return task['rank'], task['noise'], task['seed']

    def run_monte_carlo(self, config):
        """
        Execute a resolved Monte-Carlo configuration.

        Returns:
            ReportBundle: runs, aggregates, Kruskal-Wallis and pairwise tables,
            tidy traces and failures, with the resolved config embedded
        """
        mc = config['mc']
        tasks = self.tasks(config)
        logger.info(
            f"Monte Carlo: {len(tasks)} replicates x {len(mc['algorithms'])} algorithms "
            f"on {mc['workers']} worker(s)"
        )
        results = self.execute(tasks, mc['workers'])

        order = {algorithm: i for i, algorithm in enumerate(mc['algorithms'])}
        bundle = ReportBundle(config=config)
        for key in sorted(results):
            for row in sorted(results[key], key=lambda r: order[r['algorithm']]):
                trace = row.pop('trace', [])
                bundle.runs.append(row)
                if row['status'] != 'ok':
                    bundle.failures.append({k: row[k] for k in ('seed', 'rank', 'noise', 'algorithm', 'error')})
                for point in trace:
                    bundle.traces.append({
                        'algorithm': row['algorithm'], 'rank': row['rank'], 'noise': row['noise'],
                        'seed': row['seed'], **point,
                    })

        metric_names = SURROGATE_METRICS if mc['mode'] == 'surrogate' else SYNTHETIC_METRICS
        evaluation = ServiceRegistry.get_instance().get_evaluation_controller()
        bundle.aggregates, bundle.kruskal, bundle.pairwise = evaluation.summarize(
            bundle.runs, mc['algorithms'], metric_names,
        )
        if bundle.partial:
            logger.warning(f"Monte Carlo finished with {len(bundle.failures)} failed run(s)")
        return bundle
