# factorization/presenters/report_presenter.py
import logging
from pathlib import Path

from .base_presenter import BasePresenter
from ..controllers.evaluation_controller import SURROGATE_METRICS, SYNTHETIC_METRICS
from ..exceptions import ConfigError

logger = logging.getLogger(__name__)

RUN_COLUMNS = ['seed', 'rank', 'noise', 'algorithm', 'status']
RUN_TAIL = ['iterations', 'stop_reason', 'seconds', 'error']
AGGREGATE_COLUMNS = ['rank', 'noise', 'metric', 'algorithm', 'n', 'mean', 'std', 'mean_std']
KRUSKAL_COLUMNS = ['rank', 'noise', 'metric', 'statistic', 'p_value']
PAIRWISE_COLUMNS = ['rank', 'noise', 'metric', 'a', 'b', 'statistic', 'p_value', 'p_adjusted']
TRACE_COLUMNS = ['algorithm', 'rank', 'noise', 'seed', 'k', 'D0', 'response']


class ReportPresenter(BasePresenter):
    """
    Presenter for the mc and eval commands.

    Lays out Monte-Carlo bundles as tidy CSV tables (per-run metrics,
    mean/std aggregates, Kruskal-Wallis, BH-adjusted pairwise Mann-Whitney,
    convergence traces) plus one report.json, and writes byte-stable
    evaluation documents.
    """

    def __init__(self):
        super().__init__()
        self.experiment_controller = self.service_registry.get_experiment_controller()
        self.evaluation_controller = self.service_registry.get_evaluation_controller()
        self.solver_controller = self.service_registry.get_solver_controller()
        self.dataset_controller = self.service_registry.get_dataset_controller()

    def format_aggregates(self, aggregates):
        return [dict(row, mean_std=f"{row['mean']:.2f} ± {row['std']:.2f}") for row in aggregates]

    def format_bundle(self, bundle):
        """Plain report document of a ReportBundle (traces are shipped as CSV only)."""
        return {
            'config': bundle.config,
            'partial': bundle.partial,
            'runs': bundle.runs,
            'aggregates': bundle.aggregates,
            'kruskal': bundle.kruskal,
            'pairwise': bundle.pairwise,
            'failures': bundle.failures,
        }

    def write_bundle(self, out_dir, bundle):
        controller = self.experiment_controller
        out_dir = controller.ensure_dir(out_dir)
        metrics = list(SURROGATE_METRICS if bundle.config['mc']['mode'] == 'surrogate' else SYNTHETIC_METRICS)
        return {
            'runs': controller.write_rows(out_dir / 'runs.csv', RUN_COLUMNS + metrics + RUN_TAIL, bundle.runs),
            'aggregates': controller.write_rows(
                out_dir / 'aggregates.csv', AGGREGATE_COLUMNS, self.format_aggregates(bundle.aggregates),
            ),
            'kruskal': controller.write_rows(out_dir / 'kruskal.csv', KRUSKAL_COLUMNS, bundle.kruskal),
            'pairwise': controller.write_rows(out_dir / 'pairwise.csv', PAIRWISE_COLUMNS, bundle.pairwise),
            'traces': controller.write_rows(out_dir / 'traces.csv', TRACE_COLUMNS, bundle.traces),
            'report': controller.write_json(out_dir / 'report.json', self.format_bundle(bundle)),
        }

    def handle_monte_carlo(self, raw_config, out_dir):
        return self.handle('mc', self._monte_carlo, raw_config, out_dir)

    def _monte_carlo(self, raw_config, out_dir):
        config = self.resolve(raw_config)
        bundle = self.experiment_controller.run_monte_carlo(config)
        written = self.write_bundle(Path(out_dir), bundle)
        message = f"{len(bundle.runs)} runs, {len(bundle.failures)} failed"
        return self.format_api_response(
            True,
            data={
                'partial': bundle.partial,
                'aggregates': self.format_aggregates(bundle.aggregates),
                'files': {name: str(path) for name, path in written.items()},
            },
            message=message,
        )

    def handle_eval(self, raw_config, out_path=None, run_dir=None, W_path=None, H_path=None,
                    truth_dir=None, frame_rate=None):
        """
        Recompute metrics from persisted artifacts.

        Args:
            raw_config (dict): Unvalidated configuration (metrics section used)
            out_path: Output JSON (default: <run_dir>/eval.json)
            run_dir: Directory holding W.csv, H.csv and report.json of a run
            W_path, H_path: Explicit factor files (override run_dir)
            truth_dir: Directory with W_true.csv and H_true.csv (synthetic mode)
            frame_rate: Spectrogram frame rate (activation mode)

        Returns:
            tuple: (response_data, status)
        """
        return self.handle('eval', self._eval, raw_config, out_path, run_dir, W_path, H_path, truth_dir, frame_rate)

    def _eval(self, raw_config, out_path, run_dir, W_path, H_path, truth_dir, frame_rate):
        config = self.resolve(raw_config)
        metrics = config['metrics']
        run_dir = Path(run_dir) if run_dir is not None else None
        if W_path is None and run_dir is not None:
            W_path = run_dir / 'W.csv'
        if H_path is None and run_dir is not None:
            H_path = run_dir / 'H.csv'
        if H_path is None:
            raise ConfigError("eval needs a run directory or explicit factor files")
        if out_path is None:
            if run_dir is None:
                raise ConfigError("eval needs an output path when no run directory is given")
            out_path = run_dir / 'eval.json'

        H = self.solver_controller.read_matrix(H_path)
        inputs = {'H': str(H_path)}
        if truth_dir is not None:
            if W_path is None:
                raise ConfigError("synthetic evaluation needs W as well as H")
            W = self.solver_controller.read_matrix(W_path)
            W_true, H_true = self.dataset_controller.load_truth(truth_dir)
            inputs.update(W=str(W_path), truth=str(truth_dir))
            mode = 'synthetic'
            scores = self.evaluation_controller.evaluate_synthetic(W_true, H_true, W, H, metrics)
        else:
            frame_rate = frame_rate or metrics.get('frame_rate') or self._run_frame_rate(run_dir)
            if not frame_rate:
                raise ConfigError("activation evaluation needs a frame rate (flag, config or run report)")
            mode = 'activations'
            scores = self.evaluation_controller.evaluate_activations(H, frame_rate, metrics)

        document = {'mode': mode, 'inputs': inputs, 'metrics_config': metrics, 'metrics': scores}
        written = self.solver_controller.write_json(out_path, document)
        return self.format_api_response(
            True, data={'mode': mode, 'metrics': scores, 'file': str(written)}, message=f"Evaluation written to {written}",
        )

    def _run_frame_rate(self, run_dir):
        if run_dir is None or not (run_dir / 'report.json').exists():
            return None
        report = self.solver_controller.read_json(run_dir / 'report.json')
        return (report.get('input') or {}).get('frame_rate')
